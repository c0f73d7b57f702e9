#include "pvdg/power_flow.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pvdg/errors.hpp"

namespace pvdg {

namespace {

// Largest bus power residual |S_spec - V conj(Y V)| over non-slack buses,
// with Y*V accumulated from the line list (identical to the admittance
// matrix product for a shunt-free network).
double max_mismatch(const Network& net, std::span<const std::complex<double>> s_spec,
                    const std::vector<std::complex<double>>& v) {
    const std::size_t n = net.bus_count();
    std::vector<std::complex<double>> yv(n, {0.0, 0.0});
    for (std::size_t l = 0; l < net.line_count(); ++l) {
        const std::size_t a = net.bus_index(net.lines()[l].from_bus);
        const std::size_t b = net.bus_index(net.lines()[l].to_bus);
        const std::complex<double> flow = (v[a] - v[b]) / net.line_z_pu(l);
        yv[a] += flow;
        yv[b] -= flow;
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == net.slack_index()) continue;
        worst = std::max(worst, std::abs(s_spec[i] - v[i] * std::conj(yv[i])));
    }
    return worst;
}

}  // namespace

TimestepSolution solve_timestep(const Network& network,
                                std::span<const std::complex<double>> s_inj,
                                const SweepOptions& options) {
    const std::size_t n = network.bus_count();
    const std::size_t nl = network.line_count();
    if (s_inj.size() != n) {
        throw ValidationError("injection vector length " + std::to_string(s_inj.size()) +
                              " does not match bus count " + std::to_string(n));
    }
    const RadialOrder& order = network.order();
    const std::size_t slack = network.slack_index();

    // Per-line impedances and child bus of each line, resolved once.
    std::vector<std::complex<double>> z(nl);
    std::vector<std::size_t> child_of_line(nl);
    for (std::size_t l = 0; l < nl; ++l) z[l] = network.line_z_pu(l);
    for (std::size_t b = 0; b < n; ++b) {
        if (order.parent_line[b] >= 0) child_of_line[static_cast<std::size_t>(order.parent_line[b])] = b;
    }

    TimestepSolution sol;
    sol.v.assign(n, {1.0, 0.0});
    sol.i_line.assign(nl, {0.0, 0.0});
    sol.p_line_from.assign(nl, 0.0);

    std::vector<std::complex<double>> accum(n);
    bool converged = false;
    double max_dv = 0.0;

    for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
        // Backward: accumulate branch currents from the leaves. accum[b]
        // starts at the current drawn from the network at b.
        for (std::size_t b = 0; b < n; ++b) {
            accum[b] = (b == slack) ? std::complex<double>{0.0, 0.0}
                                    : -std::conj(s_inj[b] / sol.v[b]);
        }
        for (std::size_t k = order.bus_order.size(); k-- > 1;) {
            const std::size_t b = order.bus_order[k];
            const auto l = static_cast<std::size_t>(order.parent_line[b]);
            sol.i_line[l] = accum[b];
            accum[static_cast<std::size_t>(order.parent_bus[b])] += accum[b];
        }

        // Forward: update child voltages from the (already updated) parent.
        max_dv = 0.0;
        for (std::size_t l : order.line_order) {
            const std::size_t child = child_of_line[l];
            const auto parent = static_cast<std::size_t>(order.parent_bus[child]);
            const std::complex<double> v_new = sol.v[parent] - z[l] * sol.i_line[l];
            max_dv = std::max(max_dv, std::abs(v_new - sol.v[child]));
            sol.v[child] = v_new;
            if (std::abs(v_new) < options.collapse_floor_pu) {
                throw NumericalError("voltage collapse: |v| = " +
                                     std::to_string(std::abs(v_new)) + " pu at bus " +
                                     std::to_string(network.buses()[child].id) + " in sweep " +
                                     std::to_string(sweep));
            }
        }

        sol.iterations = sweep;
        if (max_dv <= options.tol_pu) {
            converged = true;
            break;
        }
    }

    if (!converged) {
        throw NumericalError("power flow did not converge in " +
                             std::to_string(options.max_sweeps) + " sweeps; worst |dV| = " +
                             std::to_string(max_dv) + " pu, worst mismatch = " +
                             std::to_string(max_mismatch(network, s_inj, sol.v)) + " pu");
    }

    sol.max_mismatch_pu = max_mismatch(network, s_inj, sol.v);
    if (sol.max_mismatch_pu > options.mismatch_tol_pu) {
        throw NumericalError("converged voltages violate the power balance: mismatch " +
                             std::to_string(sol.max_mismatch_pu) + " pu > " +
                             std::to_string(options.mismatch_tol_pu) + " pu");
    }

    for (std::size_t l = 0; l < nl; ++l) {
        const std::size_t parent = network.bus_index(network.lines()[l].from_bus);
        sol.p_line_from[l] = (sol.v[parent] * std::conj(sol.i_line[l])).real();
    }
    return sol;
}

std::vector<std::complex<double>> net_injections_pu(const Study& study,
                                                    const PvInjectionSeries& pv,
                                                    std::size_t t) {
    const Network& net = study.network();
    const double s_base = net.s_base_kw();
    std::vector<std::complex<double>> s(net.bus_count(), {0.0, 0.0});
    for (std::size_t b = 0; b < net.bus_count(); ++b) {
        s[b] = {-study.load_p_kw(b, t) / s_base, -study.load_q_kvar(b, t) / s_base};
    }
    for (std::size_t c = 0; c < pv.p_kw.size(); ++c) {
        s[candidate_bus_index(study, c)] += pv.p_kw[c][t] / s_base;  // unity power factor
    }
    return s;
}

PowerFlowSolution solve_series(const Study& study, const InstallationPlan& plan,
                               const SweepOptions& options) {
    validate_plan(plan, study.solar_ready());
    const PvInjectionSeries pv = pv_profile(plan, study.insolation());

    PowerFlowSolution solution;
    solution.steps.reserve(study.horizon());
    for (std::size_t t = 0; t < study.horizon(); ++t) {
        const auto s = net_injections_pu(study, pv, t);
        try {
            solution.steps.push_back(solve_timestep(study.network(), s, options));
        } catch (const NumericalError& e) {
            throw NumericalError("timestep " + std::to_string(t) + ": " + e.what());
        }
    }
    return solution;
}

}  // namespace pvdg
