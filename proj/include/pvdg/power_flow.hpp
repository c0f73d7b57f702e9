#pragma once

#include <complex>
#include <span>
#include <vector>

#include "pvdg/network.hpp"
#include "pvdg/pv_model.hpp"

namespace pvdg {

struct SweepOptions {
    double tol_pu = 1e-8;            // max |dV| between sweeps
    int max_sweeps = 100;
    double mismatch_tol_pu = 1e-6;   // post-convergence bus power check
    double collapse_floor_pu = 0.5;  // any |v| below this aborts the solve
};

struct TimestepSolution {
    std::vector<std::complex<double>> v;       // per bus, pu; slack pinned at 1+0j
    std::vector<std::complex<double>> i_line;  // per line, parent -> child, pu
    std::vector<double> p_line_from;           // real power at the parent end, pu
    int iterations = 0;
    double max_mismatch_pu = 0.0;              // over non-slack buses
};

struct PowerFlowSolution {
    std::vector<TimestepSolution> steps;

    std::size_t horizon() const { return steps.size(); }
};

// Single-timestep backward/forward sweep. net_injections_pu holds the
// complex net injection (generation minus load) per bus index; the slack
// entry is ignored and absorbs the residual. Throws NumericalError on
// non-convergence or voltage collapse.
TimestepSolution solve_timestep(const Network& network,
                                std::span<const std::complex<double>> net_injections_pu,
                                const SweepOptions& options = {});

// T independent per-timestep solves with injections assembled from the load
// profiles and the plan's PV output. A failed timestep is reported with its
// index. Every timestep starts from a flat profile, so results do not
// depend on evaluation order.
PowerFlowSolution solve_series(const Study& study, const InstallationPlan& plan,
                               const SweepOptions& options = {});

// Net complex injection vector for one timestep, per-unit. Exposed for
// tests that recompute mismatches against the admittance matrix.
std::vector<std::complex<double>> net_injections_pu(const Study& study,
                                                    const PvInjectionSeries& pv,
                                                    std::size_t t);

}  // namespace pvdg
