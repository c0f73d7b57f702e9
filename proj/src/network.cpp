#include "pvdg/network.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "pvdg/errors.hpp"

namespace pvdg {

namespace {

RadialOrder build_order(const std::vector<Bus>& buses, const std::vector<Line>& lines,
                        std::size_t slack_index, const std::map<int, std::size_t>& bus_by_id) {
    const std::size_t n = buses.size();

    // Adjacency: bus idx -> (neighbor bus idx, line idx), sorted by neighbor
    // bus id so traversal order is deterministic.
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(n);
    for (std::size_t l = 0; l < lines.size(); ++l) {
        const std::size_t a = bus_by_id.at(lines[l].from_bus);
        const std::size_t b = bus_by_id.at(lines[l].to_bus);
        adj[a].emplace_back(b, l);
        adj[b].emplace_back(a, l);
    }
    for (auto& nbrs : adj) {
        std::sort(nbrs.begin(), nbrs.end(), [&](const auto& x, const auto& y) {
            return buses[x.first].id < buses[y.first].id;
        });
    }

    RadialOrder order;
    order.parent_bus.assign(n, -1);
    order.parent_line.assign(n, -1);
    order.bus_order.reserve(n);
    order.line_order.reserve(lines.size());

    std::vector<bool> visited(n, false);
    std::vector<std::size_t> frontier{slack_index};
    visited[slack_index] = true;
    while (!frontier.empty()) {
        std::vector<std::size_t> next;
        for (std::size_t b : frontier) {
            order.bus_order.push_back(b);
            if (order.parent_line[b] >= 0) order.line_order.push_back(static_cast<std::size_t>(order.parent_line[b]));
            for (const auto& [nb, l] : adj[b]) {
                if (visited[nb]) continue;
                visited[nb] = true;
                order.parent_bus[nb] = static_cast<std::ptrdiff_t>(b);
                order.parent_line[nb] = static_cast<std::ptrdiff_t>(l);
                next.push_back(nb);
            }
        }
        frontier = std::move(next);
    }

    if (order.bus_order.size() != n) {
        throw ValidationError("network is not connected: " +
                              std::to_string(n - order.bus_order.size()) +
                              " bus(es) unreachable from the slack");
    }
    return order;
}

}  // namespace

Network::Network(std::vector<Bus> buses, std::vector<Line> lines, double base_mva, double base_kv)
    : buses_(std::move(buses)), lines_(std::move(lines)), base_mva_(base_mva), base_kv_(base_kv) {
    if (buses_.empty()) throw ValidationError("network has no buses");
    if (base_mva_ <= 0.0 || base_kv_ <= 0.0) {
        throw ValidationError("base_mva and base_kv must be positive");
    }

    std::map<int, std::size_t> bus_by_id;
    std::size_t slack_count = 0;
    for (std::size_t i = 0; i < buses_.size(); ++i) {
        if (!bus_by_id.emplace(buses_[i].id, i).second) {
            throw ValidationError("duplicate bus id " + std::to_string(buses_[i].id));
        }
        if (buses_[i].kind == BusKind::Slack) {
            slack_index_ = i;
            ++slack_count;
        }
    }
    if (slack_count != 1) {
        throw ValidationError("network must have exactly one slack bus, found " +
                              std::to_string(slack_count));
    }

    std::set<int> line_ids;
    for (const Line& l : lines_) {
        if (!line_ids.insert(l.id).second) {
            throw ValidationError("duplicate line id " + std::to_string(l.id));
        }
        if (!bus_by_id.count(l.from_bus) || !bus_by_id.count(l.to_bus)) {
            throw ValidationError("line " + std::to_string(l.id) +
                                  " references a bus that does not exist");
        }
        if (l.resistance_ohm < 0.0 || l.reactance_ohm < 0.0) {
            throw ValidationError("line " + std::to_string(l.id) + " has negative impedance");
        }
        if (l.resistance_ohm == 0.0 && l.reactance_ohm == 0.0) {
            throw ValidationError("line " + std::to_string(l.id) + " has zero impedance");
        }
    }

    if (lines_.size() != buses_.size() - 1) {
        throw ValidationError("non-radial topology: " + std::to_string(lines_.size()) +
                              " lines for " + std::to_string(buses_.size()) +
                              " buses (expected buses-1)");
    }

    order_ = build_order(buses_, lines_, slack_index_, bus_by_id);

    // File orientation must point away from the slack.
    for (std::size_t l = 0; l < lines_.size(); ++l) {
        const std::size_t child = bus_by_id.at(lines_[l].to_bus);
        if (order_.parent_line[child] != static_cast<std::ptrdiff_t>(l)) {
            throw ValidationError("line " + std::to_string(lines_[l].id) +
                                  " is oriented toward the slack (from/to swapped?)");
        }
    }
}

std::size_t Network::bus_index(int bus_id) const {
    for (std::size_t i = 0; i < buses_.size(); ++i) {
        if (buses_[i].id == bus_id) return i;
    }
    throw ValidationError("unknown bus id " + std::to_string(bus_id));
}

std::complex<double> Network::line_z_pu(std::size_t line_idx) const {
    const Line& l = lines_.at(line_idx);
    const double zb = z_base_ohm();
    return {l.resistance_ohm / zb, l.reactance_ohm / zb};
}

double Network::line_r_pu(std::size_t line_idx) const {
    return lines_.at(line_idx).resistance_ohm / z_base_ohm();
}

double Network::line_x_pu(std::size_t line_idx) const {
    return lines_.at(line_idx).reactance_ohm / z_base_ohm();
}

double LoadProfile::q_kvar(std::size_t t) const {
    const double p = p_kw.at(t);
    return p * std::tan(std::acos(power_factor));
}

Study::Study(Network network, std::vector<LoadProfile> profiles, InsolationProfile insolation,
             std::vector<SolarReadyBus> solar_ready)
    : network_(std::move(network)),
      profiles_(std::move(profiles)),
      insolation_(std::move(insolation)),
      solar_ready_(std::move(solar_ready)) {
    horizon_ = insolation_.i_kw_per_m2.size();
    if (horizon_ == 0) throw ValidationError("insolation profile is empty");
    for (double v : insolation_.i_kw_per_m2) {
        if (v < 0.0) throw ValidationError("negative insolation value");
    }

    std::map<std::string, std::size_t> profile_by_id;
    for (std::size_t i = 0; i < profiles_.size(); ++i) {
        const LoadProfile& p = profiles_[i];
        if (!profile_by_id.emplace(p.id, i).second) {
            throw ValidationError("duplicate profile id '" + p.id + "'");
        }
        if (p.p_kw.size() != horizon_) {
            throw ValidationError("profile '" + p.id + "' has length " +
                                  std::to_string(p.p_kw.size()) + ", expected T=" +
                                  std::to_string(horizon_));
        }
        if (p.power_factor <= 0.0 || p.power_factor > 1.0) {
            throw ValidationError("profile '" + p.id + "' power factor must be in (0, 1]");
        }
        for (double v : p.p_kw) {
            if (v < 0.0) throw ValidationError("profile '" + p.id + "' has negative demand");
        }
    }

    bus_profile_.assign(network_.bus_count(), -1);
    for (std::size_t b = 0; b < network_.bus_count(); ++b) {
        const Bus& bus = network_.buses()[b];
        if (!bus.load_profile) continue;
        auto it = profile_by_id.find(*bus.load_profile);
        if (it == profile_by_id.end()) {
            throw ValidationError("bus " + std::to_string(bus.id) +
                                  " references unknown profile '" + *bus.load_profile + "'");
        }
        bus_profile_[b] = static_cast<std::ptrdiff_t>(it->second);
    }

    std::set<int> seen_candidates;
    candidate_bus_idx_.reserve(solar_ready_.size());
    for (const SolarReadyBus& c : solar_ready_) {
        if (c.p_max_kw <= 0.0) {
            throw ValidationError("solar-ready bus " + std::to_string(c.bus_id) +
                                  " has non-positive capacity ceiling");
        }
        if (!seen_candidates.insert(c.bus_id).second) {
            throw ValidationError("solar-ready bus " + std::to_string(c.bus_id) + " listed twice");
        }
        const std::size_t idx = network_.bus_index(c.bus_id);  // throws if dangling
        if (network_.buses()[idx].kind != BusKind::Load) {
            throw ValidationError("solar-ready bus " + std::to_string(c.bus_id) +
                                  " is not a load bus");
        }
        candidate_bus_idx_.push_back(idx);
    }

    peak_load_kw_ = 0.0;
    for (std::size_t t = 0; t < horizon_; ++t) {
        peak_load_kw_ = std::max(peak_load_kw_, total_load_kw(t));
    }
}

double Study::load_p_kw(std::size_t bus_idx, std::size_t t) const {
    const std::ptrdiff_t p = bus_profile_.at(bus_idx);
    return p < 0 ? 0.0 : profiles_[static_cast<std::size_t>(p)].p_kw.at(t);
}

double Study::load_q_kvar(std::size_t bus_idx, std::size_t t) const {
    const std::ptrdiff_t p = bus_profile_.at(bus_idx);
    return p < 0 ? 0.0 : profiles_[static_cast<std::size_t>(p)].q_kvar(t);
}

double Study::total_load_kw(std::size_t t) const {
    double sum = 0.0;
    for (std::size_t b = 0; b < network_.bus_count(); ++b) sum += load_p_kw(b, t);
    return sum;
}

std::size_t Study::candidate_index(int bus_id) const {
    for (std::size_t i = 0; i < solar_ready_.size(); ++i) {
        if (solar_ready_[i].bus_id == bus_id) return i;
    }
    throw ValidationError("bus " + std::to_string(bus_id) + " is not solar-ready");
}

Eigen::MatrixXcd build_ybus(const Network& network) {
    const std::size_t n = network.bus_count();
    Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n),
                                                static_cast<Eigen::Index>(n));
    for (std::size_t l = 0; l < network.line_count(); ++l) {
        const std::complex<double> z = network.line_z_pu(l);
        if (z == std::complex<double>(0.0, 0.0)) {
            throw ValidationError("line " + std::to_string(network.lines()[l].id) +
                                  " has zero per-unit impedance");
        }
        const std::complex<double> adm = 1.0 / z;
        const auto i = static_cast<Eigen::Index>(network.bus_index(network.lines()[l].from_bus));
        const auto j = static_cast<Eigen::Index>(network.bus_index(network.lines()[l].to_bus));
        y(i, j) -= adm;
        y(j, i) -= adm;
        y(i, i) += adm;
        y(j, j) += adm;
    }
    return y;
}

const RadialOrder& radial_order(const Network& network) { return network.order(); }

}  // namespace pvdg
