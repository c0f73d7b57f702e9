#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace pvdg {

enum class BusKind { Slack, Load };

struct Bus {
    int id = 0;
    BusKind kind = BusKind::Load;
    std::optional<std::string> load_profile;  // absent -> zero load
    double nominal_kv = 0.0;

    bool operator==(const Bus&) const = default;
};

struct Line {
    int id = 0;
    int from_bus = 0;  // parent, nearer the substation
    int to_bus = 0;    // child
    double resistance_ohm = 0.0;
    double reactance_ohm = 0.0;

    bool operator==(const Line&) const = default;
};

// Depth ordering of a radial network. Buses and lines are stored as dense
// indices into Network::buses / Network::lines; every bus appears after its
// parent, ties broken by ascending bus id.
struct RadialOrder {
    std::vector<std::size_t> bus_order;          // slack first
    std::vector<std::size_t> line_order;         // line_order[k-1] feeds bus_order[k]
    std::vector<std::ptrdiff_t> parent_bus;      // -1 for the slack
    std::vector<std::ptrdiff_t> parent_line;     // -1 for the slack
};

class Network {
public:
    // Validates all structural invariants (single slack, radial tree,
    // unique ids, sane impedances) and precomputes the traversal order.
    // Throws ValidationError on any violation.
    Network(std::vector<Bus> buses, std::vector<Line> lines, double base_mva, double base_kv);

    const std::vector<Bus>& buses() const { return buses_; }
    const std::vector<Line>& lines() const { return lines_; }
    double base_mva() const { return base_mva_; }
    double base_kv() const { return base_kv_; }

    std::size_t bus_count() const { return buses_.size(); }
    std::size_t line_count() const { return lines_.size(); }
    double s_base_kw() const { return base_mva_ * 1000.0; }
    double z_base_ohm() const { return base_kv_ * base_kv_ / base_mva_; }

    std::size_t slack_index() const { return slack_index_; }
    std::size_t bus_index(int bus_id) const;          // throws on unknown id
    const RadialOrder& order() const { return order_; }

    // Dense endpoint indices of a line (resolved once at construction).
    std::size_t line_from_index(std::size_t line_idx) const { return line_from_idx_[line_idx]; }
    std::size_t line_to_index(std::size_t line_idx) const { return line_to_idx_[line_idx]; }

    // Series line impedance in per-unit on (base_mva, base_kv).
    std::complex<double> line_z_pu(std::size_t line_idx) const { return line_z_pu_[line_idx]; }
    double line_r_pu(std::size_t line_idx) const { return line_z_pu_[line_idx].real(); }
    double line_x_pu(std::size_t line_idx) const { return line_z_pu_[line_idx].imag(); }

    bool operator==(const Network& other) const {
        return buses_ == other.buses_ && lines_ == other.lines_ &&
               base_mva_ == other.base_mva_ && base_kv_ == other.base_kv_;
    }

private:
    std::vector<Bus> buses_;
    std::vector<Line> lines_;
    double base_mva_;
    double base_kv_;
    std::size_t slack_index_ = 0;
    RadialOrder order_;
};

struct LoadProfile {
    std::string id;
    double power_factor = 0.95;  // lagging, in (0, 1]
    std::vector<double> p_kw;    // length T, entries >= 0

    // Reactive demand implied by the power factor.
    double q_kvar(std::size_t t) const;

    bool operator==(const LoadProfile&) const = default;
};

struct InsolationProfile {
    std::vector<double> i_kw_per_m2;  // length T, entries >= 0

    bool operator==(const InsolationProfile&) const = default;
};

struct SolarReadyBus {
    int bus_id = 0;
    double p_max_kw = 0.0;  // installation ceiling, > 0

    bool operator==(const SolarReadyBus&) const = default;
};

// A fully cross-referenced study: network + demand/insolation series +
// solar-ready candidate list. Immutable after construction; safe to share
// across threads.
class Study {
public:
    Study(Network network, std::vector<LoadProfile> profiles, InsolationProfile insolation,
          std::vector<SolarReadyBus> solar_ready);

    const Network& network() const { return network_; }
    const std::vector<LoadProfile>& profiles() const { return profiles_; }
    const InsolationProfile& insolation() const { return insolation_; }
    const std::vector<SolarReadyBus>& solar_ready() const { return solar_ready_; }

    std::size_t horizon() const { return horizon_; }

    // Demand at a bus, kW / kvar; zero for buses without a profile.
    double load_p_kw(std::size_t bus_idx, std::size_t t) const;
    double load_q_kvar(std::size_t bus_idx, std::size_t t) const;

    // System-wide demand sum per timestep and its peak (Eq. 1 denominator).
    double total_load_kw(std::size_t t) const;
    double peak_load_kw() const { return peak_load_kw_; }

    // Candidate index of a solar-ready bus id, or throws ValidationError.
    std::size_t candidate_index(int bus_id) const;

    bool operator==(const Study& other) const {
        return network_ == other.network_ && profiles_ == other.profiles_ &&
               insolation_ == other.insolation_ && solar_ready_ == other.solar_ready_;
    }

private:
    Network network_;
    std::vector<LoadProfile> profiles_;
    InsolationProfile insolation_;
    std::vector<SolarReadyBus> solar_ready_;
    std::size_t horizon_ = 0;
    std::vector<std::ptrdiff_t> bus_profile_;      // bus idx -> profile idx or -1
    std::vector<std::size_t> candidate_bus_idx_;   // candidate -> bus idx
    double peak_load_kw_ = 0.0;

    friend std::size_t candidate_bus_index(const Study& study, std::size_t candidate);
};

inline std::size_t candidate_bus_index(const Study& study, std::size_t candidate) {
    return study.candidate_bus_idx_.at(candidate);
}

// Bus admittance matrix in per-unit: off-diagonal (i,j) = -1/z_ij, diagonal
// = sum of incident branch admittances. No shunt elements are modeled, so
// every row sums to zero and the matrix is symmetric.
Eigen::MatrixXcd build_ybus(const Network& network);

// Depth-ordered traversal from the slack (already computed at construction).
const RadialOrder& radial_order(const Network& network);

}  // namespace pvdg
