#pragma once

#include <cstdint>
#include <vector>

#include "pvdg/network.hpp"

namespace pvdg {

// Siting/sizing decision over the solar-ready candidate list: a binary
// location vector plus an installed-capacity vector, index-aligned with
// Study::solar_ready().
struct InstallationPlan {
    std::vector<std::uint8_t> located;   // 0/1 per candidate
    std::vector<double> capacities_kw;   // 0 <= c_i <= candidate ceiling

    static InstallationPlan empty(std::size_t n_candidates) {
        return {std::vector<std::uint8_t>(n_candidates, 0),
                std::vector<double>(n_candidates, 0.0)};
    }

    double total_kw() const {
        double s = 0.0;
        for (double c : capacities_kw) s += c;
        return s;
    }

    bool operator==(const InstallationPlan&) const = default;
};

// Throws ValidationError if the plan is inconsistent with the candidate
// list (size mismatch, located/capacity disagreement, ceiling violation).
void validate_plan(const InstallationPlan& plan, const std::vector<SolarReadyBus>& solar_ready);

struct PvInjectionSeries {
    std::vector<std::vector<double>> p_kw;  // [candidate][t]
};

// Installed-capacity to output map: linear in irradiance, saturating at the
// 1.0 kW/m^2 standard test condition, unity power factor.
double pv_output(double capacity_kw, double insolation_kw_per_m2);

// Elementwise pv_output over the horizon; candidates with located = 0
// contribute all-zero rows.
PvInjectionSeries pv_profile(const InstallationPlan& plan, const InsolationProfile& insolation);

}  // namespace pvdg
