#include "pvdg/pv_model.hpp"

#include <algorithm>
#include <string>

#include "pvdg/errors.hpp"

namespace pvdg {

void validate_plan(const InstallationPlan& plan, const std::vector<SolarReadyBus>& solar_ready) {
    if (plan.located.size() != solar_ready.size() ||
        plan.capacities_kw.size() != solar_ready.size()) {
        throw ValidationError("plan dimension mismatch: expected " +
                              std::to_string(solar_ready.size()) + " candidates");
    }
    for (std::size_t i = 0; i < solar_ready.size(); ++i) {
        if (plan.located[i] > 1) {
            throw ValidationError("location flag must be 0 or 1 at candidate " + std::to_string(i));
        }
        const double c = plan.capacities_kw[i];
        if (c < 0.0 || c > solar_ready[i].p_max_kw) {
            throw ValidationError("capacity " + std::to_string(c) + " kW out of [0, " +
                                  std::to_string(solar_ready[i].p_max_kw) + "] at bus " +
                                  std::to_string(solar_ready[i].bus_id));
        }
        if (plan.located[i] == 0 && c != 0.0) {
            throw ValidationError("unlocated candidate " + std::to_string(i) +
                                  " has nonzero capacity");
        }
    }
}

double pv_output(double capacity_kw, double insolation_kw_per_m2) {
    if (capacity_kw < 0.0 || insolation_kw_per_m2 < 0.0) {
        throw ValidationError("pv_output arguments must be nonnegative");
    }
    return capacity_kw * std::min(insolation_kw_per_m2, 1.0);
}

PvInjectionSeries pv_profile(const InstallationPlan& plan, const InsolationProfile& insolation) {
    if (plan.located.size() != plan.capacities_kw.size()) {
        throw ValidationError("plan location/capacity vectors differ in length");
    }
    const std::size_t horizon = insolation.i_kw_per_m2.size();
    PvInjectionSeries series;
    series.p_kw.assign(plan.capacities_kw.size(), std::vector<double>(horizon, 0.0));
    for (std::size_t i = 0; i < plan.capacities_kw.size(); ++i) {
        if (!plan.located[i]) continue;
        for (std::size_t t = 0; t < horizon; ++t) {
            series.p_kw[i][t] = pv_output(plan.capacities_kw[i], insolation.i_kw_per_m2[t]);
        }
    }
    return series;
}

}  // namespace pvdg
