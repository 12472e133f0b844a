#include "nanotip/tip.hpp"

#include <cmath>

#include "nanotip/constants.hpp"

namespace nanotip {

void TipSpec::validate() const {
    if (!(radius_nm > 0.0))
        throw ConfigError("tip.radius_nm must satisfy radius > 0");
    if (!(enhancement_factor >= 1.0))
        throw ConfigError("tip.enhancement_factor must satisfy enhancement_factor >= 1");
    if (!(work_function_ev > 0.0))
        throw ConfigError("tip.work_function_ev must satisfy nominal_work_function > 0");
}

double dc_field_v_per_m(const TipSpec& tip) {
    tip.validate();
    // V/nm = 1e9 V/m
    return tip.bias_voltage_v / (tip.enhancement_factor * tip.radius_nm) * 1.0e9;
}

SchottkyResult schottky_effective_work_function(double nominal_ev, double dc_field_v_per_m) {
    if (!(nominal_ev > 0.0))
        throw std::domain_error("schottky: nominal work function must satisfy nominal > 0");
    if (dc_field_v_per_m < 0.0)
        throw std::domain_error("schottky: dc field must satisfy dc_field >= 0");
    const double field_v_nm = dc_field_v_per_m * 1.0e-9;
    SchottkyResult r;
    r.lowering_ev = std::sqrt(units::coulomb_e2_ev_nm * field_v_nm);
    r.effective_ev = nominal_ev - r.lowering_ev;
    r.barrier_suppressed = r.lowering_ev >= nominal_ev;
    return r;
}

} // namespace nanotip
