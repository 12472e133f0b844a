// DC field and Schottky barrier lowering at a biased nanotip apex.
#pragma once

#include "nanotip/errors.hpp"

namespace nanotip {

struct TipSpec {
    double bias_voltage_v = 170.0;
    double radius_nm = 50.0;
    double enhancement_factor = 4.0;  // geometric factor k in E = V/(k r)
    double work_function_ev = 6.0;    // nominal, before Schottky lowering

    void validate() const;
};

// Static apex field V/(k r), returned in V/m.
double dc_field_v_per_m(const TipSpec& tip);

struct SchottkyResult {
    double effective_ev = 0.0;  // nominal - lowering (may be <= 0 when suppressed)
    double lowering_ev = 0.0;
    bool barrier_suppressed = false;  // lowering >= nominal: field emission regime
};

// Effective work function under a DC field: nominal - sqrt(e^3 E / 4 pi eps0).
SchottkyResult schottky_effective_work_function(double nominal_ev, double dc_field_v_per_m);

} // namespace nanotip
