// Few-level quantum system, propagation time grid, interaction-picture state.
#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "nanotip/errors.hpp"
#include "nanotip/pulse.hpp"

namespace nanotip {

struct LevelSystem {
    std::vector<double> energies_ev;                 // level 0 is |i> at 0 eV by convention
    std::vector<std::vector<double>> dipoles_enm;    // symmetric, zero diagonal
    int initial_index = 0;
    int final_index = 0;

    std::size_t size() const { return energies_ev.size(); }
    void validate() const;
};

struct TimeGrid {
    double t_start_fs = 0.0;
    double t_end_fs = 0.0;
    double dt_fs = 0.0;

    std::size_t steps() const;  // RK4 steps; last step may overshoot t_end by < dt
    void validate() const;
    // Grid must span >= padding_fwhm widest-pulse FWHMs on each side of the
    // earliest/latest pulse center.
    void validate_covers(const TwoColorField& field, double padding_fwhm = 3.0) const;
};

// Grid covering all pulses with the given padding; dt = shortest optical
// period / steps_per_cycle.
TimeGrid make_grid(const TwoColorField& field, double padding_fwhm = 3.0,
                   double steps_per_cycle = 40.0);

struct StateVector {
    std::vector<std::complex<double>> amplitudes;  // interaction picture

    double norm_sq() const;
};

} // namespace nanotip
