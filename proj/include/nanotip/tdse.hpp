// Direct integration of the time-dependent Schroedinger equation in the
// interaction picture, H(t) = -d E(t) with the full (co- plus counter-
// rotating) carrier.  Fixed-step classical fourth-order Runge-Kutta.
#pragma once

#include "nanotip/levels.hpp"
#include "nanotip/pulse.hpp"

namespace nanotip {

// Propagates |i> from t_start to t_end.  Throws NumericError if the state
// norm drifts from 1 by more than 1e-6 anywhere on the grid.
StateVector propagate(const LevelSystem& system, const TwoColorField& field,
                      const TimeGrid& grid);

// |amplitude at final_index|^2.
double emission_probability(const StateVector& state, const LevelSystem& system);

} // namespace nanotip
