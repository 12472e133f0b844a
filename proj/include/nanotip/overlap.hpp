// Pulse-overlap function g(tau) for the multicolor channel: the normalized
// cross-correlation of the squared first-color intensity envelope with the
// second-color intensity envelope, matching the channel's I_w^2 I_2w
// dependence.  g(0) = 1 by construction.
#pragma once

#include <functional>

#include "nanotip/pulse.hpp"

namespace nanotip {

// Numeric cross-correlation integral at a single relative delay (unnormalized).
double intensity_sq_cross_correlation(const PulseSpec& first, const PulseSpec& second,
                                      double tau_fs);

// Callable g(tau), normalized so g(0) = 1.
std::function<double(double)> make_overlap(const PulseSpec& first, const PulseSpec& second);

} // namespace nanotip
