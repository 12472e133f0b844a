// Channel-resolved perturbative emission amplitudes.
//
// A quantum channel is a photon multiset, e.g. {w:4} (four-photon single
// color) or {w:2, 2w:1} (three-photon multicolor).  Its amplitude is the
// time-ordered nested integral of that order, summed over all intermediate
// states and over all interleavings of the photon multiset, keeping only the
// co-rotating (absorption) carrier component of each color so that photon
// counts are well defined.  The nested integrals are evaluated by ladder
// propagation: partial amplitudes indexed by (level, photons absorbed per
// color) integrated forward in time as one coupled linear system, which is
// linear in grid size instead of exponential in the order.
#pragma once

#include <complex>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "nanotip/levels.hpp"
#include "nanotip/pulse.hpp"

namespace nanotip {

struct ChannelSpec {
    // (color label, photon count), kept sorted by label; counts >= 1.
    std::vector<std::pair<std::string, int>> counts;

    int total_order() const;
    int count_of(const std::string& label) const;
    bool single_color() const { return counts.size() == 1; }
    std::string to_string() const;             // "w:2,2w:1"
    static ChannelSpec parse(const std::string& text);
    void validate() const;
};

struct ChannelAmplitude {
    std::complex<double> value;   // dimensionless probability amplitude
    ChannelSpec channel;
    bool regime_flag = false;     // |value|^2 > 1: outside the perturbative regime

    double probability() const { return std::norm(value); }
};

struct LadderOptions {
    bool check_convergence = true;   // re-run at dt/2 and compare
    double rel_tol = 1e-5;
    double abs_floor = 1e-14;        // |C| below this is treated as zero in the check
};

// Order-n channel amplitude for the given system and field.  The grid must
// cover all pulses (validate_covers).  Throws ConfigError if the channel
// references a color absent from the field, NumericError if the convergence
// check fails.
ChannelAmplitude channel_amplitude(const LevelSystem& system, const TwoColorField& field,
                                   const ChannelSpec& channel, const TimeGrid& grid,
                                   const LadderOptions& opts = {});

// All distinct interleavings of the photon multiset, lexicographic by label.
std::vector<std::vector<std::string>> enumerate_orderings(const ChannelSpec& channel);

// Closed-form relative emission probability: prod_c I_c^{n_c} cos^{2 n_c}(theta_c).
// Pulses are looked up by channel color label.
double scaling_probability(const ChannelSpec& channel, const std::vector<PulseSpec>& pulses);

// (p_total - p_w - p_2w) / (p_w + p_2w); zero for a merely additive system.
double additivity(double p_w, double p_2w, double p_total);

struct FringeParams {
    double f_single = 0.0;                      // |C4|-type real amplitude
    double f_multi = 0.0;                       // |C3|-type real amplitude
    std::function<double(double)> overlap;      // normalized g(tau), g(0) = 1
    double angular_frequency = 0.0;             // carrier nu, rad/fs
};

// f_s^2 + f_m^2 g^2(tau) + 2 cos(2 nu tau) f_s f_m g(tau).
double fringe_pattern(const FringeParams& params, double tau_fs);

// 2 f_s f_m / (f_s^2 + f_m^2), in [0, 1].
double visibility(double f_single, double f_multi);

} // namespace nanotip
