#include "nanotip/overlap.hpp"

#include <cmath>

namespace nanotip {

namespace {

// I1(t - tau)^2 * I2(t) with intensity envelopes evaluated about their own
// pulse centers; the relative delay enters only through tau.
double integrand(const PulseSpec& first, const PulseSpec& second, double tau, double t) {
    const double e1 = std::exp(-2.0 * 0.69314718055994530942 * (t - tau) * (t - tau) /
                               (first.fwhm_fs * first.fwhm_fs));
    const double i1 = e1 * e1;  // intensity envelope
    const double e2 = std::exp(-2.0 * 0.69314718055994530942 * t * t /
                               (second.fwhm_fs * second.fwhm_fs));
    const double i2 = e2 * e2;
    return i1 * i1 * i2;
}

} // namespace

double intensity_sq_cross_correlation(const PulseSpec& first, const PulseSpec& second,
                                      double tau_fs) {
    first.validate();
    second.validate();
    const double span = 4.0 * (first.fwhm_fs + second.fwhm_fs);
    const double lo = std::min(tau_fs, 0.0) - span;
    const double hi = std::max(tau_fs, 0.0) + span;
    const double dt = std::min(first.fwhm_fs, second.fwhm_fs) / 64.0;
    const std::size_t n = static_cast<std::size_t>(std::ceil((hi - lo) / dt));
    double sum = 0.5 * (integrand(first, second, tau_fs, lo) +
                        integrand(first, second, tau_fs, lo + n * dt));
    for (std::size_t i = 1; i < n; ++i)
        sum += integrand(first, second, tau_fs, lo + i * dt);
    return sum * dt;
}

std::function<double(double)> make_overlap(const PulseSpec& first, const PulseSpec& second) {
    const double norm = intensity_sq_cross_correlation(first, second, 0.0);
    const PulseSpec f = first;
    const PulseSpec s = second;
    return [f, s, norm](double tau_fs) {
        return intensity_sq_cross_correlation(f, s, tau_fs) / norm;
    };
}

} // namespace nanotip
