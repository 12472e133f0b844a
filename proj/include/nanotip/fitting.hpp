// Least-squares fits used by the scan analysis: log-log power-law slope,
// cos-power polarization exponent, and fringe-period extraction by discrete
// spectral analysis refined with a local sinusoid fit.
#pragma once

#include <utility>
#include <vector>

namespace nanotip {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double max_rel_residual = 0.0;  // max |y_fit - y| / |y| in linear space
    int points_used = 0;
};

// Unweighted least squares on (log x, log y); all points must be > 0, n >= 5.
LineFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points);

struct CosExponentFit {
    double exponent = 0.0;       // 2n in y = y0 cos^{2n}(theta)
    double amplitude = 0.0;      // y0
    double max_rel_residual = 0.0;
    int points_used = 0;
};

// Fits y = y0 cos^{2n}(theta) by least squares on log y vs log cos(theta),
// excluding points with cos(theta) < 0.1 or y <= 0.  Angles in degrees,
// restricted to (-90, 90).  Needs >= 5 usable points.
CosExponentFit fit_cos_exponent(const std::vector<std::pair<double, double>>& points_deg);

struct SinusoidFit {
    double frequency_per_fs = 0.0;  // cycles per fs
    double amplitude = 0.0;
    double offset = 0.0;
    double phase_rad = 0.0;
};

// Least-squares y ~ offset + A cos(2 pi f t) + B sin(2 pi f t) at fixed f.
SinusoidFit fit_sinusoid_at(const std::vector<std::pair<double, double>>& points,
                            double frequency_per_fs);

struct FringePeriodResult {
    bool detected = false;
    double period_fs = 0.0;
    double frequency_per_fs = 0.0;
    double amplitude = 0.0;
    double offset = 0.0;
    double prominence = 0.0;  // spectral peak power over median non-DC power
};

// Dominant-period estimate for uniformly sampled data.  Linear trend is
// removed, the discrete spectrum is scanned (excluding the lowest bins so a
// residual smooth hump is not mistaken for a fringe), and the winning bin is
// refined by a local sinusoid fit.  A flat or trend-only signal yields
// detected = false rather than an error.
FringePeriodResult extract_fringe_period(const std::vector<std::pair<double, double>>& points);

} // namespace nanotip
