#include "nanotip/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "nanotip/constants.hpp"

namespace nanotip {

namespace {

struct LsLine {
    double slope, intercept;
};

LsLine least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    if (det == 0.0) throw std::domain_error("degenerate abscissa in least-squares fit");
    return {(n * sxy - sx * sy) / det, (sxx * sy - sx * sxy) / det};
}

} // namespace

LineFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 5)
        throw std::domain_error("fit_loglog_slope requires >= 5 points");
    std::vector<double> lx, ly;
    for (const auto& [x, y] : points) {
        if (!(x > 0.0) || !(y > 0.0))
            throw std::domain_error("fit_loglog_slope requires strictly positive (x, y)");
        lx.push_back(std::log(x));
        ly.push_back(std::log(y));
    }
    const LsLine line = least_squares(lx, ly);
    LineFit fit;
    fit.slope = line.slope;
    fit.intercept = line.intercept;
    fit.points_used = static_cast<int>(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double yhat = std::exp(line.intercept + line.slope * lx[i]);
        fit.max_rel_residual =
            std::max(fit.max_rel_residual, std::abs(yhat - points[i].second) / points[i].second);
    }
    return fit;
}

CosExponentFit fit_cos_exponent(const std::vector<std::pair<double, double>>& points_deg) {
    std::vector<double> lc, ly;
    std::vector<std::size_t> used;
    for (std::size_t i = 0; i < points_deg.size(); ++i) {
        const auto& [theta, y] = points_deg[i];
        if (!(std::abs(theta) < 90.0))
            throw std::domain_error("fit_cos_exponent requires angles in (-90, 90) degrees");
        if (y < 0.0)
            throw std::domain_error("fit_cos_exponent requires values >= 0");
        if (theta == 0.0 && !(y > 0.0))
            throw std::domain_error("fit_cos_exponent requires value at 0 degrees > 0");
        const double c = std::cos(theta * units::pi / 180.0);
        if (c < 0.1 || !(y > 0.0)) continue;  // cos cutoff, and log needs y > 0
        lc.push_back(std::log(c));
        ly.push_back(std::log(y));
        used.push_back(i);
    }
    if (lc.size() < 5)
        throw std::domain_error("fit_cos_exponent: insufficient usable points (need >= 5)");
    const LsLine line = least_squares(lc, ly);
    CosExponentFit fit;
    fit.exponent = line.slope;
    fit.amplitude = std::exp(line.intercept);
    fit.points_used = static_cast<int>(lc.size());
    for (std::size_t j = 0; j < lc.size(); ++j) {
        const double yhat = std::exp(line.intercept + line.slope * lc[j]);
        const double y = points_deg[used[j]].second;
        fit.max_rel_residual = std::max(fit.max_rel_residual, std::abs(yhat - y) / y);
    }
    return fit;
}

SinusoidFit fit_sinusoid_at(const std::vector<std::pair<double, double>>& points,
                            double frequency_per_fs) {
    // linear LS in (offset, A, B) for y = offset + A cos(2 pi f t) + B sin(2 pi f t)
    double s[3][3] = {};
    double r[3] = {};
    for (const auto& [t, y] : points) {
        const double arg = 2.0 * units::pi * frequency_per_fs * t;
        const double b[3] = {1.0, std::cos(arg), std::sin(arg)};
        for (int i = 0; i < 3; ++i) {
            r[i] += b[i] * y;
            for (int j = 0; j < 3; ++j) s[i][j] += b[i] * b[j];
        }
    }
    // Gaussian elimination, 3x3
    double m[3][4];
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) m[i][j] = s[i][j];
        m[i][3] = r[i];
    }
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int i = col + 1; i < 3; ++i)
            if (std::abs(m[i][col]) > std::abs(m[piv][col])) piv = i;
        std::swap(m[col], m[piv]);
        if (m[col][col] == 0.0) throw std::domain_error("degenerate sinusoid fit");
        for (int i = 0; i < 3; ++i) {
            if (i == col) continue;
            const double f = m[i][col] / m[col][col];
            for (int j = col; j < 4; ++j) m[i][j] -= f * m[col][j];
        }
    }
    const double off = m[0][3] / m[0][0];
    const double a = m[1][3] / m[1][1];
    const double b = m[2][3] / m[2][2];
    SinusoidFit fit;
    fit.frequency_per_fs = frequency_per_fs;
    fit.offset = off;
    fit.amplitude = std::hypot(a, b);
    fit.phase_rad = std::atan2(-b, a);
    return fit;
}

namespace {

double sinusoid_sse(const std::vector<std::pair<double, double>>& pts, double f) {
    const SinusoidFit fit = fit_sinusoid_at(pts, f);
    double sse = 0.0;
    for (const auto& [t, y] : pts) {
        const double arg = 2.0 * units::pi * f * t + fit.phase_rad;
        const double yhat = fit.offset + fit.amplitude * std::cos(arg);
        sse += (yhat - y) * (yhat - y);
    }
    return sse;
}

} // namespace

FringePeriodResult extract_fringe_period(const std::vector<std::pair<double, double>>& points) {
    FringePeriodResult out;
    const std::size_t n = points.size();
    if (n < 16) throw std::domain_error("extract_fringe_period requires >= 16 samples");
    const double dt = points[1].first - points[0].first;
    for (std::size_t i = 1; i < n; ++i) {
        const double step = points[i].first - points[i - 1].first;
        if (std::abs(step - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
            throw std::domain_error("extract_fringe_period requires uniform sampling");
    }

    // remove a quadratic trend so a slow background hump is not read as a
    // fringe; a genuine oscillation with >= 3 cycles survives untouched
    std::vector<double> tv(n), yv(n);
    for (std::size_t i = 0; i < n; ++i) {
        tv[i] = points[i].first;
        yv[i] = points[i].second;
    }
    double s[3][3] = {};
    double r[3] = {};
    const double t0 = tv.front();
    for (std::size_t i = 0; i < n; ++i) {
        const double x = tv[i] - t0;
        const double b[3] = {1.0, x, x * x};
        for (int a = 0; a < 3; ++a) {
            r[a] += b[a] * yv[i];
            for (int c = 0; c < 3; ++c) s[a][c] += b[a] * b[c];
        }
    }
    double m[3][4];
    for (int a = 0; a < 3; ++a) {
        for (int c = 0; c < 3; ++c) m[a][c] = s[a][c];
        m[a][3] = r[a];
    }
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int a = col + 1; a < 3; ++a)
            if (std::abs(m[a][col]) > std::abs(m[piv][col])) piv = a;
        std::swap(m[col], m[piv]);
        if (m[col][col] == 0.0) throw std::domain_error("degenerate trend fit");
        for (int a = 0; a < 3; ++a) {
            if (a == col) continue;
            const double f = m[a][col] / m[col][col];
            for (int c = col; c < 4; ++c) m[a][c] -= f * m[col][c];
        }
    }
    const double q0 = m[0][3] / m[0][0], q1 = m[1][3] / m[1][1], q2 = m[2][3] / m[2][2];
    std::vector<double> resid(n);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = tv[i] - t0;
        resid[i] = yv[i] - (q0 + q1 * x + q2 * x * x);
        scale = std::max(scale, std::abs(yv[i]));
    }

    // direct DFT power; candidate bins need >= 3 cycles in the window
    const std::size_t kmin = 3;
    const std::size_t kmax = n / 2;
    if (kmax <= kmin) throw std::domain_error("extract_fringe_period window too short");
    std::vector<double> power(kmax + 1, 0.0);
    for (std::size_t k = kmin; k <= kmax; ++k) {
        std::complex<double> acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            acc += resid[i] * std::polar(1.0, -2.0 * units::pi *
                                         static_cast<double>(k * i) / static_cast<double>(n));
        power[k] = std::norm(acc);
    }
    std::size_t kbest = kmin;
    for (std::size_t k = kmin; k <= kmax; ++k)
        if (power[k] > power[kbest]) kbest = k;
    std::vector<double> sorted(power.begin() + kmin, power.begin() + kmax + 1);
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[sorted.size() / 2];
    out.prominence = median > 0.0 ? power[kbest] / median : 0.0;
    const double amp_est = 2.0 * std::sqrt(power[kbest]) / static_cast<double>(n);

    if (amp_est <= 1e-12 * std::max(scale, 1e-300) || out.prominence < 8.0)
        return out;  // detected = false: flat or trend-only signal

    // refine around the winning bin by golden-section search on the residual
    std::vector<std::pair<double, double>> detr(n);
    for (std::size_t i = 0; i < n; ++i) detr[i] = {tv[i], resid[i]};
    double sst = 0.0, mean = 0.0;
    for (const double v : resid) mean += v;
    mean /= static_cast<double>(n);
    for (const double v : resid) sst += (v - mean) * (v - mean);
    const double span = dt * static_cast<double>(n);
    double lo = (static_cast<double>(kbest) - 1.0) / span;
    double hi = (static_cast<double>(kbest) + 1.0) / span;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = sinusoid_sse(detr, x1), f2 = sinusoid_sse(detr, x2);
    for (int it = 0; it < 80; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = sinusoid_sse(detr, x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = sinusoid_sse(detr, x2);
        }
    }
    const double fbest = 0.5 * (lo + hi);
    // a fringe must explain a solid fraction of the detrended variance;
    // the cubic-scale residue of a smooth hump does not
    if (sst > 0.0 && sinusoid_sse(detr, fbest) > 0.8 * sst)
        return out;
    const SinusoidFit fit = fit_sinusoid_at(points, fbest);  // offset from raw data

    out.detected = true;
    out.frequency_per_fs = fbest;
    out.period_fs = 1.0 / fbest;
    out.amplitude = fit.amplitude;
    out.offset = fit.offset;
    return out;
}

} // namespace nanotip
