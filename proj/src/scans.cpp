#include "nanotip/scans.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <thread>

#include "nanotip/constants.hpp"
#include "nanotip/overlap.hpp"
#include "nanotip/tdse.hpp"

namespace nanotip {

using cd = std::complex<double>;

std::string to_string(CampaignKind k) {
    switch (k) {
        case CampaignKind::intensity: return "intensity";
        case CampaignKind::polarization: return "polarization";
        case CampaignKind::delay: return "delay";
        case CampaignKind::fringe: return "fringe";
    }
    return "?";
}

std::string to_string(EngineKind k) {
    switch (k) {
        case EngineKind::tdse: return "tdse";
        case EngineKind::dyson: return "dyson";
        case EngineKind::scaling: return "scaling";
    }
    return "?";
}

std::string to_string(ConvergencePolicy p) {
    switch (p) {
        case ConvergencePolicy::off: return "off";
        case ConvergencePolicy::first_point: return "first";
        case ConvergencePolicy::all_points: return "all";
    }
    return "?";
}

void ScanConfig::validate() const {
    tip.validate();
    field.validate();
    system.validate();
    if (channels.empty() && engine != EngineKind::tdse)
        throw ConfigError("scan requires at least one channel");
    for (const auto& ch : channels) {
        ch.validate();
        for (const auto& [label, count] : ch.counts)
            if (!field.find(label))
                throw ConfigError("channel references color '" + label +
                                  "' absent from the configured pulses");
    }
    if (axis_points < 2)
        throw ConfigError("scan.points must be >= 2");
    if (kind == CampaignKind::intensity) {
        if (!(axis_start > 0.0) || !(axis_stop > 0.0))
            throw ConfigError("intensity scan scale factors must be > 0");
        if (axis_points < 5)
            throw ConfigError("scan.points must be >= 5 for any fit");
    }
    if (kind == CampaignKind::polarization) {
        if (std::abs(axis_start) > 90.0 || std::abs(axis_stop) > 90.0)
            throw ConfigError("polarization sweep must satisfy |polarization_angle| <= 90");
        if (sweep != "theta_w" && sweep != "theta_2w")
            throw ConfigError("polarization scan.sweep must be theta_w or theta_2w");
    }
    if ((kind == CampaignKind::delay || kind == CampaignKind::fringe) && sweep != "tau_w")
        throw ConfigError("delay and fringe scans sweep tau_w");
    if (!(steps_per_cycle >= 8.0))
        throw ConfigError("engine.steps_per_cycle must be >= 8");
    if (!(grid_padding_fwhm >= 3.0))
        throw ConfigError("engine.grid_padding_fwhm must be >= 3");
    if (!(material_ratio > 0.0))
        throw ConfigError("engine.material_ratio must be > 0");
    if (threads < 1)
        throw ConfigError("engine.threads must be >= 1");
}

LevelSystem default_two_color_system(double wavelength_w_nm) {
    const double p = units::photon_energy_ev(wavelength_w_nm);
    const double shift = 0.5;
    LevelSystem sys;
    sys.energies_ev = {0.0, p - shift, 2.0 * p - shift, 3.0 * p - shift, 4.0 * p};
    sys.dipoles_enm.assign(5, std::vector<double>(5, 0.0));
    for (int k = 0; k < 4; ++k) sys.dipoles_enm[k][k + 1] = sys.dipoles_enm[k + 1][k] = 0.12;
    for (int k = 0; k < 3; ++k) sys.dipoles_enm[k][k + 2] = sys.dipoles_enm[k + 2][k] = 0.06;
    sys.initial_index = 0;
    sys.final_index = 4;
    return sys;
}

LevelSystem default_w310_system(double wavelength_nu_nm) {
    const double p = units::photon_energy_ev(wavelength_nu_nm);
    const double shift = 0.3;
    LevelSystem sys;
    sys.energies_ev = {0.0, p - shift, 2.0 * p - shift, 3.0 * p - shift, 4.0 * p};
    sys.dipoles_enm.assign(5, std::vector<double>(5, 0.0));
    for (int k = 0; k < 4; ++k) sys.dipoles_enm[k][k + 1] = sys.dipoles_enm[k + 1][k] = 0.10;
    for (int k = 0; k < 3; ++k) sys.dipoles_enm[k][k + 2] = sys.dipoles_enm[k + 2][k] = 0.05;
    sys.initial_index = 0;
    sys.final_index = 4;
    return sys;
}

namespace {

enum class Bucket { single_w, single_2w, multi };

Bucket classify(const ChannelSpec& ch) {
    if (ch.single_color()) return ch.counts.front().first == "2w" ? Bucket::single_2w : Bucket::single_w;
    return Bucket::multi;
}

// total carrier-delay phase sum_c n_c w_c tau_c of a channel's amplitude
double channel_delay_phase(const ChannelSpec& ch, const TwoColorField& field) {
    double phase = 0.0;
    for (const auto& [label, count] : ch.counts) {
        const PulseSpec* p = field.find(label);
        phase += count * p->angular_frequency() * p->delay_fs;
    }
    return phase;
}

double relative_delay(const TwoColorField& field) {
    const PulseSpec* w = field.find("w");
    const PulseSpec* w2 = field.find("2w");
    if (!w || !w2) return 0.0;
    return w->delay_fs - w2->delay_fs;
}

PointResult from_amplitudes(const ScanConfig& cfg, const std::vector<cd>& amps,
                            const std::vector<ChannelSpec>& channels) {
    PointResult r;
    cd coherent = 0.0;
    for (std::size_t i = 0; i < channels.size(); ++i) {
        const double p = std::norm(amps[i]);
        switch (classify(channels[i])) {
            case Bucket::single_w: r.p_w += p; break;
            case Bucket::single_2w: r.p_2w += p; break;
            case Bucket::multi: r.p_multi += p; break;
        }
        coherent += amps[i];
        if (p > 0.1) r.regime_flag = true;
    }
    r.p_total = cfg.shared_final_state ? std::norm(coherent)
                                       : r.p_w + r.p_2w + r.p_multi;
    return r;
}

PointResult evaluate_dyson(const ScanConfig& cfg, const TwoColorField& field,
                           const LadderOptions& opts) {
    std::vector<cd> amps(cfg.channels.size());
    for (std::size_t i = 0; i < cfg.channels.size(); ++i) {
        // a channel only sees its own colors; dropping the other pulse keeps
        // the amplitude identical and the grid smaller
        TwoColorField sub;
        for (const auto& p : field.pulses)
            if (cfg.channels[i].count_of(p.label) > 0) sub.pulses.push_back(p);
        const TimeGrid grid = make_grid(sub, cfg.grid_padding_fwhm, cfg.steps_per_cycle);
        amps[i] = channel_amplitude(cfg.system, sub, cfg.channels[i], grid, opts).value;
    }
    return from_amplitudes(cfg, amps, cfg.channels);
}

double scaling_amplitude(const ScanConfig& cfg, const TwoColorField& field,
                         const ChannelSpec& ch) {
    // relative units: per-photon vertex sqrt(I/I0) cos(theta), with the
    // 2w-photon vertex carrying the material strength ratio
    constexpr double i0 = 1.0e11;  // W/cm^2
    double f = 1.0;
    for (const auto& [label, count] : ch.counts) {
        const PulseSpec* p = field.find(label);
        const double vertex = std::sqrt(p->peak_intensity_wcm2 / i0) * p->cos_pol() *
                              (label == "2w" ? cfg.material_ratio : 1.0);
        f *= std::pow(vertex, count);
    }
    return f;
}

PointResult evaluate_scaling(const ScanConfig& cfg, const TwoColorField& field) {
    const PulseSpec* w = field.find("w");
    const PulseSpec* w2 = field.find("2w");
    const double tau = relative_delay(field);
    double g = 1.0;
    if (w && w2) {
        PulseSpec a = *w, b = *w2;
        a.delay_fs = 0.0;
        b.delay_fs = 0.0;
        g = make_overlap(a, b)(tau);
    }

    if (cfg.shared_final_state) {
        // coherent closed form: amplitude-level overlap on multicolor channels
        std::vector<cd> amps(cfg.channels.size());
        for (std::size_t i = 0; i < cfg.channels.size(); ++i) {
            const auto& ch = cfg.channels[i];
            double f = scaling_amplitude(cfg, field, ch);
            if (classify(ch) == Bucket::multi) f *= g;
            amps[i] = std::polar(std::abs(f), channel_delay_phase(ch, field)) *
                      (f < 0.0 ? -1.0 : 1.0);
        }
        return from_amplitudes(cfg, amps, cfg.channels);
    }

    // incoherent: probability-level overlap factor on multicolor channels
    PointResult r;
    for (const auto& ch : cfg.channels) {
        const double f = scaling_amplitude(cfg, field, ch);
        double p = f * f;
        if (classify(ch) == Bucket::multi) p *= g;
        switch (classify(ch)) {
            case Bucket::single_w: r.p_w += p; break;
            case Bucket::single_2w: r.p_2w += p; break;
            case Bucket::multi: r.p_multi += p; break;
        }
        if (p > 0.1) r.regime_flag = true;
    }
    r.p_total = r.p_w + r.p_2w + r.p_multi;
    return r;
}

double tdse_total(const ScanConfig& cfg, const TwoColorField& field) {
    TimeGrid grid = make_grid(field, cfg.grid_padding_fwhm, cfg.steps_per_cycle);
    // all tdse runs of one scan share the resolution set by the shortest
    // configured carrier, including single-color runs of the longer color
    grid.dt_fs = cfg.field.min_wavelength_nm() / units::c_nm_fs / cfg.steps_per_cycle;
    return emission_probability(propagate(cfg.system, field, grid), cfg.system);
}

PointResult evaluate_tdse(const ScanConfig& cfg, const TwoColorField& field) {
    PointResult r;
    TwoColorField only_w, only_2w;
    for (const auto& p : field.pulses)
        (p.label == "2w" ? only_2w : only_w).pulses.push_back(p);

    if (only_w.pulses.empty() || only_2w.pulses.empty()) {
        r.p_total = tdse_total(cfg, field);
        (only_2w.pulses.empty() ? r.p_w : r.p_2w) = r.p_total;
    } else {
        r.p_w = tdse_total(cfg, only_w);
        r.p_2w = tdse_total(cfg, only_2w);
        if (cfg.phase_average) {
            // averaging over the relative carrier phase removes cross-channel
            // interference, which the counting experiment does not resolve
            double acc = 0.0;
            for (int k = 0; k < 4; ++k) {
                TwoColorField fld = field;
                for (auto& p : fld.pulses)
                    if (p.label == "w") p.carrier_phase_rad += k * 0.5 * units::pi;
                acc += tdse_total(cfg, fld);
            }
            r.p_total = acc / 4.0;
        } else {
            r.p_total = tdse_total(cfg, field);
        }
        r.p_multi = r.p_total - r.p_w - r.p_2w;
    }
    if (r.p_w > 0.1 || r.p_2w > 0.1 || r.p_total > 0.1) r.regime_flag = true;
    return r;
}

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::size_t nt = std::min(threads, n);
    for (std::size_t t = 0; t < nt; ++t)
        pool.emplace_back([&, t] {
            for (int i = static_cast<int>(t); i < n; i += static_cast<int>(nt)) body(i);
        });
    for (auto& th : pool) th.join();
}

LadderOptions opts_for_point(const ScanConfig& cfg, int index) {
    LadderOptions o;
    switch (cfg.convergence) {
        case ConvergencePolicy::off: o.check_convergence = false; break;
        case ConvergencePolicy::first_point: o.check_convergence = index == 0; break;
        case ConvergencePolicy::all_points: o.check_convergence = true; break;
    }
    return o;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
        v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

std::vector<double> logspace(double a, double b, int n) {
    std::vector<double> v(n);
    const double la = std::log(a), lb = std::log(b);
    for (int i = 0; i < n; ++i)
        v[i] = std::exp(la + (lb - la) * static_cast<double>(i) / static_cast<double>(n - 1));
    return v;
}

void push_fit(ScanResult& res, const std::string& key, const LineFit& fit) {
    res.derived["fitted_slope_" + key] = fit.slope;
    res.derived["fitted_slope_" + key + "_residual"] = fit.max_rel_residual;
}

double bgsub_value(const ScanConfig& cfg, const PointResult& p) {
    if (cfg.background_subtraction) return p.p_total - p.p_w - p.p_2w;
    return p.p_multi;
}

PeakSummary characterize_peak(const std::vector<double>& axis, const std::vector<double>& y) {
    PeakSummary peak;
    std::size_t imax = 0;
    for (std::size_t i = 0; i < y.size(); ++i)
        if (y[i] > y[imax]) imax = i;
    peak.height = y[imax];
    peak.center_fs = axis[imax];
    if (imax > 0 && imax + 1 < y.size()) {
        // parabolic refinement
        const double d1 = y[imax + 1] - y[imax - 1];
        const double d2 = y[imax + 1] - 2.0 * y[imax] + y[imax - 1];
        if (d2 < 0.0)
            peak.center_fs = axis[imax] - 0.5 * d1 / d2 * (axis[1] - axis[0]);
    }
    const double h = 0.5 * peak.height;
    double left = axis.front(), right = axis.back();
    for (std::size_t i = imax; i-- > 0;) {
        if (y[i] < h) {
            left = axis[i] + (axis[i + 1] - axis[i]) * (h - y[i]) / (y[i + 1] - y[i]);
            break;
        }
    }
    for (std::size_t i = imax + 1; i < y.size(); ++i) {
        if (y[i] < h) {
            right = axis[i - 1] + (axis[i] - axis[i - 1]) * (h - y[i - 1]) / (y[i] - y[i - 1]);
            break;
        }
    }
    peak.fwhm_fs = right - left;
    return peak;
}

} // namespace

const std::vector<double>& ScanResult::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return data[i];
    throw ConfigError("no column named '" + name + "'");
}

PointResult evaluate_point(const ScanConfig& cfg, const TwoColorField& field,
                           const LadderOptions& ladder_opts) {
    switch (cfg.engine) {
        case EngineKind::dyson: return evaluate_dyson(cfg, field, ladder_opts);
        case EngineKind::scaling: return evaluate_scaling(cfg, field);
        case EngineKind::tdse: return evaluate_tdse(cfg, field);
    }
    throw ConfigError("unknown engine");
}

ScanResult run_intensity_scan(const ScanConfig& cfg) {
    cfg.validate();
    ScanResult res;
    res.config = cfg;
    res.axis_label = "i_two_color_wcm2";

    const auto scales = logspace(cfg.axis_start, cfg.axis_stop, cfg.axis_points);
    const int n = cfg.axis_points;
    std::vector<PointResult> pts(n);
    std::vector<double> iw(n), i2w(n), itc(n);

    auto field_at = [&](int i) {
        TwoColorField f = cfg.field;
        for (auto& p : f.pulses) {
            const double e = p.label == "2w" ? cfg.locus_exponent_2w : cfg.locus_exponent_w;
            p.peak_intensity_wcm2 *= std::pow(scales[i], e);
        }
        return f;
    };
    pts[0] = evaluate_point(cfg, field_at(0), opts_for_point(cfg, 0));
    parallel_for(n - 1, cfg.threads, [&](int j) {
        const int i = j + 1;
        pts[i] = evaluate_point(cfg, field_at(i), opts_for_point(cfg, i));
    });
    for (int i = 0; i < n; ++i) {
        const TwoColorField f = field_at(i);
        const PulseSpec* w = f.find("w");
        const PulseSpec* w2 = f.find("2w");
        iw[i] = w ? w->peak_intensity_wcm2 : 0.0;
        i2w[i] = w2 ? w2->peak_intensity_wcm2 : 0.0;
        itc[i] = (w && w2) ? units::two_color_intensity(iw[i], i2w[i]) : iw[i];
    }

    const double decades = std::abs(std::log10(itc.back() / itc.front()));
    if (decades < 0.8)
        throw ConfigError("intensity scans must span >= 0.8 decades (got " +
                          std::to_string(decades) + ")");

    std::vector<double> pw(n), p2w(n), ptot(n), pbg(n), add(n);
    for (int i = 0; i < n; ++i) {
        pw[i] = pts[i].p_w;
        p2w[i] = pts[i].p_2w;
        ptot[i] = pts[i].p_total;
        pbg[i] = bgsub_value(cfg, pts[i]);
        const double denom = pw[i] + p2w[i];
        add[i] = denom > 0.0 ? (ptot[i] - denom) / denom
                             : std::numeric_limits<double>::quiet_NaN();
        res.regime_warning = res.regime_warning || pts[i].regime_flag;
    }
    res.columns = {"i_w_wcm2", "i_2w_wcm2", "i_two_color_wcm2",
                   "p_w", "p_2w", "p_total", "p_multicolor_bgsub", "additivity"};
    res.data = {iw, i2w, itc, pw, p2w, ptot, pbg, add};

    auto try_fit = [&](const std::string& key, const std::vector<double>& x,
                       const std::vector<double>& y) {
        std::vector<std::pair<double, double>> p;
        for (int i = 0; i < n; ++i)
            if (x[i] > 0.0 && y[i] > 0.0) p.emplace_back(x[i], y[i]);
        if (p.size() >= 5) push_fit(res, key, fit_loglog_slope(p));
    };
    try_fit("w", iw, pw);
    try_fit("2w", i2w, p2w);
    try_fit("multicolor", itc, pbg);
    if (!std::isnan(add.back())) res.derived["additivity_at_max_intensity"] = add.back();
    if (res.derived.count("fitted_slope_multicolor"))
        res.derived["fitted_slope"] = res.derived["fitted_slope_multicolor"];
    else if (res.derived.count("fitted_slope_w"))
        res.derived["fitted_slope"] = res.derived["fitted_slope_w"];
    if (res.regime_warning)
        res.notes["regime"] = "single-channel probability exceeded 0.1: "
                              "perturbative scaling may be breaking down";
    return res;
}

ScanResult run_polarization_scan(const ScanConfig& cfg) {
    cfg.validate();
    ScanResult res;
    res.config = cfg;
    const bool sweep_w = cfg.sweep == "theta_w";
    res.axis_label = sweep_w ? "theta_w_deg" : "theta_2w_deg";

    const auto thetas = linspace(cfg.axis_start, cfg.axis_stop, cfg.axis_points);
    const int n = cfg.axis_points;
    std::vector<PointResult> pts(n);
    auto field_at = [&](double theta) {
        TwoColorField f = cfg.field;
        for (auto& p : f.pulses)
            if ((p.label == "2w") != sweep_w) p.polarization_angle_deg = theta;
        return f;
    };
    pts[0] = evaluate_point(cfg, field_at(thetas[0]), opts_for_point(cfg, 0));
    parallel_for(n - 1, cfg.threads, [&](int j) {
        pts[j + 1] = evaluate_point(cfg, field_at(thetas[j + 1]), opts_for_point(cfg, j + 1));
    });

    std::vector<double> pw(n), p2w(n), ptot(n), pbg(n), add(n);
    for (int i = 0; i < n; ++i) {
        pw[i] = pts[i].p_w;
        p2w[i] = pts[i].p_2w;
        ptot[i] = pts[i].p_total;
        pbg[i] = bgsub_value(cfg, pts[i]);
        const double denom = pw[i] + p2w[i];
        add[i] = denom > 0.0 ? (ptot[i] - denom) / denom
                             : std::numeric_limits<double>::quiet_NaN();
        res.regime_warning = res.regime_warning || pts[i].regime_flag;
    }
    res.columns = {res.axis_label, "p_w", "p_2w", "p_total", "p_multicolor_bgsub", "additivity"};
    res.data = {thetas, pw, p2w, ptot, pbg, add};

    auto try_exponent = [&](const std::string& key, const std::vector<double>& y) {
        std::vector<std::pair<double, double>> p;
        for (int i = 0; i < n; ++i)
            if (std::abs(thetas[i]) < 90.0 && y[i] >= 0.0) p.emplace_back(thetas[i], y[i]);
        try {
            const CosExponentFit fit = fit_cos_exponent(p);
            res.derived["fitted_exponent_" + key] = fit.exponent;
            res.derived["fitted_exponent_" + key + "_residual"] = fit.max_rel_residual;
        } catch (const std::domain_error&) {
            // column vanishes identically for single-color configs
        }
    };
    try_exponent("single", sweep_w ? pw : p2w);
    try_exponent("multicolor", pbg);

    // closed-form additivity parameters from the on-axis point
    const PointResult on_axis = evaluate_point(cfg, field_at(0.0), opts_for_point(cfg, 1));
    if (on_axis.p_multi > 0.0 || bgsub_value(cfg, on_axis) > 0.0) {
        const double p3 = cfg.engine == EngineKind::tdse ? bgsub_value(cfg, on_axis)
                                                         : on_axis.p_multi;
        if (p3 > 0.0) {
            res.derived["c1"] = (sweep_w ? on_axis.p_w : on_axis.p_2w) / p3;
            res.derived["c2"] = (sweep_w ? on_axis.p_2w : on_axis.p_w) / p3;
        }
    }
    // location of the additivity maximum on the positive branch
    std::size_t ibest = 0;
    bool any = false;
    for (int i = 0; i < n; ++i) {
        if (thetas[i] < 0.0 || std::isnan(add[i])) continue;
        if (!any || add[i] > add[ibest]) {
            ibest = i;
            any = true;
        }
    }
    if (any) {
        res.derived["additivity_max"] = add[ibest];
        res.derived["additivity_max_theta_deg"] = thetas[ibest];
    }
    if (res.regime_warning)
        res.notes["regime"] = "single-channel probability exceeded 0.1: "
                              "perturbative scaling may be breaking down";
    return res;
}

ScanResult run_delay_scan(const ScanConfig& cfg) {
    cfg.validate();
    ScanResult res;
    res.config = cfg;
    res.axis_label = "delay_fs";

    const auto taus = linspace(cfg.axis_start, cfg.axis_stop, cfg.axis_points);
    const int n = cfg.axis_points;
    auto field_at = [&](double tau) {
        TwoColorField f = cfg.field;
        for (auto& p : f.pulses)
            if (p.label == "w") p.delay_fs = tau;
        return f;
    };

    // single-color channels do not depend on the other pulse, so evaluate the
    // delay-independent pieces once
    std::vector<PointResult> pts(n);
    if (cfg.engine == EngineKind::dyson) {
        ScanConfig singles = cfg;
        singles.channels.clear();
        std::vector<ChannelSpec> multi;
        for (const auto& ch : cfg.channels)
            (classify(ch) == Bucket::multi ? multi : singles.channels).push_back(ch);
        PointResult base;
        std::vector<cd> single_amps;
        std::vector<ChannelSpec> all = singles.channels;
        for (const auto& ch : multi) all.push_back(ch);
        if (!singles.channels.empty()) {
            const TwoColorField f0 = field_at(taus[0]);
            for (const auto& ch : singles.channels) {
                TwoColorField sub;
                for (const auto& p : f0.pulses)
                    if (ch.count_of(p.label) > 0) sub.pulses.push_back(p);
                const TimeGrid g = make_grid(sub, cfg.grid_padding_fwhm, cfg.steps_per_cycle);
                single_amps.push_back(
                    channel_amplitude(cfg.system, sub, ch, g, opts_for_point(cfg, 0)).value);
            }
        }
        // shifting a single-pulse channel's only pulse by tau multiplies its
        // amplitude by exp(i w_fi tau) exactly (time translation)
        const double w_fi = (cfg.system.energies_ev[cfg.system.final_index] -
                             cfg.system.energies_ev[cfg.system.initial_index]) /
                            units::hbar_ev_fs;
        parallel_for(n, cfg.threads, [&](int i) {
            const TwoColorField f = field_at(taus[i]);
            std::vector<cd> amps = single_amps;
            for (std::size_t s = 0; s < singles.channels.size(); ++s) {
                const bool moves = singles.channels[s].count_of("w") > 0;
                if (moves)
                    amps[s] = single_amps[s] * std::polar(1.0, w_fi * (taus[i] - taus[0]));
            }
            for (const auto& ch : multi) {
                TwoColorField sub;
                for (const auto& p : f.pulses)
                    if (ch.count_of(p.label) > 0) sub.pulses.push_back(p);
                const TimeGrid g = make_grid(sub, cfg.grid_padding_fwhm, cfg.steps_per_cycle);
                amps.push_back(
                    channel_amplitude(cfg.system, sub, ch, g, opts_for_point(cfg, i)).value);
            }
            pts[i] = from_amplitudes(cfg, amps, all);
        });
    } else {
        pts[0] = evaluate_point(cfg, field_at(taus[0]), opts_for_point(cfg, 0));
        parallel_for(n - 1, cfg.threads, [&](int j) {
            pts[j + 1] = evaluate_point(cfg, field_at(taus[j + 1]), opts_for_point(cfg, j + 1));
        });
    }

    std::vector<double> pw(n), p2w(n), ptot(n), pbg(n), add(n);
    for (int i = 0; i < n; ++i) {
        pw[i] = pts[i].p_w;
        p2w[i] = pts[i].p_2w;
        ptot[i] = pts[i].p_total;
        pbg[i] = bgsub_value(cfg, pts[i]);
        const double denom = pw[i] + p2w[i];
        add[i] = denom > 0.0 ? (ptot[i] - denom) / denom
                             : std::numeric_limits<double>::quiet_NaN();
        res.regime_warning = res.regime_warning || pts[i].regime_flag;
    }
    res.columns = {"delay_fs", "p_w", "p_2w", "p_total", "p_multicolor_bgsub", "additivity"};
    res.data = {taus, pw, p2w, ptot, pbg, add};

    const PeakSummary peak = characterize_peak(taus, pbg);
    res.derived["peak_center_fs"] = peak.center_fs;
    res.derived["peak_height"] = peak.height;
    res.derived["peak_fwhm_fs"] = peak.fwhm_fs;
    std::size_t izero = 0;
    for (std::size_t i = 1; i < taus.size(); ++i)
        if (std::abs(taus[i]) < std::abs(taus[izero])) izero = i;
    if (!std::isnan(add[izero])) res.derived["additivity_at_zero_delay"] = add[izero];

    if (cfg.subscan) {
        // fine sub-scan probing for carrier-frequency fringes in the
        // background-subtracted signal
        const PulseSpec* w = cfg.field.find("w");
        const double fringe_freq = w->angular_frequency() / units::pi;  // 2 nu / 2 pi
        const double step = 1.0 / (16.0 * fringe_freq);
        const int m = static_cast<int>(std::round(2.0 * cfg.subscan_halfwidth_fs / step)) + 1;
        std::vector<double> staus(m), sbg(m);
        for (int i = 0; i < m; ++i)
            staus[i] = cfg.subscan_center_fs - cfg.subscan_halfwidth_fs + i * step;
        std::vector<PointResult> spts(m);
        parallel_for(m, cfg.threads, [&](int i) {
            spts[i] = evaluate_point(cfg, field_at(staus[i]), opts_for_point(cfg, i + 1));
        });
        std::vector<std::pair<double, double>> series(m);
        for (int i = 0; i < m; ++i) {
            sbg[i] = bgsub_value(cfg, spts[i]);
            series[i] = {staus[i], sbg[i]};
        }
        const FringePeriodResult fringe = extract_fringe_period(series);
        res.derived["subscan_fringe_detected"] = fringe.detected ? 1.0 : 0.0;
        if (fringe.detected) res.derived["subscan_fringe_period_fs"] = fringe.period_fs;
        const SinusoidFit probe = fit_sinusoid_at(series, fringe_freq);
        res.derived["subscan_fringe_amplitude_ratio"] =
            peak.height > 0.0 ? probe.amplitude / peak.height : 0.0;
    }
    if (res.regime_warning)
        res.notes["regime"] = "single-channel probability exceeded 0.1: "
                              "perturbative scaling may be breaking down";
    return res;
}

ScanResult run_fringe_scan(const ScanConfig& cfg) {
    cfg.validate();
    if (!cfg.shared_final_state)
        throw ConfigError("fringe scan requires the shared-final-state scenario "
                          "(scan.shared_final_state = true)");
    if (cfg.engine == EngineKind::tdse)
        throw ConfigError("fringe scan supports the dyson and scaling engines");

    const PulseSpec* w = cfg.field.find("w");
    if (!w) throw ConfigError("fringe scan requires a 'w' pulse");
    const double period = units::pi / w->angular_frequency();  // 2 pi / (2 nu)
    const double step = (cfg.axis_stop - cfg.axis_start) / (cfg.axis_points - 1);
    if (step > period / 8.0)
        throw ConfigError("fringe scan resolution coarser than period/8 (need step <= " +
                          std::to_string(period / 8.0) + " fs)");

    ScanResult res;
    res.config = cfg;
    res.axis_label = "delay_fs";
    const auto taus = linspace(cfg.axis_start, cfg.axis_stop, cfg.axis_points);
    const int n = cfg.axis_points;

    // channel roles for the closed-form model
    const ChannelSpec* single = nullptr;
    const ChannelSpec* multi = nullptr;
    for (const auto& ch : cfg.channels) {
        if (classify(ch) == Bucket::single_w && !single) single = &ch;
        if (classify(ch) == Bucket::multi && !multi) multi = &ch;
    }
    if (!single || !multi)
        throw ConfigError("fringe scan needs one single-color 'w' channel and one "
                          "multicolor channel");

    double f_single = 0.0, f_multi = 0.0;
    if (cfg.engine == EngineKind::dyson) {
        const TwoColorField f0 = cfg.field;
        TwoColorField sub_w;
        for (const auto& p : f0.pulses)
            if (single->count_of(p.label) > 0) sub_w.pulses.push_back(p);
        const TimeGrid gw = make_grid(sub_w, cfg.grid_padding_fwhm, cfg.steps_per_cycle);
        f_single = std::abs(
            channel_amplitude(cfg.system, sub_w, *single, gw, opts_for_point(cfg, 0)).value);
        const TimeGrid gm = make_grid(f0, cfg.grid_padding_fwhm, cfg.steps_per_cycle);
        f_multi = std::abs(
            channel_amplitude(cfg.system, f0, *multi, gm, opts_for_point(cfg, 0)).value);
    } else {
        f_single = std::abs(scaling_amplitude(cfg, cfg.field, *single));
        f_multi = std::abs(scaling_amplitude(cfg, cfg.field, *multi));
    }

    const PulseSpec* w2 = cfg.field.find("2w");
    PulseSpec pa = *w, pb;
    pa.delay_fs = 0.0;
    if (w2) {
        pb = *w2;
        pb.delay_fs = 0.0;
    } else {
        pb = pa;
    }
    FringeParams params;
    params.f_single = f_single;
    params.f_multi = f_multi;
    params.overlap = make_overlap(pa, pb);
    params.angular_frequency = w->angular_frequency();

    std::vector<double> model(n);
    const double tau0 = w2 ? w2->delay_fs : 0.0;
    for (int i = 0; i < n; ++i) model[i] = fringe_pattern(params, taus[i] - tau0);

    std::vector<double> dyson(n);
    const bool with_dyson = cfg.engine == EngineKind::dyson;
    if (with_dyson) {
        parallel_for(n, cfg.threads, [&](int i) {
            TwoColorField f = cfg.field;
            for (auto& p : f.pulses)
                if (p.label == "w") p.delay_fs = taus[i];
            std::vector<cd> amps;
            std::vector<ChannelSpec> chans = {*single, *multi};
            for (const auto& ch : chans) {
                TwoColorField sub;
                for (const auto& p : f.pulses)
                    if (ch.count_of(p.label) > 0) sub.pulses.push_back(p);
                const TimeGrid g = make_grid(sub, cfg.grid_padding_fwhm, cfg.steps_per_cycle);
                amps.push_back(channel_amplitude(cfg.system, sub, ch, g,
                                                 opts_for_point(cfg, i + 1)).value);
            }
            dyson[i] = std::norm(amps[0] + amps[1]);
        });
    }

    res.columns = {"delay_fs", "p_model"};
    res.data = {taus, model};
    if (with_dyson) {
        res.columns.push_back("p_channels");
        res.data.push_back(dyson);
    }

    const std::vector<double>& signal = with_dyson ? dyson : model;
    std::vector<std::pair<double, double>> series(n);
    for (int i = 0; i < n; ++i) series[i] = {taus[i], signal[i]};
    const FringePeriodResult fringe = extract_fringe_period(series);
    res.derived["fringe_detected"] = fringe.detected ? 1.0 : 0.0;
    if (fringe.detected) {
        res.derived["period_fs"] = fringe.period_fs;
        res.derived["frequency_thz"] = 1000.0 * fringe.frequency_per_fs;
        res.derived["visibility"] =
            fringe.offset > 0.0 ? fringe.amplitude / fringe.offset : 0.0;
    }
    res.derived["f_single"] = f_single;
    res.derived["f_multi"] = f_multi;
    res.derived["visibility_closed_form"] = visibility(f_single, f_multi);
    res.derived["offset_single_color"] = f_single * f_single;
    return res;
}

ScanResult run_scan(const ScanConfig& cfg) {
    switch (cfg.kind) {
        case CampaignKind::intensity: return run_intensity_scan(cfg);
        case CampaignKind::polarization: return run_polarization_scan(cfg);
        case CampaignKind::delay: return run_delay_scan(cfg);
        case CampaignKind::fringe: return run_fringe_scan(cfg);
    }
    throw ConfigError("unknown campaign kind");
}

} // namespace nanotip
