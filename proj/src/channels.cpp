#include "nanotip/channels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "nanotip/constants.hpp"

namespace nanotip {

using cd = std::complex<double>;

int ChannelSpec::total_order() const {
    int n = 0;
    for (const auto& [label, count] : counts) n += count;
    return n;
}

int ChannelSpec::count_of(const std::string& label) const {
    for (const auto& [l, c] : counts)
        if (l == label) return c;
    return 0;
}

std::string ChannelSpec::to_string() const {
    std::string s;
    for (const auto& [l, c] : counts) {
        if (!s.empty()) s += ",";
        s += l + ":" + std::to_string(c);
    }
    return s;
}

ChannelSpec ChannelSpec::parse(const std::string& text) {
    ChannelSpec ch;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw ConfigError("channel entry '" + item + "' must look like color:count");
        std::string label = item.substr(0, colon);
        std::string count = item.substr(colon + 1);
        auto strip = [](std::string& s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            s = (b == std::string::npos) ? std::string() : s.substr(b, e - b + 1);
        };
        strip(label);
        strip(count);
        int n = 0;
        try {
            n = std::stoi(count);
        } catch (const std::exception&) {
            throw ConfigError("channel count '" + count + "' is not an integer");
        }
        ch.counts.emplace_back(label, n);
    }
    ch.validate();
    return ch;
}

void ChannelSpec::validate() const {
    if (counts.empty())
        throw ConfigError("channel must satisfy total_order >= 1");
    for (const auto& [l, c] : counts) {
        if (l.empty()) throw ConfigError("channel color label must be non-empty");
        if (c < 1) throw ConfigError("channel count for '" + l + "' must be >= 1");
    }
    for (std::size_t a = 0; a < counts.size(); ++a)
        for (std::size_t b = a + 1; b < counts.size(); ++b)
            if (counts[a].first == counts[b].first)
                throw ConfigError("channel lists color '" + counts[a].first + "' twice");
}

namespace {

// Ladder propagation state and step kernel.  Partial amplitudes A[k][m], one
// complex number per (photon-count multi-index k, level m), integrated with
// classical RK4.  Layer k is driven only by layers k - e_c, so the k = 0
// layer stays pinned at the initial state.
struct Ladder {
    const LevelSystem& sys;
    std::vector<const PulseSpec*> pulses;   // per channel color
    std::vector<int> counts;
    std::vector<int> strides;
    std::size_t n_layers = 1;
    std::size_t n_levels;

    // nonzero dipole entries as (m, n, d_mn)
    struct Pair { int m, n; double d; };
    std::vector<Pair> nz;

    Ladder(const LevelSystem& s, const TwoColorField& field, const ChannelSpec& channel)
        : sys(s), n_levels(s.size()) {
        for (const auto& [label, count] : channel.counts) {
            const PulseSpec* p = field.find(label);
            if (!p)
                throw ConfigError("channel references color '" + label +
                                  "' absent from the driving field");
            pulses.push_back(p);
            strides.push_back(static_cast<int>(n_layers));
            counts.push_back(count);
            n_layers *= static_cast<std::size_t>(count + 1);
        }
        for (std::size_t m = 0; m < n_levels; ++m)
            for (std::size_t n = 0; n < n_levels; ++n)
                if (sys.dipoles_enm[m][n] != 0.0)
                    nz.push_back({static_cast<int>(m), static_cast<int>(n),
                                  sys.dipoles_enm[m][n]});
    }

    std::size_t dim() const { return n_layers * n_levels; }

    // dA = deriv(A) at the stage with level phases ph and per-color field
    // values eabs (absorption component at the stage time).
    void deriv(const std::vector<cd>& a, const std::vector<cd>& ph,
               const std::vector<cd>& eabs, std::vector<cd>& out) const {
        std::fill(out.begin(), out.end(), cd(0.0));
        const std::size_t n_colors = pulses.size();
        thread_local std::vector<cd> w;
        w.resize(nz.size());
        for (std::size_t c = 0; c < n_colors; ++c) {
            const cd pref = cd(0.0, 1.0 / units::hbar_ev_fs) * eabs[c];
            for (std::size_t p = 0; p < nz.size(); ++p)
                w[p] = pref * nz[p].d * ph[nz[p].m] * std::conj(ph[nz[p].n]);
            const int stride = strides[c] * static_cast<int>(n_levels);
            // layers with k_c >= 1
            for (std::size_t k = 0; k < n_layers; ++k) {
                const int kc = (static_cast<int>(k) / strides[c]) % (counts[c] + 1);
                if (kc == 0) continue;
                const std::size_t dst = k * n_levels;
                const std::size_t src = dst - static_cast<std::size_t>(stride);
                for (std::size_t p = 0; p < nz.size(); ++p)
                    out[dst + nz[p].m] += w[p] * a[src + nz[p].n];
            }
        }
    }
};

cd ladder_run(const Ladder& lad, const TimeGrid& grid, double dt) {
    const std::size_t dim = lad.dim();
    const std::size_t n_levels = lad.n_levels;
    const std::size_t n_colors = lad.pulses.size();
    const std::size_t n_steps =
        static_cast<std::size_t>(std::ceil((grid.t_end_fs - grid.t_start_fs) / dt));

    // absorption components on the half-step grid
    std::vector<std::vector<cd>> eabs(n_colors);
    for (std::size_t c = 0; c < n_colors; ++c) {
        eabs[c].resize(2 * n_steps + 1);
        for (std::size_t j = 0; j <= 2 * n_steps; ++j)
            eabs[c][j] = lad.pulses[c]->absorption_component(grid.t_start_fs + 0.5 * dt * j);
    }

    // level phases advanced by half-step rotors; drift ~ n_steps * eps is
    // far below the integrator error
    std::vector<cd> ph(n_levels), rot(n_levels);
    for (std::size_t m = 0; m < n_levels; ++m) {
        ph[m] = std::polar(1.0, lad.sys.energies_ev[m] * grid.t_start_fs / units::hbar_ev_fs);
        rot[m] = std::polar(1.0, lad.sys.energies_ev[m] * 0.5 * dt / units::hbar_ev_fs);
    }

    std::vector<cd> a(dim, 0.0), k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
    a[lad.sys.initial_index] = 1.0;  // k = 0 layer

    std::vector<cd> e_stage(n_colors), ph_mid(n_levels);
    for (std::size_t i = 0; i < n_steps; ++i) {
        for (std::size_t c = 0; c < n_colors; ++c) e_stage[c] = eabs[c][2 * i];
        lad.deriv(a, ph, e_stage, k1);

        for (std::size_t m = 0; m < n_levels; ++m) ph_mid[m] = ph[m] * rot[m];
        for (std::size_t c = 0; c < n_colors; ++c) e_stage[c] = eabs[c][2 * i + 1];
        for (std::size_t j = 0; j < dim; ++j) tmp[j] = a[j] + 0.5 * dt * k1[j];
        lad.deriv(tmp, ph_mid, e_stage, k2);
        for (std::size_t j = 0; j < dim; ++j) tmp[j] = a[j] + 0.5 * dt * k2[j];
        lad.deriv(tmp, ph_mid, e_stage, k3);

        for (std::size_t m = 0; m < n_levels; ++m) ph[m] = ph_mid[m] * rot[m];
        for (std::size_t c = 0; c < n_colors; ++c) e_stage[c] = eabs[c][2 * i + 2];
        for (std::size_t j = 0; j < dim; ++j) tmp[j] = a[j] + dt * k3[j];
        lad.deriv(tmp, ph, e_stage, k4);

        for (std::size_t j = 0; j < dim; ++j)
            a[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }

    return a[(lad.n_layers - 1) * n_levels + lad.sys.final_index];
}

} // namespace

ChannelAmplitude channel_amplitude(const LevelSystem& system, const TwoColorField& field,
                                   const ChannelSpec& channel, const TimeGrid& grid,
                                   const LadderOptions& opts) {
    system.validate();
    field.validate();
    channel.validate();
    grid.validate_covers(field);

    Ladder lad(system, field, channel);
    cd value = ladder_run(lad, grid, grid.dt_fs);
    if (opts.check_convergence) {
        const cd fine = ladder_run(lad, grid, 0.5 * grid.dt_fs);
        const double scale = std::max(std::abs(fine), opts.abs_floor);
        if (std::abs(fine) > opts.abs_floor &&
            std::abs(fine - value) > opts.rel_tol * scale) {
            std::ostringstream msg;
            msg << "channel " << channel.to_string() << ": grid too coarse, dt = "
                << grid.dt_fs << " fs vs dt/2 differ by "
                << std::abs(fine - value) / scale << " relative";
            throw NumericError(msg.str());
        }
        value = fine;
    }

    ChannelAmplitude out;
    out.value = value;
    out.channel = channel;
    out.regime_flag = std::norm(value) > 1.0;
    return out;
}

std::vector<std::vector<std::string>> enumerate_orderings(const ChannelSpec& channel) {
    channel.validate();
    std::vector<std::string> seq;
    auto sorted = channel.counts;
    std::sort(sorted.begin(), sorted.end());
    for (const auto& [label, count] : sorted)
        for (int i = 0; i < count; ++i) seq.push_back(label);
    std::vector<std::vector<std::string>> out;
    do {
        out.push_back(seq);
    } while (std::next_permutation(seq.begin(), seq.end()));
    return out;
}

double scaling_probability(const ChannelSpec& channel, const std::vector<PulseSpec>& pulses) {
    channel.validate();
    double prod = 1.0;
    for (const auto& [label, count] : channel.counts) {
        const PulseSpec* p = nullptr;
        for (const auto& q : pulses)
            if (q.label == label) p = &q;
        if (!p)
            throw ConfigError("channel references color '" + label +
                              "' absent from the pulse list");
        const double c = p->cos_pol();
        prod *= std::pow(p->peak_intensity_wcm2, count) * std::pow(c * c, count);
    }
    return prod;
}

double additivity(double p_w, double p_2w, double p_total) {
    const double denom = p_w + p_2w;
    if (!(denom > 0.0))
        throw std::domain_error("additivity requires p_w + p_2w > 0");
    return (p_total - p_w - p_2w) / denom;
}

double fringe_pattern(const FringeParams& params, double tau_fs) {
    if (params.f_single < 0.0 || params.f_multi < 0.0)
        throw std::domain_error("fringe amplitudes must satisfy f >= 0");
    if (!params.overlap)
        throw std::domain_error("fringe overlap function g must be set");
    const double g = params.overlap(tau_fs);
    const double phase = 2.0 * params.angular_frequency * tau_fs;
    return params.f_single * params.f_single + params.f_multi * params.f_multi * g * g +
           2.0 * std::cos(phase) * params.f_single * params.f_multi * g;
}

double visibility(double f_single, double f_multi) {
    const double denom = f_single * f_single + f_multi * f_multi;
    if (!(denom > 0.0))
        throw std::domain_error("visibility requires f_single^2 + f_multi^2 > 0");
    return 2.0 * f_single * f_multi / denom;
}

} // namespace nanotip
