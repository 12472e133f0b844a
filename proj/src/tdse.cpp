#include "nanotip/tdse.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "nanotip/constants.hpp"

namespace nanotip {

namespace {

using cd = std::complex<double>;

// da_m/dt = (i/hbar) E(t) ph_m sum_n d_mn conj(ph_n) a_n, ph_m = exp(i E_m t / hbar)
void deriv(const LevelSystem& sys, const TwoColorField& field, double t,
           const std::vector<cd>& a, std::vector<cd>& out) {
    const std::size_t n = sys.size();
    const double e_field = field.total_field_at(t);
    thread_local std::vector<cd> ph, q;
    ph.resize(n);
    q.resize(n);
    for (std::size_t m = 0; m < n; ++m) {
        ph[m] = std::polar(1.0, sys.energies_ev[m] * t / units::hbar_ev_fs);
        q[m] = std::conj(ph[m]) * a[m];
    }
    const cd pref = cd(0.0, e_field / units::hbar_ev_fs);
    for (std::size_t m = 0; m < n; ++m) {
        cd z = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double d = sys.dipoles_enm[m][k];
            if (d != 0.0) z += d * q[k];
        }
        out[m] = pref * ph[m] * z;
    }
}

void rk4_step(const LevelSystem& sys, const TwoColorField& field, double t, double h,
              std::vector<cd>& a) {
    const std::size_t n = a.size();
    thread_local std::vector<cd> k1, k2, k3, k4, tmp;
    k1.resize(n); k2.resize(n); k3.resize(n); k4.resize(n); tmp.resize(n);
    deriv(sys, field, t, a, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = a[i] + 0.5 * h * k1[i];
    deriv(sys, field, t + 0.5 * h, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = a[i] + 0.5 * h * k2[i];
    deriv(sys, field, t + 0.5 * h, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = a[i] + h * k3[i];
    deriv(sys, field, t + h, tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
        a[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

} // namespace

StateVector propagate(const LevelSystem& system, const TwoColorField& field,
                      const TimeGrid& grid) {
    system.validate();
    field.validate();
    grid.validate();

    std::vector<cd> a(system.size(), 0.0);
    a[system.initial_index] = 1.0;

    const double h = grid.dt_fs;
    double t = grid.t_start_fs;
    double worst_drift = 0.0;
    while (t < grid.t_end_fs - 1e-12 * h) {
        const double step = std::min(h, grid.t_end_fs - t);
        rk4_step(system, field, t, step, a);
        t += step;
        double nrm = 0.0;
        for (const auto& v : a) nrm += std::norm(v);
        worst_drift = std::max(worst_drift, std::abs(nrm - 1.0));
        if (worst_drift > 1e-6) {
            std::ostringstream msg;
            msg << "TDSE norm drift " << worst_drift << " at t = " << t
                << " fs exceeds 1e-6; dt = " << h << " fs is too coarse";
            throw NumericError(msg.str());
        }
    }

    StateVector out;
    out.amplitudes = std::move(a);
    return out;
}

double emission_probability(const StateVector& state, const LevelSystem& system) {
    if (state.amplitudes.size() != system.size())
        throw ConfigError("state size does not match level system");
    return std::norm(state.amplitudes[system.final_index]);
}

} // namespace nanotip
