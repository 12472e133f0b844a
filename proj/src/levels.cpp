#include "nanotip/levels.hpp"

#include <cmath>

namespace nanotip {

void LevelSystem::validate() const {
    const std::size_t n = energies_ev.size();
    if (n < 2)
        throw ConfigError("levels must contain at least two energies");
    if (dipoles_enm.size() != n)
        throw ConfigError("levels dipole matrix must be square with one row per level");
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(energies_ev[i]))
            throw ConfigError("levels energies must be finite");
        if (dipoles_enm[i].size() != n)
            throw ConfigError("levels dipole matrix must be square with one row per level");
        if (dipoles_enm[i][i] != 0.0)
            throw ConfigError("levels dipole matrix must have zero diagonal");
        for (std::size_t j = 0; j < n; ++j)
            if (dipoles_enm[i][j] != dipoles_enm[j][i])
                throw ConfigError("levels dipole matrix must be symmetric");
    }
    if (initial_index < 0 || static_cast<std::size_t>(initial_index) >= n)
        throw ConfigError("levels.initial_index out of range");
    if (final_index < 0 || static_cast<std::size_t>(final_index) >= n)
        throw ConfigError("levels.final_index out of range");
    if (!(energies_ev[final_index] > energies_ev[initial_index]))
        throw ConfigError("levels must satisfy final energy > initial energy");
}

std::size_t TimeGrid::steps() const {
    return static_cast<std::size_t>(std::ceil((t_end_fs - t_start_fs) / dt_fs));
}

void TimeGrid::validate() const {
    if (!(t_start_fs < t_end_fs))
        throw ConfigError("grid must satisfy t_start < t_end");
    if (!(dt_fs > 0.0))
        throw ConfigError("grid must satisfy dt > 0");
}

void TimeGrid::validate_covers(const TwoColorField& field, double padding_fwhm) const {
    validate();
    const double pad = padding_fwhm * field.max_fwhm_fs();
    for (const auto& p : field.pulses) {
        if (t_start_fs > p.delay_fs - pad || t_end_fs < p.delay_fs + pad)
            throw ConfigError("grid must span >= " + std::to_string(padding_fwhm) +
                              " widest-pulse FWHMs around every pulse center");
    }
}

TimeGrid make_grid(const TwoColorField& field, double padding_fwhm, double steps_per_cycle) {
    field.validate();
    const double pad = padding_fwhm * field.max_fwhm_fs();
    TimeGrid g;
    g.t_start_fs = field.pulses.front().delay_fs - pad;
    g.t_end_fs = field.pulses.front().delay_fs + pad;
    for (const auto& p : field.pulses) {
        g.t_start_fs = std::min(g.t_start_fs, p.delay_fs - pad);
        g.t_end_fs = std::max(g.t_end_fs, p.delay_fs + pad);
    }
    g.dt_fs = field.min_wavelength_nm() / units::c_nm_fs / steps_per_cycle;
    return g;
}

double StateVector::norm_sq() const {
    double s = 0.0;
    for (const auto& a : amplitudes) s += std::norm(a);
    return s;
}

} // namespace nanotip
