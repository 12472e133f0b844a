#include "nanotip/pulse.hpp"

#include <cmath>

namespace nanotip {

namespace {
constexpr double two_ln2 = 2.0 * 0.69314718055994530942;
}

double PulseSpec::envelope(double t_fs) const {
    const double x = (t_fs - delay_fs) / fwhm_fs;
    return std::exp(-two_ln2 * x * x);
}

double PulseSpec::projected_field_at(double t_fs) const {
    const double carrier = std::cos(angular_frequency() * (t_fs - delay_fs) + carrier_phase_rad);
    return peak_field_v_nm() * cos_pol() * envelope(t_fs) * carrier;
}

std::complex<double> PulseSpec::absorption_component(double t_fs) const {
    const double phase = angular_frequency() * (t_fs - delay_fs) + carrier_phase_rad;
    return 0.5 * peak_field_v_nm() * cos_pol() * envelope(t_fs) *
           std::complex<double>(std::cos(phase), -std::sin(phase));
}

void PulseSpec::validate() const {
    const std::string tag = label.empty() ? std::string("pulse") : "pulse." + label;
    if (!(wavelength_nm > 0.0))
        throw ConfigError(tag + ".wavelength_nm must satisfy wavelength > 0");
    if (!(fwhm_fs > 0.0))
        throw ConfigError(tag + ".fwhm_fs must satisfy fwhm > 0");
    if (!(peak_intensity_wcm2 >= 0.0))
        throw ConfigError(tag + ".peak_intensity_wcm2 must satisfy peak_intensity >= 0");
    if (!(std::abs(polarization_angle_deg) <= 90.0))
        throw ConfigError(tag + ".polarization_angle_deg must satisfy |polarization_angle| <= 90");
}

double TwoColorField::total_field_at(double t_fs) const {
    double sum = 0.0;
    for (const auto& p : pulses) sum += p.projected_field_at(t_fs);
    return sum;
}

const PulseSpec* TwoColorField::find(const std::string& label) const {
    for (const auto& p : pulses)
        if (p.label == label) return &p;
    return nullptr;
}

double TwoColorField::max_fwhm_fs() const {
    double m = 0.0;
    for (const auto& p : pulses) m = std::max(m, p.fwhm_fs);
    return m;
}

double TwoColorField::min_wavelength_nm() const {
    double m = pulses.empty() ? 0.0 : pulses.front().wavelength_nm;
    for (const auto& p : pulses) m = std::min(m, p.wavelength_nm);
    return m;
}

void TwoColorField::validate() const {
    if (pulses.empty())
        throw ConfigError("field must contain at least one pulse");
    for (const auto& p : pulses) p.validate();
    for (std::size_t a = 0; a < pulses.size(); ++a)
        for (std::size_t b = a + 1; b < pulses.size(); ++b)
            if (pulses[a].label == pulses[b].label)
                throw ConfigError("duplicate pulse label '" + pulses[a].label + "'");
}

} // namespace nanotip
