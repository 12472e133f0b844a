// Gaussian two-color laser pulses projected onto the tip axis.
#pragma once

#include <complex>
#include <string>
#include <vector>

#include "nanotip/constants.hpp"
#include "nanotip/errors.hpp"

namespace nanotip {

struct PulseSpec {
    std::string label;                     // color tag, e.g. "w" or "2w"
    double wavelength_nm = 800.0;
    double peak_intensity_wcm2 = 0.0;
    double fwhm_fs = 100.0;                // intensity-envelope FWHM
    double delay_fs = 0.0;                 // positive = later arrival
    double carrier_phase_rad = 0.0;
    double polarization_angle_deg = 0.0;   // relative to tip axis

    double angular_frequency() const { return units::angular_frequency(wavelength_nm); }
    double peak_field_v_nm() const { return units::intensity_to_peak_field(peak_intensity_wcm2); }
    double cos_pol() const { return std::cos(polarization_angle_deg * units::pi / 180.0); }

    // Amplitude envelope, exp(-2 ln2 (t-tau)^2 / T^2): the squared (intensity)
    // envelope then has FWHM = fwhm_fs.
    double envelope(double t_fs) const;

    // Projected on-axis field E0 cos(theta) env(t) cos(w (t-tau) + phi), V/nm.
    double projected_field_at(double t_fs) const;

    // Co-rotating (absorption) half of the carrier:
    // (E0 cos(theta)/2) env(t) exp(-i (w (t-tau) + phi)).
    std::complex<double> absorption_component(double t_fs) const;

    void validate() const;
};

struct TwoColorField {
    std::vector<PulseSpec> pulses;

    double total_field_at(double t_fs) const;
    const PulseSpec* find(const std::string& label) const;
    double max_fwhm_fs() const;
    double min_wavelength_nm() const;
    void validate() const;
};

} // namespace nanotip
