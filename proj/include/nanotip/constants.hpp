// Physical constants and unit conversions.
//
// Internal unit system: energies in eV, times in fs, lengths in nm,
// electric fields in V/nm, dipole moments in e*nm.  A field-dipole
// product is then directly an energy in eV.  Constant values are
// CODATA-2018, truncated to 10 significant digits.
#pragma once

#include <cmath>
#include <stdexcept>

namespace nanotip::units {

inline constexpr double hbar_ev_fs = 0.6582119569;   // reduced Planck constant
inline constexpr double c_nm_fs = 299.792458;        // speed of light
inline constexpr double hc_ev_nm = 1239.841984;      // photon energy * wavelength
inline constexpr double coulomb_e2_ev_nm = 1.439964; // e^2 / (4 pi eps0)
inline constexpr double z0_ohm = 376.7303137;        // vacuum impedance
inline constexpr double pi = 3.14159265358979323846;

// hc/lambda in eV; lambda in nm.
inline double photon_energy_ev(double wavelength_nm) {
    if (!(wavelength_nm > 0.0))
        throw std::domain_error("photon_energy_ev: wavelength must satisfy wavelength > 0");
    return hc_ev_nm / wavelength_nm;
}

// Carrier angular frequency 2*pi*c/lambda in rad/fs.
inline double angular_frequency(double wavelength_nm) {
    if (!(wavelength_nm > 0.0))
        throw std::domain_error("angular_frequency: wavelength must satisfy wavelength > 0");
    return 2.0 * pi * c_nm_fs / wavelength_nm;
}

// Peak field E0 = sqrt(2 I Z0) for intensity in W/cm^2, result in V/nm.
inline double intensity_to_peak_field(double intensity_wcm2) {
    if (intensity_wcm2 < 0.0)
        throw std::domain_error("intensity_to_peak_field: intensity must satisfy intensity >= 0");
    // 2 * 1e4 (W/cm^2 -> W/m^2) * Z0, then 1e-18 for (V/m)^2 -> (V/nm)^2
    return std::sqrt(2.0e4 * z0_ohm * 1.0e-18 * intensity_wcm2);
}

// Composite two-color intensity (I_w^2 * I_2w)^(1/3), W/cm^2.
inline double two_color_intensity(double i_w_wcm2, double i_2w_wcm2) {
    if (i_w_wcm2 < 0.0 || i_2w_wcm2 < 0.0)
        throw std::domain_error("two_color_intensity: intensities must satisfy intensity >= 0");
    return std::cbrt(i_w_wcm2 * i_w_wcm2 * i_2w_wcm2);
}

} // namespace nanotip::units
