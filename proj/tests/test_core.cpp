#include <doctest.h>

#include <cmath>

#include "nanotip/constants.hpp"
#include "nanotip/tip.hpp"

using namespace nanotip;

TEST_CASE("constants are mutually consistent") {
    // hc = hbar * c * 2 pi
    const double hc = units::hbar_ev_fs * units::c_nm_fs * 2.0 * units::pi;
    CHECK(std::abs(hc - units::hc_ev_nm) / units::hc_ev_nm < 1e-6);
}

TEST_CASE("photon energy") {
    CHECK(units::photon_energy_ev(800.0) == doctest::Approx(1239.841984 / 800.0).epsilon(1e-12));
    CHECK(units::photon_energy_ev(800.0) == doctest::Approx(1.5498).epsilon(1e-4));
    CHECK(units::photon_energy_ev(400.0) == doctest::Approx(3.0996).epsilon(1e-4));
    CHECK_THROWS_AS(units::photon_energy_ev(0.0), std::domain_error);
    CHECK_THROWS_AS(units::photon_energy_ev(-5.0), std::domain_error);

    // exact halving for a sample of wavelengths
    for (const double lam : {200.0, 512.0, 800.0, 1560.0, 4000.0})
        CHECK(units::photon_energy_ev(lam / 2.0) ==
              doctest::Approx(2.0 * units::photon_energy_ev(lam)).epsilon(1e-15));

    // unit self-consistency: 2 * E(800) - E(400) = 0
    const double resid =
        units::photon_energy_ev(800.0) + units::photon_energy_ev(800.0) -
        units::photon_energy_ev(400.0);
    CHECK(std::abs(resid) < 1e-9 * units::photon_energy_ev(400.0));
}

TEST_CASE("dc field") {
    TipSpec tip;  // paper values: 170 V, 50 nm, k = 4
    CHECK(dc_field_v_per_m(tip) == doctest::Approx(8.5e8).epsilon(1e-12));

    TipSpec unity{100.0, 25.0, 1.0, 6.0};
    CHECK(dc_field_v_per_m(unity) == doctest::Approx(100.0 / 25.0 * 1e9).epsilon(1e-12));

    TipSpec doubled = tip;
    doubled.bias_voltage_v = 340.0;
    CHECK(dc_field_v_per_m(doubled) == doctest::Approx(1.7e9).epsilon(1e-12));

    TipSpec bad = tip;
    bad.radius_nm = 0.0;
    CHECK_THROWS_AS(dc_field_v_per_m(bad), ConfigError);
}

TEST_CASE("schottky effective work function") {
    const auto r = schottky_effective_work_function(6.0, 8.5e8);
    CHECK(r.effective_ev == doctest::Approx(4.894).epsilon(2e-4));
    CHECK(!r.barrier_suppressed);

    CHECK(schottky_effective_work_function(4.5, 0.0).effective_ev == doctest::Approx(4.5));

    // quarter field halves the lowering
    const auto q = schottky_effective_work_function(6.0, 2.125e8);
    CHECK(q.lowering_ev == doctest::Approx(0.5 * r.lowering_ev).epsilon(1e-12));
    CHECK(q.effective_ev == doctest::Approx(5.447).epsilon(1e-4));

    // monotone increasing and concave lowering; halving the field divides the
    // lowering by exactly sqrt(2)
    double prev_lower = -1.0, prev_delta = 1e300;
    for (const double e : {1e8, 2e8, 3e8, 4e8, 5e8}) {
        const auto s = schottky_effective_work_function(6.0, e);
        CHECK(s.lowering_ev > prev_lower);
        const double delta = s.lowering_ev - std::max(prev_lower, 0.0);
        CHECK(delta < prev_delta);
        prev_lower = s.lowering_ev;
        prev_delta = delta;
    }
    const auto full = schottky_effective_work_function(6.0, 4.4e8);
    const auto half = schottky_effective_work_function(6.0, 2.2e8);
    CHECK(half.lowering_ev == doctest::Approx(full.lowering_ev / std::sqrt(2.0)).epsilon(1e-12));

    // barrier suppression is flagged, not silently negative
    const auto sup = schottky_effective_work_function(0.5, 1e9);
    CHECK(sup.barrier_suppressed);
    CHECK(sup.lowering_ev > 0.5);
}

TEST_CASE("intensity to peak field") {
    CHECK(units::intensity_to_peak_field(6.7e11) == doctest::Approx(2.247).epsilon(5e-4));
    CHECK(units::intensity_to_peak_field(0.0) == 0.0);
    for (const double i : {1e7, 3.3e9, 6.7e11})
        CHECK(units::intensity_to_peak_field(4.0 * i) ==
              doctest::Approx(2.0 * units::intensity_to_peak_field(i)).epsilon(1e-14));
    CHECK_THROWS_AS(units::intensity_to_peak_field(-1.0), std::domain_error);
}

TEST_CASE("two-color intensity") {
    // independent oracle: direct cube root via pow
    const double oracle = std::pow(6.7e11 * 6.7e11 * 2.2e10, 1.0 / 3.0);
    CHECK(units::two_color_intensity(6.7e11, 2.2e10) == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(units::two_color_intensity(6.7e11, 2.2e10) == doctest::Approx(2.14e11).epsilon(5e-3));
    CHECK(units::two_color_intensity(3.0e10, 3.0e10) == doctest::Approx(3.0e10).epsilon(1e-14));
    CHECK(units::two_color_intensity(0.0, 5e10) == 0.0);

    // homogeneity: scaling both intensities by s scales the result by s
    for (const double s : {0.1, 2.0, 17.0}) {
        const double base = units::two_color_intensity(6.7e11, 2.2e10);
        CHECK(units::two_color_intensity(s * 6.7e11, s * 2.2e10) ==
              doctest::Approx(s * base).epsilon(1e-13));
    }
}
