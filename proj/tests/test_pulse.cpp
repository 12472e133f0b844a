#include <doctest.h>

#include <cmath>

#include "nanotip/pulse.hpp"

using namespace nanotip;

namespace {

PulseSpec make_pulse(double lam, double intensity, double fwhm, double delay = 0.0,
                     double phase = 0.0, double angle = 0.0) {
    PulseSpec p;
    p.label = "w";
    p.wavelength_nm = lam;
    p.peak_intensity_wcm2 = intensity;
    p.fwhm_fs = fwhm;
    p.delay_fs = delay;
    p.carrier_phase_rad = phase;
    p.polarization_angle_deg = angle;
    return p;
}

} // namespace

TEST_CASE("projected field basics") {
    PulseSpec p = make_pulse(800.0, 6.7e11, 100.0, 12.0);
    // envelope and carrier maxima coincide at t = tau
    CHECK(p.projected_field_at(12.0) == doctest::Approx(p.peak_field_v_nm()).epsilon(1e-12));

    // orthogonal polarization kills the projection
    PulseSpec o = p;
    o.polarization_angle_deg = 90.0;
    for (const double t : {-40.0, 0.0, 12.0, 133.0})
        CHECK(std::abs(o.projected_field_at(t)) < 1e-15 * p.peak_field_v_nm());

    // amplitude envelope at half the intensity FWHM is 2^(-1/2)
    CHECK(p.envelope(12.0 + 50.0) == doctest::Approx(std::exp(-0.5 * std::log(2.0))).epsilon(1e-12));
    CHECK(p.envelope(12.0 + 50.0) == doctest::Approx(0.7071067811865476).epsilon(1e-12));

    // envelope is even about t = tau
    for (const double dt : {3.0, 41.0, 97.0})
        CHECK(p.envelope(12.0 + dt) == doctest::Approx(p.envelope(12.0 - dt)).epsilon(1e-14));
}

TEST_CASE("total field superposition") {
    PulseSpec a = make_pulse(800.0, 6.7e11, 100.0);
    TwoColorField single{{a}};
    for (const double t : {-30.0, 0.0, 7.5})
        CHECK(single.total_field_at(t) == doctest::Approx(a.projected_field_at(t)));

    PulseSpec b = a;
    b.label = "w2";
    TwoColorField twin{{a, b}};
    for (const double t : {-30.0, 0.0, 7.5})
        CHECK(twin.total_field_at(t) == doctest::Approx(2.0 * a.projected_field_at(t)));

    // a pulse pushed far beyond the window leaves only the other one
    PulseSpec w2 = make_pulse(400.0, 2.2e10, 400.0);
    w2.label = "2w";
    PulseSpec far = a;
    far.delay_fs = 1.0e4;
    TwoColorField mixed{{far, w2}};
    for (const double t : {-400.0, 0.0, 400.0}) {
        const double expected = w2.projected_field_at(t);
        CHECK(std::abs(mixed.total_field_at(t) - expected) <=
              1e-12 * std::max(1.0, std::abs(expected)));
    }
}

TEST_CASE("time-shift covariance") {
    PulseSpec a = make_pulse(800.0, 6.7e11, 100.0, 0.0, 0.3, 48.0);
    PulseSpec b = make_pulse(400.0, 2.2e10, 400.0, -20.0, 0.0, -64.0);
    b.label = "2w";
    TwoColorField f{{a, b}};
    TwoColorField shifted = f;
    const double delta = 37.25;
    for (auto& p : shifted.pulses) p.delay_fs += delta;
    for (const double t : {-150.0, -3.0, 0.0, 88.0})
        CHECK(shifted.total_field_at(t + delta) ==
              doctest::Approx(f.total_field_at(t)).epsilon(1e-12));
}

TEST_CASE("cycle-averaged intensity at the envelope peak") {
    // fwhm of 100 fs is ~37 optical cycles at 800 nm
    PulseSpec p = make_pulse(800.0, 6.7e11, 100.0);
    const double period = 800.0 / units::c_nm_fs;
    const int n = 20000;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = -0.5 * period + period * (i + 0.5) / n;
        const double e = p.projected_field_at(t);
        acc += e * e;
    }
    acc /= n;
    const double e0 = p.peak_field_v_nm();
    CHECK(acc == doctest::Approx(0.5 * e0 * e0).epsilon(0.01));
}

TEST_CASE("pulse validation") {
    CHECK_THROWS_AS(make_pulse(-800.0, 1e10, 100.0).validate(), ConfigError);
    CHECK_THROWS_AS(make_pulse(800.0, 1e10, -5.0).validate(), ConfigError);
    CHECK_THROWS_AS(make_pulse(800.0, -1e10, 100.0).validate(), ConfigError);
    CHECK_THROWS_AS(make_pulse(800.0, 1e10, 100.0, 0.0, 0.0, 120.0).validate(), ConfigError);
    CHECK_NOTHROW(make_pulse(800.0, 1e10, 100.0, 0.0, 0.0, -90.0).validate());
    CHECK_THROWS_AS(TwoColorField{}.validate(), ConfigError);
}
