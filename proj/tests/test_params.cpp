#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "anisodiff/params.hpp"

using namespace anisodiff;

// Reference values recomputed at 50+ digits with an independent
// high-precision script and rounded to nearest double.

static DerivedExponents ref3d() {
    return derive(make_anisotropy(3, 0.5, {2.2, 2.4, 2.6}));
}

TEST_CASE("make_anisotropy validation") {
    CHECK_THROWS_AS(make_anisotropy(0, 0.5, {}), std::invalid_argument);
    CHECK_THROWS_AS(make_anisotropy(2, 0.0, {2.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(make_anisotropy(2, -0.5, {2.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(make_anisotropy(2, 1.5, {2.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(make_anisotropy(2, 0.5, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(make_anisotropy(2, 0.5, {2.0}), std::invalid_argument);
    CHECK_THROWS_AS(make_anisotropy(2, 0.5, {2.0, 2.0}, 0.5), std::invalid_argument);
    CHECK_NOTHROW(make_anisotropy(2, 1.0, {2.0, 2.0}));
}

TEST_CASE("p sorted ascending with the user order kept as a permutation") {
    const Anisotropy a = make_anisotropy(3, 0.5, {2.6, 2.2, 2.4});
    CHECK(a.p[0] == 2.2);
    CHECK(a.p[1] == 2.4);
    CHECK(a.p[2] == 2.6);
    // axis_order[j] = user axis holding the j-th smallest exponent
    CHECK(a.p[0] == 2.2);
    CHECK(a.p_axis(a.axis_order[0]) == a.p[0]);
    CHECK(a.p_axis(a.axis_order[1]) == a.p[1]);
    CHECK(a.p_axis(a.axis_order[2]) == a.p[2]);
    CHECK(a.p_axis(0) == 2.6);
    CHECK(a.p_axis(1) == 2.2);
    CHECK(a.p_axis(2) == 2.4);
}

TEST_CASE("isotropic heat tuple is exact") {
    const DerivedExponents e = derive(make_anisotropy(2, 1.0, {2.0, 2.0}));
    CHECK(e.p_bar == 2.0);
    CHECK(e.lambda1 == 2.0);
    CHECK(e.mass_decay_exponent == 1.0);
    CHECK(e.mass_gain_exponent == 1.0);
    CHECK(e.support_exponent[0] == 0.5);
    CHECK(e.support_exponent[1] == 0.5);
    CHECK(e.lambda_small == 0.0);
    CHECK(!e.p_bar_star.has_value());  // p_bar == N
    CHECK(e.m_threshold == 0.0);
}

TEST_CASE("reference 3D tuple against the high-precision oracle") {
    const DerivedExponents e = ref3d();
    const double tol = 1e-14;
    CHECK(e.p_bar == doctest::Approx(2.388863109048724).epsilon(tol));
    REQUIRE(e.p_bar_star.has_value());
    CHECK(*e.p_bar_star == doctest::Approx(11.726651480637813).epsilon(tol));
    CHECK(e.P == 2.6);
    CHECK(e.lambda1 == doctest::Approx(5.0554524361948951).epsilon(tol));
    CHECK(e.mass_decay_exponent == doctest::Approx(0.59341869750791687).epsilon(tol));
    CHECK(e.mass_gain_exponent == doctest::Approx(0.47253201156546881).epsilon(tol));
    CHECK(e.m_threshold == doctest::Approx(-1.1162587412587412).epsilon(tol));
    CHECK(e.lambda_small == doctest::Approx(1.3651515151515152).epsilon(tol));
    CHECK(e.lambda_q(1.5) == doctest::Approx(6.2498839907192574).epsilon(tol));
    CHECK(e.p_bar_sigma(1.0) == doctest::Approx(3.1851508120649652).epsilon(tol));
    CHECK(e.p_bar_sigma(1.5) == doctest::Approx(3.5832946635730858).epsilon(tol));

    const double se[3] = {0.26573041442929918, 0.19413465510119784, 0.13355362797741979};
    const double sm[3] = {0.1503510945890128, 0.17719950433705081, 0.19991738950846757};
    for (int i = 0; i < 3; ++i) {
        CHECK(e.support_exponent[i] == doctest::Approx(se[i]).epsilon(tol));
        CHECK(e.support_mass_exponent[i] == doctest::Approx(sm[i]).epsilon(tol));
    }

    const RegimeFlags f = regime_flags(make_anisotropy(3, 0.5, {2.2, 2.4, 2.6}));
    CHECK(f.supercritical);
    CHECK(f.boundedness_window);
    CHECK(f.slow_diffusion);
    CHECK(f.rough_support);
    CHECK(f.ultracontractive);
}

TEST_CASE("2D tuple with exponents below 2") {
    const DerivedExponents e = derive(make_anisotropy(2, 0.5, {1.7, 1.9}));
    const double tol = 1e-14;
    CHECK(e.p_bar == doctest::Approx(1.7944444444444445).epsilon(tol));
    CHECK(e.lambda1 == doctest::Approx(2.3833333333333333).epsilon(tol));
    CHECK(e.mass_decay_exponent == doctest::Approx(0.83916083916083917).epsilon(tol));
    CHECK(e.mass_gain_exponent == doctest::Approx(0.75291375291375295).epsilon(tol));
    CHECK(e.lambda_small == doctest::Approx(0.51764705882352946).epsilon(tol));
    CHECK(e.support_exponent[0] == doctest::Approx(0.48951048951048953).epsilon(tol));
    CHECK(e.support_exponent[1] == doctest::Approx(0.34965034965034963).epsilon(tol));

    const RegimeFlags f = regime_flags(make_anisotropy(2, 0.5, {1.7, 1.9}));
    CHECK(f.supercritical);
    CHECK(f.slow_diffusion);
}

TEST_CASE("2D tuple at alpha = 0.8") {
    const DerivedExponents e = derive(make_anisotropy(2, 0.8, {2.2, 2.4}));
    CHECK(e.mass_decay_exponent == doctest::Approx(0.60846560846560849).epsilon(1e-14));
    CHECK(e.lambda_small == doctest::Approx(0.69090909090909092).epsilon(1e-14));
    CHECK(!e.p_bar_star.has_value());  // p_bar = 2.2957 > N = 2
    CHECK(!regime_flags(make_anisotropy(2, 0.8, {2.2, 2.4})).slow_diffusion);
}

TEST_CASE("1D slow-diffusion window is empty") {
    const RegimeFlags f = regime_flags(make_anisotropy(1, 0.5, {1.7}));
    CHECK(!f.slow_diffusion);
    const DerivedExponents e = derive(make_anisotropy(1, 0.5, {1.7}));
    CHECK(e.lambda_small == doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("lambda_q strictly increasing in q") {
    const DerivedExponents e = ref3d();
    double prev = e.lambda_q(0.0);
    for (double q = 0.25; q <= 3.0; q += 0.25) {
        CHECK(e.lambda_q(q) > prev);
        prev = e.lambda_q(q);
    }
}

TEST_CASE("sum identities") {
    CHECK(check_sum_identities(derive(make_anisotropy(2, 1.0, {2.0, 2.0}))).ok);
    CHECK(check_sum_identities(ref3d()).ok);

    DerivedExponents broken = ref3d();
    broken.lambda1 *= 1.0 + 1e-3;
    for (auto& s : broken.support_exponent) s /= 1.0 + 1e-3;
    // support identity now misses N/lambda1 by the same relative 1e-3
    CHECK(!check_sum_identities(broken).ok);
}

TEST_CASE("harmonic mean stays between the extreme exponents") {
    for (double lo : {1.1, 1.7, 2.3}) {
        for (double hi : {2.6, 3.5, 5.0}) {
            const DerivedExponents e = derive(make_anisotropy(2, 0.5, {lo, hi}));
            CHECK(e.p_bar >= lo);
            CHECK(e.p_bar <= hi);
        }
    }
}
