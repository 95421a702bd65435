#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "anisodiff/grid.hpp"
#include "anisodiff/oracles.hpp"

using namespace anisodiff;

TEST_CASE("heat kernel values") {
    HeatOracle o;
    o.dim = 2;
    o.mass = 3.0;
    o.t_offset = 0.5;

    const double pi = 3.14159265358979323846;
    const double x0[2] = {0.0, 0.0};
    CHECK(o.value(x0, 0.5) == doctest::Approx(3.0 / (4.0 * pi)).epsilon(1e-14));

    const double xa[2] = {0.7, -0.3}, xb[2] = {-0.7, 0.3}, xc[2] = {0.3, 0.7};
    const double s = 1.5;  // t = 1.0
    const double expect = 3.0 * std::pow(4.0 * pi * s, -1.0) *
                          std::exp(-(0.49 + 0.09) / (4.0 * s));
    CHECK(o.value(xa, 1.0) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(o.value(xa, 1.0) == o.value(xb, 1.0));  // even in each coordinate
    CHECK(o.value(xa, 1.0) == o.value(xc, 1.0));  // isotropic

    // sampled integral recovers the mass (tails truncated far out)
    const GridSpec g = make_grid(2, {8.0, 8.0}, {128, 128});
    const auto u = sample_field(g, [&](const double* x) { return o.value(x, 1.0); });
    CHECK(norm_l1(g, u) == doctest::Approx(3.0).epsilon(1e-4));
}

TEST_CASE("orthotropic source-type profile") {
    CHECK_THROWS_AS(make_barenblatt(2, 2.0, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_barenblatt(2, 3.0, 0.0, 0.0), std::invalid_argument);

    const BarenblattOracle o = make_barenblatt(2, 3.0, 1.0, 0.0);
    CHECK(o.lambda == 5.0);
    CHECK(o.q == 1.5);
    CHECK(o.m == 2.0);
    CHECK(o.k == doctest::Approx(0.14907119849998599).epsilon(1e-15));
    CHECK(o.axis_support_radius(2.0) == doctest::Approx(4.085797487767704).epsilon(1e-12));

    // peak value s^{-N/lambda} C^m and compact support
    const double x0[2] = {0.0, 0.0};
    CHECK(o.value(x0, 2.0) == doctest::Approx(std::pow(2.0, -0.4)).epsilon(1e-14));
    const double xout[2] = {o.axis_support_radius(2.0) * 1.001, 0.0};
    CHECK(o.value(xout, 2.0) == 0.0);
    const double xin[2] = {o.axis_support_radius(2.0) * 0.99, 0.0};
    CHECK(o.value(xin, 2.0) > 0.0);

    // anisotropy in the l^q sense: the same radius works on either axis
    const double xaxis1[2] = {0.0, o.axis_support_radius(2.0) * 1.001};
    CHECK(o.value(xaxis1, 2.0) == 0.0);

    // sampled mass is conserved across times
    const GridSpec g = make_grid(2, {10.0, 10.0}, {256, 256});
    const auto u1 = sample_field(g, [&](const double* x) { return o.value(x, 1.0); });
    const auto u3 = sample_field(g, [&](const double* x) { return o.value(x, 3.0); });
    const double m1 = norm_l1(g, u1), m3 = norm_l1(g, u3);
    CHECK(m1 > 0.0);
    CHECK(std::abs(m3 - m1) <= 1e-3 * m1);
}

TEST_CASE("sampled profile satisfies the equation away from the kinks") {
    const BarenblattOracle o = make_barenblatt(2, 3.0, 1.0, 0.0);
    std::vector<double> res;
    for (std::int64_t n : {64, 128, 256}) {
        const GridSpec g = make_grid(2, {6.0, 6.0}, {n, n});
        const ResidualReport r = barenblatt_residual(o, g, 1.0);
        CHECK(r.cells > 0);
        CHECK(r.max_residual > 0.0);
        res.push_back(r.max_residual);
    }
    CHECK(res[1] < res[0]);
    CHECK(res[2] < res[1]);
    CHECK(res[2] <= 0.4 * res[0]);  // near-quadratic decay over two refinements

    const GridSpec g3 = make_grid(3, {6.0, 6.0, 6.0}, {8, 8, 8});
    CHECK_THROWS_AS(barenblatt_residual(o, g3, 1.0), std::invalid_argument);
}

TEST_CASE("field sampling hits every cell center") {
    const GridSpec g = make_grid(2, {1.0, 2.0}, {8, 10});
    const auto uc = sample_field(g, [](const double*) { return 4.25; });
    for (double x : uc) CHECK(x == 4.25);

    const auto ux = sample_field(g, [](const double* x) { return x[0] + 10.0 * x[1]; });
    for (std::int64_t i = 0; i < g.cells[0]; ++i)
        for (std::int64_t j = 0; j < g.cells[1]; ++j)
            CHECK(ux[i * g.stride[0] + j] ==
                  doctest::Approx(g.center(0, i) + 10.0 * g.center(1, j)).epsilon(1e-14));
}
