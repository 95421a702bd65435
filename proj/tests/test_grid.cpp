#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "anisodiff/grid.hpp"
#include "anisodiff/snapshot.hpp"

using namespace anisodiff;

TEST_CASE("make_grid validation and derived geometry") {
    CHECK_THROWS_AS(make_grid(2, {1.0, 1.0}, {9, 8}), std::invalid_argument);   // odd
    CHECK_THROWS_AS(make_grid(2, {1.0, 1.0}, {6, 8}), std::invalid_argument);   // < 8
    CHECK_THROWS_AS(make_grid(2, {0.0, 1.0}, {8, 8}), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(2, {1.0}, {8, 8}), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(3, {1.0, 1.0, 1.0}, {512, 512, 512}),
                    std::invalid_argument);  // memory cap

    const GridSpec g = make_grid(2, {1.6, 1.2}, {16, 12});
    CHECK(g.h[0] == 0.2);
    CHECK(g.h[1] == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(g.total == 192);
    CHECK(g.stride[0] == 12);
    CHECK(g.stride[1] == 1);
    CHECK(g.cell_volume == doctest::Approx(0.04).epsilon(1e-15));
    CHECK(g.center(0, 0) == doctest::Approx(-1.5).epsilon(1e-15));
    CHECK(g.center(0, 15) == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("diff_forward on linear and constant fields") {
    const GridSpec g = make_grid(1, {1.0}, {10});
    std::vector<double> lin(10), cst(10, 4.0), out;
    for (int j = 0; j < 10; ++j) lin[j] = 3.0 * g.center(0, j);

    diff_forward(g, lin, 0, out);
    for (int j = 0; j + 1 < 10; ++j) CHECK(out[j] == doctest::Approx(3.0).epsilon(1e-13));
    // zero extension beyond the boundary
    CHECK(out[9] == doctest::Approx(-lin[9] / g.h[0]).epsilon(1e-13));

    diff_forward(g, cst, 0, out);
    for (int j = 0; j + 1 < 10; ++j) CHECK(out[j] == 0.0);
    CHECK(out[9] == doctest::Approx(-4.0 / g.h[0]).epsilon(1e-13));
}

TEST_CASE("forward then backward difference is the 3-point second difference") {
    const GridSpec g = make_grid(1, {1.0}, {16});
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<double> f(16), fd;
    for (double& x : f) x = d(rng);

    diff_forward(g, f, 0, fd);
    const double h = g.h[0];
    for (int j = 1; j + 1 < 16; ++j) {
        const double lap = (fd[j] - fd[j - 1]) / h;
        const double ref = (f[j + 1] - 2.0 * f[j] + f[j - 1]) / (h * h);
        CHECK(lap == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("pairwise sum matches extended-precision accumulation") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<double> x(100001);
    for (double& v : x) v = d(rng);

    long double acc = 0.0L;
    for (double v : x) acc += v;
    const double s1 = pairwise_sum(x.data(), static_cast<std::int64_t>(x.size()));
    CHECK(s1 == doctest::Approx(static_cast<double>(acc)).epsilon(1e-13));
    // bitwise repeatable
    CHECK(pairwise_sum(x.data(), static_cast<std::int64_t>(x.size())) == s1);
}

TEST_CASE("norms") {
    const GridSpec g = make_grid(2, {1.0, 1.0}, {8, 8});
    std::vector<double> u(64, 0.0);
    u[9] = 1.0;
    u[10] = 1.0;
    u[17] = 1.0;
    CHECK(norm_l1(g, u) == 3.0 * g.cell_volume);
    CHECK(norm_linf(u) == 1.0);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    std::vector<double> w(64);
    for (double& v : w) v = d(rng);
    std::vector<double> w5 = w;
    for (double& v : w5) v *= -5.0;
    CHECK(norm_l1(g, w5) == doctest::Approx(5.0 * norm_l1(g, w)).epsilon(1e-14));
    CHECK(norm_lq(g, w5, 2.0) == doctest::Approx(5.0 * norm_lq(g, w, 2.0)).epsilon(1e-14));

    int lit = 0;
    for (double v : w)
        if (v != 0.0) ++lit;
    CHECK(norm_l1(g, w) <= norm_linf(w) * lit * g.cell_volume * (1.0 + 1e-14));
}

TEST_CASE("support_halfwidth cell-center convention") {
    const GridSpec g = make_grid(2, {1.0, 1.0}, {8, 8});
    std::vector<double> u(64, 0.0);
    CHECK(support_halfwidth(g, u, 0.0) == std::vector<double>{0.0, 0.0});

    // the most central cell of an even grid sits at (h/2, h/2); padded by the
    // half cell its support half-width is a full h on both axes
    u[4 * 8 + 4] = 1.0;
    const auto r = support_halfwidth(g, u, 0.5);
    CHECK(r[0] == doctest::Approx(g.h[0]).epsilon(1e-15));
    CHECK(r[1] == doctest::Approx(g.h[1]).epsilon(1e-15));

    // off-center single cell: |center| + h/2 on each axis
    std::fill(u.begin(), u.end(), 0.0);
    u[1 * 8 + 6] = 0.7;
    const auto r2 = support_halfwidth(g, u, 0.0);
    CHECK(r2[0] == doctest::Approx(std::abs(g.center(0, 1)) + 0.5 * g.h[0]).epsilon(1e-15));
    CHECK(r2[1] == doctest::Approx(std::abs(g.center(1, 6)) + 0.5 * g.h[1]).epsilon(1e-15));
}

TEST_CASE("support_halfwidth recovers a sampled box indicator within h") {
    const GridSpec g = make_grid(2, {1.0, 1.0}, {32, 32});
    const double a = 0.4;
    std::vector<double> u(g.total, 0.0);
    for (int i = 0; i < 32; ++i)
        for (int j = 0; j < 32; ++j)
            if (std::abs(g.center(0, i)) <= a && std::abs(g.center(1, j)) <= a)
                u[i * 32 + j] = 1.0;
    const auto r = support_halfwidth(g, u, 0.0);
    for (int axis = 0; axis < 2; ++axis) {
        CHECK(r[axis] >= a - g.h[axis]);
        CHECK(r[axis] <= a + g.h[axis]);
    }
}

TEST_CASE("restrict_to_cylinder geometry and rejection") {
    const GridSpec g = make_grid(2, {1.0, 1.0}, {64, 64});
    const Anisotropy a = make_anisotropy(2, 0.5, {2.0, 4.0});

    const CylinderSelection sel = restrict_to_cylinder(g, a, {0.0, 0.0}, 0.25);
    // axis half-widths r^{1/p}: 0.5 and 0.25^{1/4} ~ 0.7071
    CHECK(sel.halfwidth[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(sel.halfwidth[1] == doctest::Approx(std::pow(0.25, 0.25)).epsilon(1e-14));
    for (int i = 0; i < 2; ++i) {
        const double count = static_cast<double>(sel.hi[i] - sel.lo[i]);
        CHECK(count * g.h[i] == doctest::Approx(2.0 * sel.halfwidth[i]).epsilon(0.1));
    }

    CHECK_THROWS_AS(restrict_to_cylinder(g, a, {0.0, 0.0}, 1e-9), std::invalid_argument);
    CHECK_THROWS_AS(restrict_to_cylinder(g, a, {0.9, 0.0}, 0.25), std::invalid_argument);
    CHECK_THROWS_AS(restrict_to_cylinder(g, a, {0.0, 0.0}, 4.0), std::invalid_argument);
}

TEST_CASE("discrete divergence of a compact face flux sums to zero") {
    const GridSpec g = make_grid(2, {1.0, 1.0}, {24, 24});
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> d(-1.0, 1.0);

    // random face fluxes, zero on a 2-cell collar
    std::vector<std::vector<double>> F(2, std::vector<double>(g.total, 0.0));
    for (int axis = 0; axis < 2; ++axis)
        for (int i = 2; i < 22; ++i)
            for (int j = 2; j < 22; ++j) F[axis][i * 24 + j] = d(rng);

    double total = 0.0;
    double scale = 0.0;
    for (int i = 1; i < 24; ++i) {
        for (int j = 1; j < 24; ++j) {
            const int k = i * 24 + j;
            const double div = (F[0][k] - F[0][k - 24]) / g.h[0] +
                               (F[1][k] - F[1][k - 1]) / g.h[1];
            total += div * g.cell_volume;
            scale += std::abs(div) * g.cell_volume;
        }
    }
    CHECK(std::abs(total) <= 1e-13 * scale);
}

TEST_CASE("GFB snapshot round trip is exact") {
    const GridSpec g = make_grid(3, {1.0, 0.75, 0.5}, {8, 10, 12});
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<double> u(g.total);
    for (double& v : u) v = d(rng);

    const std::string path = "test_roundtrip.gfb";
    write_gfb(path, g, u);
    const auto [g2, u2] = read_gfb(path);
    CHECK(g2.dim == 3);
    CHECK(g2.cells == g.cells);
    CHECK(g2.half_length == g.half_length);
    CHECK(u2 == u);  // bitwise

    // truncated payload must be rejected
    FILE* f = std::fopen(path.c_str(), "rb+");
    REQUIRE(f != nullptr);
    std::fseek(f, 0, SEEK_END);
    const long n = std::ftell(f);
    REQUIRE(std::fclose(f) == 0);
    REQUIRE(truncate(path.c_str(), n - 16) == 0);
    CHECK_THROWS_AS(read_gfb(path), std::runtime_error);
    std::remove(path.c_str());
}
