#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <stdexcept>
#include <vector>

#include "anisodiff/energy.hpp"
#include "anisodiff/grid.hpp"
#include "anisodiff/params.hpp"
#include "anisodiff/solver.hpp"

using namespace anisodiff;

namespace {

// short 2D run whose every record becomes a snapshot
SnapshotSeries make_series() {
    SolverConfig cfg;
    cfg.aniso = make_anisotropy(2, 0.5, {1.7, 1.9});
    cfg.grid = make_grid(2, {1.4, 1.4}, {32, 32});
    cfg.init.kind = InitKind::cosine_bump;
    cfg.init.amplitude = 2.0;
    cfg.init.center = {0.0, 0.0};
    cfg.init.radii = {0.25, 0.25};
    cfg.t_end = 0.2;
    cfg.eps_grad = 1e-8;
    cfg.record_every = 1;

    SnapshotSeries s;
    s.grid = cfg.grid;
    s.aniso = cfg.aniso;
    const RunResult res = run(
        cfg, [&](const TimeSeriesRecord& rec, const GridSpec&, const std::vector<double>& u) {
            s.times.push_back(rec.t);
            s.u.push_back(u);
        });
    REQUIRE(res.abort == AbortReason::none);
    REQUIRE(s.times.size() >= 32);
    return s;
}

double window_max(const SnapshotSeries& s, double tau1, double tau2) {
    double m = 0.0;
    for (size_t i = 0; i < s.times.size(); ++i) {
        if (s.times[i] < tau1 || s.times[i] > tau2) continue;
        for (double x : s.u[i]) m = std::max(m, x);
    }
    return m;
}

EnergyProbe probe_at(double level) {
    EnergyProbe p;
    p.center = {0.0, 0.0};
    p.r = 0.3;
    p.tau1 = 0.05;
    p.tau2 = 0.15;
    p.level = level;
    return p;
}

} // namespace

TEST_CASE("energy estimate on a real run") {
    const SnapshotSeries s = make_series();
    const double M = window_max(s, 0.05, 0.15);
    REQUIRE(M > 0.0);

    SUBCASE("level inside the range of u gives a finite positive ratio") {
        const EnergyReport r = evaluate_energy(s, probe_at(0.5 * M));
        CHECK(!r.vacuous);
        CHECK(r.n_times >= 8);
        CHECK(r.lhs_sup > 0.0);
        CHECK(r.lhs_gradient >= 0.0);
        CHECK(r.rhs_level + r.rhs_time > 0.0);
        CHECK(std::isfinite(r.ratio));
        CHECK(r.ratio > 0.0);
    }

    SUBCASE("level above the range of u is vacuous with exact zeros") {
        const EnergyReport r = evaluate_energy(s, probe_at(2.0 * M));
        CHECK(r.vacuous);
        CHECK(r.lhs_gradient == 0.0);
        CHECK(r.lhs_sup == 0.0);
        CHECK(r.rhs_level == 0.0);
        CHECK(r.rhs_time == 0.0);
        CHECK(r.ratio == 0.0);
    }

    SUBCASE("the sup term decreases along increasing truncation levels") {
        double prev = -1.0;
        for (double f : {0.1, 0.3, 0.5, 0.7}) {
            const EnergyReport r = evaluate_energy(s, probe_at(f * M));
            if (prev >= 0.0) CHECK(r.lhs_sup < prev);
            prev = r.lhs_sup;
        }
    }

    SUBCASE("probe validation") {
        EnergyProbe p = probe_at(0.5 * M);
        p.tau2 = p.tau1;
        CHECK_THROWS_AS(evaluate_energy(s, p), std::invalid_argument);
        p = probe_at(0.0);
        CHECK_THROWS_AS(evaluate_energy(s, p), std::invalid_argument);
        p = probe_at(0.5 * M);
        p.sign = 0;
        CHECK_THROWS_AS(evaluate_energy(s, p), std::invalid_argument);
        p = probe_at(0.5 * M);
        p.eta_inner = 1.0;
        CHECK_THROWS_AS(evaluate_energy(s, p), std::invalid_argument);
        p = probe_at(0.5 * M);
        p.tau2 = p.tau1 + 1e-6;  // window too thin to hold 8 snapshots
        CHECK_THROWS_AS(evaluate_energy(s, p), std::invalid_argument);
    }
}

TEST_CASE("generalized test-function inequality") {
    const SnapshotSeries s = make_series();
    const double M = window_max(s, 0.05, 0.15);

    GeneralFormulaProbe gp;
    gp.base = probe_at(0.3 * M);

    SUBCASE("truncation family holds with small slack") {
        const GeneralFormulaReport r = general_formula_check(s, gp);
        CHECK(r.n_times >= 8);
        CHECK(std::isfinite(r.lhs));
        CHECK(std::isfinite(r.rhs));
        CHECK(r.slack_rel >= -1e-3);
        // auto gamma: max{2, max_i (2(p_i-1))^{p_i-1}} = 2 for p = (1.7, 1.9)
        CHECK(r.gamma == 2.0);
    }

    SUBCASE("vacuous level zeroes every term") {
        gp.base.level = 3.0 * M;
        const GeneralFormulaReport r = general_formula_check(s, gp);
        CHECK(r.lhs == 0.0);
        CHECK(r.lhs_boundary == 0.0);
        CHECK(r.lhs_gradient == 0.0);
        CHECK(r.rhs_cutoff == 0.0);
        CHECK(r.slack_rel == 0.0);
    }

    SUBCASE("explicit gamma is honored") {
        gp.gamma = 5.0;
        const GeneralFormulaReport r = general_formula_check(s, gp);
        CHECK(r.gamma == 5.0);
    }

    SUBCASE("regularized power family") {
        gp.family = TestFamily::regularized_power;
        gp.mu = 1.0;
        gp.eps_reg = 0.0;
        const GeneralFormulaReport r1 = general_formula_check(s, gp);
        CHECK(std::isfinite(r1.lhs));
        CHECK(r1.lhs > 0.0);
        CHECK(r1.slack_rel >= -1e-3);

        gp.mu = 0.5;
        gp.eps_reg = 1e-6;
        const GeneralFormulaReport r2 = general_formula_check(s, gp);
        CHECK(std::isfinite(r2.lhs));
        CHECK(r2.slack_rel >= -1e-3);
    }
}

TEST_CASE("local boundedness report") {
    const SnapshotSeries s = make_series();
    const DerivedExponents e = derive(s.aniso);
    const double t0 = s.times.back();

    const BoundednessReport r = report_boundedness_bound(s, {0.0, 0.0}, t0, 0.1, 0.5);
    CHECK(!r.refused);
    const double gap = e.p_bar_sigma(s.aniso.alpha + 1.0) - e.P;
    CHECK(r.bound_exponent ==
          doctest::Approx(e.p_bar / (s.aniso.dim * gap)).epsilon(1e-12));
    CHECK(r.shrink_factor ==
          doctest::Approx(std::pow(0.5, -(s.aniso.p_max() / e.p_bar) *
                                            (s.aniso.dim + e.p_bar)))
              .epsilon(1e-12));
    CHECK(r.mean_integral > 0.0);
    CHECK(r.sup_measured > 0.0);
    CHECK(r.trivial == (r.sup_measured <= 1.0));
    if (!r.trivial) {
        CHECK(r.implied_c ==
              doctest::Approx(r.sup_measured /
                              std::pow(r.shrink_factor * r.mean_integral, r.bound_exponent))
                  .epsilon(1e-12));
        CHECK(r.implied_c > 0.0);
    }

    CHECK_THROWS_AS(report_boundedness_bound(s, {0.0, 0.0}, t0, 0.1, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(report_boundedness_bound(s, {0.0, 0.0}, t0, 0.1, 1.0),
                    std::invalid_argument);
    // time depth too thin for the quadrature
    CHECK_THROWS_AS(report_boundedness_bound(s, {0.0, 0.0}, t0, 1e-7, 0.5),
                    std::invalid_argument);
}

TEST_CASE("boundedness refusal outside the integrability window") {
    // p_bar(1 + (alpha+1)/N) = 1.05 * (1 + 0.6) = 1.68 < P = 1.8: no exponent
    SnapshotSeries s;
    s.grid = make_grid(3, {1.0, 1.0, 1.0}, {8, 8, 8});
    s.aniso = make_anisotropy(3, 0.8, {1.05, 1.05, 1.05});

    const BoundednessReport r = report_boundedness_bound(s, {0.0, 0.0, 0.0}, 1.0, 0.5, 0.5);
    CHECK(r.refused);
    CHECK(r.bound_exponent == 0.0);
    CHECK(r.m_threshold == doctest::Approx(15.0 / 7.0).epsilon(1e-12));
}

TEST_CASE("snapshot series round trip through disk") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "anisodiff_snap_test";
    fs::remove_all(dir);

    SolverConfig cfg;
    cfg.aniso = make_anisotropy(2, 0.5, {1.7, 1.9});
    cfg.grid = make_grid(2, {1.4, 1.4}, {16, 16});
    cfg.init.kind = InitKind::cosine_bump;
    cfg.init.amplitude = 2.0;
    cfg.init.center = {0.0, 0.0};
    cfg.init.radii = {0.25, 0.25};
    cfg.t_end = 0.04;
    cfg.eps_grad = 1e-8;
    cfg.support_threshold = 1e-6;  // ignore sub-cell tails on this coarse grid
    cfg.snapshot_times = {0.0, 0.012, 0.024, 0.036};
    cfg.snapshot_dir = dir.string();

    std::vector<double> seen_times;
    std::vector<std::vector<double>> seen_fields;
    const RunResult res = run(cfg, {}, [&](double t, const GridSpec&,
                                           const std::vector<double>& u) {
        seen_times.push_back(t);
        seen_fields.push_back(u);
    });
    REQUIRE(res.abort == AbortReason::none);
    REQUIRE(res.snapshots.size() == 4);
    for (const auto& [ts, p] : res.snapshots) CHECK(!p.empty());

    const SnapshotSeries s = load_snapshots(dir.string());
    REQUIRE(s.times.size() == 4);
    CHECK(s.grid.cells == cfg.grid.cells);
    CHECK(s.grid.half_length == cfg.grid.half_length);
    CHECK(s.aniso.alpha == cfg.aniso.alpha);
    CHECK(s.aniso.p == cfg.aniso.p);
    for (size_t i = 0; i < 4; ++i) {
        CHECK(s.times[i] == seen_times[i]);
        CHECK(s.u[i] == seen_fields[i]);  // GFB stores doubles bitwise
    }

    CHECK_THROWS_AS(load_snapshots((dir / "missing").string()), std::runtime_error);
    fs::remove_all(dir);
}
