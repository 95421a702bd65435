#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "anisodiff/config.hpp"

using namespace anisodiff;

namespace {

const char* kMinimal =
    "dim = 2\n"
    "alpha = 0.5\n"
    "p = 1.7, 1.9\n"
    "grid.half_length = 1.4, 1.2\n"
    "grid.cells = 32, 24\n"
    "init.radii = 0.25, 0.25\n"
    "solver.t_end = 0.5\n";

} // namespace

TEST_CASE("minimal config and defaults") {
    const RunConfigFile c = parse_config(kMinimal);
    CHECK(c.dim == 2);
    CHECK(c.alpha == 0.5);
    CHECK(c.p == std::vector<double>{1.7, 1.9});
    CHECK(c.half_length == std::vector<double>{1.4, 1.2});
    CHECK(c.cells == std::vector<std::int64_t>{32, 24});
    CHECK(c.radii == std::vector<double>{0.25, 0.25});
    CHECK(c.t_end == 0.5);
    // defaults
    CHECK(c.init_kind == "cosine_bump");
    CHECK(c.amplitude == 1.0);
    CHECK(c.center == std::vector<double>{0.0, 0.0});
    CHECK(c.lambda_struct == 1.0);
    CHECK(c.cfl == 0.4);
    CHECK(c.eps_grad == 0.0);
    CHECK(c.record_every == 10);
    CHECK(c.dt_min == 1e-12);
    CHECK(c.support_threshold == 0.0);
    CHECK(c.seed == 0);
    CHECK(c.snapshot_times.empty());
    CHECK(c.csv_path.empty());
    CHECK(c.snapshot_dir.empty());
    CHECK(c.summary_path.empty());
}

TEST_CASE("comments, blank lines, and whitespace") {
    const std::string text = std::string("# run setup\n\n  dim=2   # inline comment\n") +
                             "alpha =\t0.5\n"
                             "p = 1.7 ,1.9\n"
                             "grid.half_length = 1.4, 1.2\n"
                             "grid.cells = 32, 24\n"
                             "init.radii = 0.25, 0.25\n"
                             "solver.t_end = 0.5\n"
                             "solver.seed = 42\n";
    const RunConfigFile c = parse_config(text);
    CHECK(c.dim == 2);
    CHECK(c.p == std::vector<double>{1.7, 1.9});
    CHECK(c.seed == 42);
}

TEST_CASE("parse rejections") {
    CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "dim = 3\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "mystery = 1\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "just a line\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "solver.cfl = fast\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "grid.cells2 = 1\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "solver.record_every = 2.5\n"),
                    std::invalid_argument);

    // each required key must be present
    for (const char* drop : {"dim", "alpha", "p = ", "grid.half_length", "grid.cells",
                             "init.radii", "solver.t_end"}) {
        std::string text;
        std::istringstream is(kMinimal);
        std::string line;
        while (std::getline(is, line))
            if (line.rfind(drop, 0) != 0) text += line + "\n";
        CHECK_THROWS_AS(parse_config(text), std::invalid_argument);
    }
}

TEST_CASE("serialize after parse is a fixed point") {
    const std::string full = std::string(kMinimal) +
                             "init.kind = gaussian_truncated\n"
                             "init.amplitude = 2.5\n"
                             "init.center = 0.1, -0.2\n"
                             "lambda = 1.5\n"
                             "solver.cfl = 0.3\n"
                             "solver.eps_grad = 1e-8\n"
                             "solver.seed = 7\n"
                             "snapshot.times = 0.1, 0.2\n"
                             "output.csv = out/records.csv\n"
                             "output.snapshots = out/snaps\n"
                             "output.summary = out/summary.json\n";
    const std::string s1 = serialize_config(parse_config(full));
    const std::string s2 = serialize_config(parse_config(s1));
    CHECK(s1 == s2);

    const std::string m1 = serialize_config(parse_config(kMinimal));
    CHECK(m1 == serialize_config(parse_config(m1)));
}

TEST_CASE("file round trip") {
    namespace fs = std::filesystem;
    const std::string path = fs::temp_directory_path() / "anisodiff_cfg_test.cfg";
    {
        std::ofstream f(path);
        f << kMinimal;
    }
    const RunConfigFile c = load_config(path);
    CHECK(c.dim == 2);
    CHECK(c.cells == std::vector<std::int64_t>{32, 24});
    std::remove(path.c_str());

    CHECK_THROWS_AS(load_config("/nonexistent/run.cfg"), std::runtime_error);
}

TEST_CASE("solver config assembly") {
    RunConfigFile c = parse_config(std::string(kMinimal) +
                                   "init.kind = box\n"
                                   "init.amplitude = 2.0\n"
                                   "solver.eps_grad = 1e-8\n"
                                   "solver.cfl = 0.25\n"
                                   "solver.record_every = 4\n"
                                   "solver.support_threshold = 1e-7\n"
                                   "snapshot.times = 0.1\n"
                                   "output.csv = records.csv\n");
    const SolverConfig cfg = build_solver_config(c);
    CHECK(cfg.aniso.dim == 2);
    CHECK(cfg.aniso.alpha == 0.5);
    CHECK(cfg.aniso.p == std::vector<double>{1.7, 1.9});
    CHECK(cfg.grid.cells == std::vector<std::int64_t>{32, 24});
    CHECK(cfg.grid.half_length == std::vector<double>{1.4, 1.2});
    CHECK(cfg.init.kind == InitKind::box);
    CHECK(cfg.init.amplitude == 2.0);
    CHECK(cfg.init.center == std::vector<double>{0.0, 0.0});
    CHECK(cfg.init.radii == std::vector<double>{0.25, 0.25});
    CHECK(cfg.cfl == 0.25);
    CHECK(cfg.t_end == 0.5);
    CHECK(cfg.eps_grad == 1e-8);
    CHECK(cfg.record_every == 4);
    CHECK(cfg.support_threshold == 1e-7);
    CHECK(cfg.snapshot_times == std::vector<double>{0.1});
    CHECK(cfg.csv_path == "records.csv");

    c.init_kind = "blob";
    CHECK_THROWS_AS(build_solver_config(c), std::invalid_argument);
    c.init_kind = "cosine_bump";
    c.p = {0.9, 1.9};  // p must exceed 1
    CHECK_THROWS_AS(build_solver_config(c), std::invalid_argument);
    c.p = {1.7, 1.9};
    c.cells = {32, 25};  // odd cell count rejected by the grid
    CHECK_THROWS_AS(build_solver_config(c), std::invalid_argument);
}
