#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "anisodiff/solver.hpp"

// Flat key = value run configuration. One assignment per line, '#' comments,
// lists comma-separated. Unknown and duplicate keys are rejected;
// serialize_config(parse_config(s)) is a fixed point.

namespace anisodiff {

struct RunConfigFile {
    int dim = 0;
    double alpha = 0.0;
    std::vector<double> p;
    double lambda_struct = 1.0;

    std::vector<double> half_length;
    std::vector<std::int64_t> cells;

    std::string init_kind = "cosine_bump";  // box | cosine_bump | gaussian_truncated
    double amplitude = 1.0;
    std::vector<double> center;             // defaults to the origin
    std::vector<double> radii;

    double cfl = 0.4;
    double t_end = 0.0;
    double eps_grad = 0.0;
    std::int64_t record_every = 10;
    double dt_min = 1e-12;
    double support_threshold = 0.0;
    std::uint64_t seed = 0;

    std::vector<double> snapshot_times;
    std::string csv_path;
    std::string snapshot_dir;
    std::string summary_path;
};

RunConfigFile parse_config(const std::string& text);
RunConfigFile load_config(const std::string& path);
std::string serialize_config(const RunConfigFile& c);

// Validates through make_anisotropy / make_grid and assembles the run setup.
SolverConfig build_solver_config(const RunConfigFile& c);

} // namespace anisodiff
