#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "anisodiff/grid.hpp"
#include "anisodiff/params.hpp"

// Explicit conservative finite-difference solver for
//
//   d_t v = sum_i d_i(|d_i u|^{p_i - 2} d_i u),   u = |v|^{1/alpha - 1} v,
//
// evolving the conserved variable v = |u|^{alpha-1} u on a centered box with
// homogeneous Dirichlet truncation. Face fluxes use forward differences of u
// with zero extension; the divergence is the backward difference of the face
// fluxes, so the total of v * cell_volume is conserved to rounding while the
// support stays away from the boundary collar.
//
// The adaptive step is cfl / max_cells sum_i 2 a_i / h_i^2 with the linearized
// diffusivity a_i = (p_i - 1)(diff_i^2 + eps^2)^{(p_i-2)/2} du/dv, the explicit
// stability bound of the frozen-coefficient scheme (cfl = 1 is the classical
// heat limit).

namespace anisodiff {

enum class InitKind { box, cosine_bump, gaussian_truncated };

struct InitialDatum {
    InitKind kind = InitKind::cosine_bump;
    double amplitude = 1.0;         // peak of u0
    std::vector<double> center;
    std::vector<double> radii;      // box/cosine: support half-extent; gaussian: sigma
};

struct SolverConfig {
    Anisotropy aniso;
    GridSpec grid;
    InitialDatum init;
    double cfl = 0.4;
    double t_end = 0.0;
    double eps_grad = 0.0;          // gradient regularization; required > 0 when min p_i < 2
    double eps_v = 1e-300;          // guard in du/dv near v = 0
    std::int64_t record_every = 10; // accepted steps between records
    double dt_min = 1e-12;
    double support_threshold = 0.0; // <= 0 selects 1e-10 * ||u0||_inf
    std::vector<double> snapshot_times;
    std::string csv_path;           // empty: no CSV
    std::string snapshot_dir;       // empty: no snapshots
    std::string summary_path;       // empty: no summary JSON
    std::uint64_t seed = 0;         // recorded in outputs; the scheme itself is deterministic
};

struct TimeSeriesRecord {
    std::int64_t step = 0;
    double t = 0.0;
    double dt = 0.0;                // dt of the last accepted step (0 at step 0)
    double mass_v = 0.0;            // sum v * cell_volume
    double l1_u = 0.0;
    double lalpha1_u = 0.0;         // L^{alpha+1} norm of u
    double linf_u = 0.0;
    std::vector<double> supp;       // origin-centered support half-widths of u
};

enum class AbortReason { none, stiffness, domain_exhausted, non_finite };

int abort_exit_code(AbortReason r);     // none 0, stiffness 2, domain 3, non-finite 4
const char* abort_name(AbortReason r);

struct RunResult {
    std::vector<TimeSeriesRecord> records;
    AbortReason abort = AbortReason::none;
    std::string abort_detail;
    std::int64_t steps = 0;
    double t_final = 0.0;
    std::vector<double> v_final;
    std::vector<std::pair<double, std::string>> snapshots;  // (time, path); path empty when unwritten
    double support_threshold_used = 0.0;
    double u0_l1 = 0.0;
    double u0_lalpha1 = 0.0;
    double u0_linf = 0.0;
};

// Called at every record with the current u field; lets callers measure extra
// quantities (second support thresholds, in-memory snapshots) without touching
// the fixed CSV schema.
using RecordObserver =
    std::function<void(const TimeSeriesRecord&, const GridSpec&, const std::vector<double>&)>;
// Called whenever a snapshot is emitted (also when snapshot_dir is empty).
using SnapshotObserver =
    std::function<void(double, const GridSpec&, const std::vector<double>&)>;

std::vector<double> build_initial_u(const GridSpec& spec, const InitialDatum& init);

// JSON text written to summary_path; also usable on an in-memory result.
std::string run_summary_json(const RunResult& res);

RunResult run(const SolverConfig& cfg, const RecordObserver& on_record = {},
              const SnapshotObserver& on_snapshot = {});

// Same runner with a caller-supplied initial profile of u (cfg.init ignored).
RunResult run_with_initial(const SolverConfig& cfg, std::vector<double> u0,
                           const RecordObserver& on_record = {},
                           const SnapshotObserver& on_snapshot = {});

} // namespace anisodiff
