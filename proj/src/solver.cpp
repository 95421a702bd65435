#include "anisodiff/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "anisodiff/format.hpp"
#include "anisodiff/kernels.hpp"
#include "anisodiff/snapshot.hpp"

namespace anisodiff {

int abort_exit_code(AbortReason r) {
    switch (r) {
        case AbortReason::none: return 0;
        case AbortReason::stiffness: return 2;
        case AbortReason::domain_exhausted: return 3;
        case AbortReason::non_finite: return 4;
    }
    return 1;
}

const char* abort_name(AbortReason r) {
    switch (r) {
        case AbortReason::none: return "none";
        case AbortReason::stiffness: return "stiffness";
        case AbortReason::domain_exhausted: return "domain_exhausted";
        case AbortReason::non_finite: return "non_finite";
    }
    return "unknown";
}

namespace {

constexpr double kGaussianCutSigma = 7.0;  // elliptical truncation radius of the gaussian datum

double datum_extent(const InitialDatum& init, int axis) {
    return init.kind == InitKind::gaussian_truncated ? kGaussianCutSigma * init.radii[axis]
                                                     : init.radii[axis];
}

void validate_initial(const GridSpec& spec, const InitialDatum& init) {
    if (static_cast<int>(init.center.size()) != spec.dim ||
        static_cast<int>(init.radii.size()) != spec.dim)
        throw std::invalid_argument("initial datum: center and radii must have dim entries");
    if (!std::isfinite(init.amplitude) || init.amplitude == 0.0)
        throw std::invalid_argument("initial datum: amplitude must be finite and nonzero");
    for (int i = 0; i < spec.dim; ++i) {
        if (!(init.radii[i] > 0.0))
            throw std::invalid_argument("initial datum: radii must be positive");
        const double extent = std::abs(init.center[i]) + datum_extent(init, i);
        if (extent + 4.0 * spec.h[i] > spec.half_length[i])
            throw std::invalid_argument(
                "initial datum: support needs a >= 4-cell collar on axis " + std::to_string(i));
    }
}

class CsvWriter {
  public:
    CsvWriter(const std::string& path, int dim) {
        if (path.empty()) return;
        std::filesystem::path p(path);
        if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
        f_.open(path, std::ios::trunc);
        if (!f_) throw std::runtime_error("cannot open CSV path " + path);
        f_ << "step,t,dt,mass_v,l1_u,lalpha1_u,linf_u";
        for (int i = 0; i < dim; ++i) f_ << ",supp_" << (i + 1);
        f_ << "\n";
    }
    void append(const TimeSeriesRecord& r) {
        if (!f_.is_open()) return;
        f_ << r.step << ',' << format_g17(r.t) << ',' << format_g17(r.dt) << ','
           << format_g17(r.mass_v) << ',' << format_g17(r.l1_u) << ','
           << format_g17(r.lalpha1_u) << ',' << format_g17(r.linf_u);
        for (double s : r.supp) f_ << ',' << format_g17(s);
        f_ << '\n';
        f_.flush();
    }

  private:
    std::ofstream f_;
};

} // namespace

std::vector<double> build_initial_u(const GridSpec& spec, const InitialDatum& init) {
    validate_initial(spec, init);
    std::vector<double> u(static_cast<size_t>(spec.total), 0.0);
    std::vector<std::int64_t> coord(spec.dim, 0);
    const double pi = 3.14159265358979323846;
    for (std::int64_t k = 0; k < spec.total; ++k) {
        double val = init.amplitude;
        double rho2 = 0.0;
        bool inside = true;
        for (int i = 0; i < spec.dim && inside; ++i) {
            const double xi = (spec.center(i, coord[i]) - init.center[i]) / init.radii[i];
            switch (init.kind) {
                case InitKind::box:
                    inside = std::abs(xi) <= 1.0;
                    break;
                case InitKind::cosine_bump:
                    inside = std::abs(xi) <= 1.0;
                    if (inside) {
                        const double c = std::cos(0.5 * pi * xi);
                        val *= c * c;
                    }
                    break;
                case InitKind::gaussian_truncated:
                    rho2 += xi * xi;
                    break;
            }
        }
        if (init.kind == InitKind::gaussian_truncated) {
            inside = rho2 <= kGaussianCutSigma * kGaussianCutSigma;
            if (inside) val *= std::exp(-0.5 * rho2);
        }
        u[k] = inside ? val : 0.0;
        for (int i = spec.dim - 1; i >= 0; --i) {
            if (++coord[i] < spec.cells[i]) break;
            coord[i] = 0;
        }
    }
    return u;
}

namespace {

struct Sweeper {
    const GridSpec& spec;
    std::vector<double> p_axis;     // user axis order
    double eps_grad;
    std::vector<double> F;          // face flux scratch
    std::vector<double> acc;        // divergence accumulator
    std::vector<double> wsum;       // sum_i 2 (p_i - 1) w_i / h_i^2

    explicit Sweeper(const GridSpec& s, const Anisotropy& a, double eps)
        : spec(s), eps_grad(eps), F(s.total), acc(s.total, 0.0), wsum(s.total, 0.0) {
        for (int i = 0; i < s.dim; ++i) p_axis.push_back(a.p_axis(i));
    }

    // One axis: face fluxes from forward differences of u with zero extension,
    // divergence by backward difference, stability weights on the fly.
    void axis_pass(const std::vector<double>& u, int axis) {
        const std::int64_t n = spec.cells[axis];
        const std::int64_t st = spec.stride[axis];
        const std::int64_t outer = spec.total / (n * st);
        const double inv_h = 1.0 / spec.h[axis];
        const double p = p_axis[axis];
        const double wfac = 2.0 * (p - 1.0) * inv_h * inv_h;
        for (std::int64_t o = 0; o < outer; ++o) {
            const std::int64_t base = o * n * st;
            for (std::int64_t c = 0; c < n; ++c) {
                const std::int64_t k0 = base + c * st;
                const bool last = (c == n - 1);
                for (std::int64_t i = 0; i < st; ++i) {
                    const std::int64_t k = k0 + i;
                    const double s = (last ? -u[k] : u[k + st] - u[k]) * inv_h;
                    const double w = flux_weight(s, p, eps_grad);
                    const double Fk = w * s;
                    F[k] = Fk;
                    // left face: interior face of the previous cell, or the
                    // boundary-face flux of the zero ghost cell
                    double Fl;
                    if (c > 0) {
                        Fl = F[k - st];
                    } else {
                        const double sl = u[k] * inv_h;
                        Fl = flux_weight(sl, p, eps_grad) * sl;
                    }
                    acc[k] += (Fk - Fl) * inv_h;
                    wsum[k] += wfac * w;
                }
            }
        }
    }
};

} // namespace

std::string run_summary_json(const RunResult& res) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["abort"] = abort_name(res.abort);
    j["abort_detail"] = res.abort_detail;
    j["steps"] = res.steps;
    j["t_final"] = res.t_final;
    j["support_threshold"] = res.support_threshold_used;
    j["u0"] = {{"l1", res.u0_l1}, {"lalpha1", res.u0_lalpha1}, {"linf", res.u0_linf}};
    if (!res.records.empty()) {
        const TimeSeriesRecord& r = res.records.back();
        j["final"] = {{"t", r.t},           {"mass_v", r.mass_v}, {"l1_u", r.l1_u},
                      {"lalpha1_u", r.lalpha1_u}, {"linf_u", r.linf_u}, {"supp", r.supp}};
    }
    nlohmann::json snaps = nlohmann::json::array();
    for (const auto& [ts, path] : res.snapshots) snaps.push_back({{"t", ts}, {"file", path}});
    j["snapshots"] = snaps;
    return j.dump(2) + "\n";
}

RunResult run(const SolverConfig& cfg, const RecordObserver& on_record,
              const SnapshotObserver& on_snapshot) {
    return run_with_initial(cfg, build_initial_u(cfg.grid, cfg.init), on_record, on_snapshot);
}

RunResult run_with_initial(const SolverConfig& cfg, std::vector<double> u0,
                           const RecordObserver& on_record, const SnapshotObserver& on_snapshot) {
    const GridSpec& spec = cfg.grid;
    if (cfg.aniso.dim != spec.dim)
        throw std::invalid_argument("run: anisotropy and grid dimension mismatch");
    if (static_cast<std::int64_t>(u0.size()) != spec.total)
        throw std::invalid_argument("run: initial field size does not match the grid");
    if (!(cfg.cfl > 0.0) || !(cfg.cfl <= 1.0))
        throw std::invalid_argument("run: cfl must lie in (0, 1]");
    if (!(cfg.t_end > 0.0)) throw std::invalid_argument("run: t_end must be positive");
    if (cfg.record_every < 1) throw std::invalid_argument("run: record_every must be >= 1");
    if (!(cfg.dt_min > 0.0)) throw std::invalid_argument("run: dt_min must be positive");
    if (cfg.aniso.p_min() < 2.0 && !(cfg.eps_grad > 0.0))
        throw std::invalid_argument("run: eps_grad must be positive when some p_i < 2");
    if (!(cfg.eps_grad >= 0.0)) throw std::invalid_argument("run: eps_grad must be >= 0");

    const double alpha = cfg.aniso.alpha;
    const double inv_alpha = 1.0 / alpha;

    RunResult res;

    std::vector<double> u = std::move(u0);
    std::vector<double> v(u.size());
    for (size_t k = 0; k < u.size(); ++k) v[k] = signed_power(u[k], alpha);

    res.u0_l1 = norm_l1(spec, u);
    res.u0_lalpha1 = norm_lq(spec, u, alpha + 1.0);
    res.u0_linf = norm_linf(u);
    const double thr =
        cfg.support_threshold > 0.0 ? cfg.support_threshold : 1e-10 * res.u0_linf;
    res.support_threshold_used = thr;

    CsvWriter csv(cfg.csv_path, spec.dim);
    if (!cfg.snapshot_dir.empty()) std::filesystem::create_directories(cfg.snapshot_dir);

    std::vector<double> snap_times = cfg.snapshot_times;
    std::sort(snap_times.begin(), snap_times.end());
    size_t next_snap = 0;

    auto emit_snapshot = [&](double t_snap, const std::vector<double>& field) {
        std::string path;
        if (!cfg.snapshot_dir.empty()) {
            char name[32];
            std::snprintf(name, sizeof(name), "snap_%04zu.gfb", res.snapshots.size());
            path = cfg.snapshot_dir + "/" + name;
            write_gfb(path, spec, field);
        }
        res.snapshots.emplace_back(t_snap, path);
        if (on_snapshot) on_snapshot(t_snap, spec, field);
    };

    auto write_snapshot_index = [&]() {
        if (cfg.snapshot_dir.empty()) return;
        nlohmann::json j;
        j["schema_version"] = 1;
        j["field"] = "u";
        j["dim"] = spec.dim;
        j["alpha"] = alpha;
        std::vector<double> p_user(spec.dim);
        for (int i = 0; i < spec.dim; ++i) p_user[i] = cfg.aniso.p_axis(i);
        j["p"] = p_user;
        j["half_length"] = spec.half_length;
        j["cells"] = spec.cells;
        nlohmann::json files = nlohmann::json::array(), times = nlohmann::json::array();
        for (const auto& [ts, path] : res.snapshots) {
            times.push_back(ts);
            files.push_back(std::filesystem::path(path).filename().string());
        }
        j["times"] = times;
        j["files"] = files;
        std::ofstream f(cfg.snapshot_dir + "/index.json", std::ios::trunc);
        f << j.dump(2) << "\n";
    };

    auto write_summary = [&]() {
        if (cfg.summary_path.empty()) return;
        std::filesystem::path p(cfg.summary_path);
        if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
        std::ofstream f(cfg.summary_path, std::ios::trunc);
        f << run_summary_json(res);
    };

    Sweeper sw(spec, cfg.aniso, cfg.eps_grad);

    double t = 0.0, dt_last = 0.0;
    std::int64_t step = 0;
    std::vector<double> pending_snapshot_times;  // snapshots assigned to the post-step state

    auto finish = [&](AbortReason why, const std::string& detail) {
        res.abort = why;
        res.abort_detail = detail;
        res.steps = step;
        res.t_final = t;
        res.v_final = std::move(v);
        write_snapshot_index();
        write_summary();
        return std::move(res);
    };

    while (true) {
        // u from the conserved variable
        if (alpha == 1.0) {
            u = v;
        } else if (inv_alpha == 2.0) {
            for (size_t k = 0; k < v.size(); ++k) u[k] = std::abs(v[k]) * v[k];
        } else {
            for (size_t k = 0; k < v.size(); ++k) u[k] = signed_power(v[k], inv_alpha);
        }

        for (double ts : pending_snapshot_times) emit_snapshot(ts, u);
        pending_snapshot_times.clear();

        const bool final_time = t >= cfg.t_end;
        if (step % cfg.record_every == 0 || final_time) {
            TimeSeriesRecord rec;
            rec.step = step;
            rec.t = t;
            rec.dt = dt_last;
            rec.mass_v = mass(spec, v);
            rec.l1_u = norm_l1(spec, u);
            rec.lalpha1_u = norm_lq(spec, u, alpha + 1.0);
            rec.linf_u = norm_linf(u);
            rec.supp = support_halfwidth(spec, u, thr);
            res.records.push_back(rec);
            csv.append(rec);
            if (on_record) on_record(rec, spec, u);

            if (!std::isfinite(rec.mass_v) || !std::isfinite(rec.linf_u) ||
                !std::isfinite(rec.l1_u))
                return finish(AbortReason::non_finite,
                              "non-finite field norm at t = " + format_g17(t));
            for (int i = 0; i < spec.dim; ++i)
                if (rec.supp[i] + 2.0 * spec.h[i] >= spec.half_length[i])
                    return finish(AbortReason::domain_exhausted,
                                  "support reached the boundary collar on axis " +
                                      std::to_string(i) + " at t = " + format_g17(t));
        }
        if (final_time) break;

        for (int axis = 0; axis < spec.dim; ++axis) sw.axis_pass(u, axis);

        double dt_den = 0.0;
        if (alpha == 1.0) {
            for (std::int64_t k = 0; k < spec.total; ++k) dt_den = std::max(dt_den, sw.wsum[k]);
        } else {
            for (std::int64_t k = 0; k < spec.total; ++k) {
                const double den = sw.wsum[k] * du_dv(v[k], alpha, cfg.eps_v);
                dt_den = std::max(dt_den, den);
            }
        }

        double dt = dt_den > 0.0 ? cfg.cfl / dt_den : cfg.t_end - t;
        if (!(dt > 0.0) || !std::isfinite(dt_den))
            return finish(AbortReason::non_finite, "non-finite step size at t = " + format_g17(t));
        // stiffness is judged on the CFL step; the end-of-run remainder may be
        // arbitrarily small without meaning the problem got stiff
        if (dt < cfg.dt_min)
            return finish(AbortReason::stiffness, "dt = " + format_g17(dt) + " fell below dt_min at t = " +
                                                      format_g17(t));
        const bool last_step = dt >= cfg.t_end - t;
        if (last_step) dt = cfg.t_end - t;

        const double t_new = last_step ? cfg.t_end : t + dt;
        while (next_snap < snap_times.size() && snap_times[next_snap] <= t_new) {
            const double target = snap_times[next_snap];
            if (target - t <= t_new - target)
                emit_snapshot(t, u);  // current state is nearer
            else
                pending_snapshot_times.push_back(t_new);  // post-step state, written next iteration
            ++next_snap;
        }

        for (std::int64_t k = 0; k < spec.total; ++k) {
            v[k] += dt * sw.acc[k];
            sw.acc[k] = 0.0;
            sw.wsum[k] = 0.0;
        }
        t = t_new;
        dt_last = dt;
        ++step;
    }

    return finish(AbortReason::none, "");
}

} // namespace anisodiff
