#include "anisodiff/energy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "anisodiff/kernels.hpp"
#include "anisodiff/snapshot.hpp"

namespace anisodiff {

SnapshotSeries load_snapshots(const std::string& dir) {
    std::ifstream f(dir + "/index.json");
    if (!f) throw std::runtime_error("cannot open " + dir + "/index.json");
    nlohmann::json j;
    f >> j;
    SnapshotSeries s;
    const int dim = j.at("dim").get<int>();
    s.aniso = make_anisotropy(dim, j.at("alpha").get<double>(),
                              j.at("p").get<std::vector<double>>());
    const auto files = j.at("files").get<std::vector<std::string>>();
    s.times = j.at("times").get<std::vector<double>>();
    if (files.size() != s.times.size())
        throw std::runtime_error("snapshot index: times/files length mismatch");
    for (const auto& name : files) {
        auto [spec, field] = read_gfb(dir + "/" + name);
        if (s.u.empty()) s.grid = spec;
        else if (spec.total != s.grid.total)
            throw std::runtime_error("snapshot grids differ within " + dir);
        s.u.push_back(std::move(field));
    }
    if (s.u.empty()) throw std::runtime_error("snapshot series in " + dir + " is empty");
    return s;
}

namespace {

// C^2 quintic ramp: q(0) = 0, q(1) = 1, q' = q'' = 0 at both ends.
double smoothstep(double y) { return y * y * y * (10.0 + y * (-15.0 + 6.0 * y)); }
double smoothstep_prime(double y) {
    const double w = y * (1.0 - y);
    return 30.0 * w * w;
}

// Per-axis cutoff profile: 1 on the inner fraction of [c - w, c + w],
// quintic decay to 0 at the edge.
struct AxisCutoff {
    double c, w, inner;
    double value(double x) const {
        const double xi = std::abs(x - c) / w;
        if (xi >= 1.0) return 0.0;
        if (xi <= inner) return 1.0;
        return smoothstep((1.0 - xi) / (1.0 - inner));
    }
    double deriv(double x) const {
        const double xi = std::abs(x - c) / w;
        if (xi >= 1.0 || xi <= inner) return 0.0;
        const double y = (1.0 - xi) / (1.0 - inner);
        const double sgn = x >= c ? 1.0 : -1.0;
        return smoothstep_prime(y) * (-sgn / (w * (1.0 - inner)));
    }
};

struct TimeCutoff {
    double tau1, ramp_len;
    double value(double t) const {
        if (ramp_len <= 0.0) return t >= tau1 ? 1.0 : 0.0;
        const double y = (t - tau1) / ramp_len;
        if (y <= 0.0) return 0.0;
        if (y >= 1.0) return 1.0;
        return smoothstep(y);
    }
    double deriv(double t) const {
        if (ramp_len <= 0.0) return 0.0;
        const double y = (t - tau1) / ramp_len;
        if (y <= 0.0 || y >= 1.0) return 0.0;
        return smoothstep_prime(y) / ramp_len;
    }
};

// Geometry shared by the energy-type checks: the selected index box, the
// per-cell spatial cutoff eta = prod_s eta_s^{p_s}, and the cutoff gradient
// weights |d_j eta^{1/p_j}|^{p_j} = |eta_j'|^{p_j} prod_{s != j} eta_s^{p_s}.
struct ProbeGeometry {
    const GridSpec& grid;
    CylinderSelection sel;
    std::vector<std::int64_t> bdims;      // box dimensions
    std::int64_t btotal = 1;
    std::vector<double> eta;              // per box cell
    std::vector<std::vector<double>> cut; // per axis: |d_j eta^{1/p_j}|^{p_j}
    std::vector<int> time_idx;            // snapshots inside [tau1, tau2]

    ProbeGeometry(const SnapshotSeries& s, const EnergyProbe& probe)
        : grid(s.grid), sel(restrict_to_cylinder(s.grid, s.aniso, probe.center, probe.r)) {
        const int d = grid.dim;
        if (!(probe.eta_inner > 0.0) || !(probe.eta_inner < 1.0))
            throw std::invalid_argument("energy probe: eta_inner must lie in (0,1)");
        if (!(probe.tau2 > probe.tau1))
            throw std::invalid_argument("energy probe: needs tau2 > tau1");

        bdims.resize(d);
        for (int i = 0; i < d; ++i) {
            bdims[i] = sel.hi[i] - sel.lo[i];
            btotal *= bdims[i];
        }

        std::vector<AxisCutoff> ax(d);
        for (int i = 0; i < d; ++i)
            ax[i] = AxisCutoff{probe.center[i], sel.halfwidth[i], probe.eta_inner};

        // per-axis tables of eta_s^{p_s} and eta_s' at the box cell centers
        std::vector<std::vector<double>> es(d), des(d);
        for (int i = 0; i < d; ++i) {
            const double p = s.aniso.p_axis(i);
            es[i].resize(bdims[i]);
            des[i].resize(bdims[i]);
            for (std::int64_t j = 0; j < bdims[i]; ++j) {
                const double x = grid.center(i, sel.lo[i] + j);
                es[i][j] = std::pow(ax[i].value(x), p);
                des[i][j] = ax[i].deriv(x);
            }
        }

        eta.assign(btotal, 1.0);
        cut.assign(d, std::vector<double>(btotal, 1.0));
        std::vector<std::int64_t> c(d, 0);
        for (std::int64_t k = 0; k < btotal; ++k) {
            double prod = 1.0;
            for (int i = 0; i < d; ++i) prod *= es[i][c[i]];
            eta[k] = prod;
            for (int j = 0; j < d; ++j) {
                const double pj = s.aniso.p_axis(j);
                double w = std::pow(std::abs(des[j][c[j]]), pj);
                for (int i = 0; i < d; ++i)
                    if (i != j) w *= es[i][c[i]];
                cut[j][k] = w;
            }
            for (int i = d - 1; i >= 0; --i) {
                if (++c[i] < bdims[i]) break;
                c[i] = 0;
            }
        }

        for (size_t m = 0; m < s.times.size(); ++m)
            if (s.times[m] >= probe.tau1 && s.times[m] <= probe.tau2)
                time_idx.push_back(static_cast<int>(m));
        if (time_idx.size() < 8)
            throw std::invalid_argument("energy probe: needs >= 8 snapshots in the window, got " +
                                        std::to_string(time_idx.size()));
    }

    std::int64_t grid_index(std::int64_t box_k) const {
        std::int64_t g = 0, rem = box_k;
        for (int i = 0; i < grid.dim; ++i) {
            const std::int64_t ci = rem / box_stride(i);
            rem %= box_stride(i);
            g += (sel.lo[i] + ci) * grid.stride[i];
        }
        return g;
    }

    std::int64_t box_stride(int axis) const {
        std::int64_t st = 1;
        for (int i = grid.dim - 1; i > axis; --i) st *= bdims[i];
        return st;
    }

    // trapezoid weights over the selected snapshot times
    std::vector<double> time_weights(const std::vector<double>& times) const {
        const size_t m = time_idx.size();
        std::vector<double> w(m, 0.0);
        for (size_t i = 0; i + 1 < m; ++i) {
            const double dt = times[time_idx[i + 1]] - times[time_idx[i]];
            w[i] += 0.5 * dt;
            w[i + 1] += 0.5 * dt;
        }
        return w;
    }
};

// copy the field restricted to the box
void gather_box(const ProbeGeometry& g, const std::vector<double>& field,
                std::vector<double>& out) {
    out.resize(g.btotal);
    for (std::int64_t k = 0; k < g.btotal; ++k) out[k] = field[g.grid_index(k)];
}

double positive_part(double x) { return x > 0.0 ? x : 0.0; }

} // namespace

EnergyReport evaluate_energy(const SnapshotSeries& s, const EnergyProbe& probe) {
    if (!(probe.level > 0.0)) throw std::invalid_argument("energy probe: level must be > 0");
    if (probe.sign != 1 && probe.sign != -1)
        throw std::invalid_argument("energy probe: sign must be +1 or -1");

    const ProbeGeometry geo(s, probe);
    const int d = s.grid.dim;
    const double alpha = s.aniso.alpha;
    const double half = 0.5 * (alpha + 1.0);
    const double k_half = signed_power(probe.level, half);
    const double vol = s.grid.cell_volume;
    const TimeCutoff phi{probe.tau1, probe.phi_ramp * (probe.tau2 - probe.tau1)};
    const std::vector<double> tw = geo.time_weights(s.times);

    EnergyReport rep;
    rep.n_times = static_cast<int>(geo.time_idx.size());

    std::vector<double> ub, trunc, prod;
    for (size_t mi = 0; mi < geo.time_idx.size(); ++mi) {
        const int m = geo.time_idx[mi];
        const double t = s.times[m];
        const double ph = phi.value(t);
        const double dph = positive_part(phi.deriv(t));
        gather_box(geo, s.u[m], ub);

        trunc.resize(geo.btotal);
        prod.resize(geo.btotal);
        double sup_integrand = 0.0, time_integrand = 0.0;
        for (std::int64_t k = 0; k < geo.btotal; ++k) {
            const double w = positive_part(probe.sign * (ub[k] - probe.level));
            trunc[k] = w;
            prod[k] = w * geo.eta[k];
            const double b = positive_part(probe.sign *
                                           (signed_power(ub[k], half) - k_half));
            sup_integrand += b * b * geo.eta[k];
            time_integrand += b * b * geo.eta[k];
        }
        rep.lhs_sup = std::max(rep.lhs_sup, sup_integrand * vol * ph);
        rep.rhs_time += tw[mi] * dph * time_integrand * vol;

        for (int axis = 0; axis < d; ++axis) {
            const double pj = s.aniso.p_axis(axis);
            const double inv_h = 1.0 / s.grid.h[axis];
            const std::int64_t st = geo.box_stride(axis);
            const std::int64_t n = geo.bdims[axis];
            const std::int64_t outer = geo.btotal / (n * st);
            double grad_sum = 0.0, level_sum = 0.0;
            for (std::int64_t o = 0; o < outer; ++o) {
                const std::int64_t base = o * n * st;
                for (std::int64_t c = 0; c < n; ++c) {
                    for (std::int64_t i = 0; i < st; ++i) {
                        const std::int64_t k = base + c * st + i;
                        const double nb = (c == n - 1) ? 0.0 : prod[k + st];
                        const double diff = (nb - prod[k]) * inv_h;
                        grad_sum += std::pow(std::abs(diff), pj);
                        level_sum += std::pow(trunc[k], pj) * geo.cut[axis][k];
                    }
                }
            }
            rep.lhs_gradient += tw[mi] * ph * grad_sum * vol;
            rep.rhs_level += tw[mi] * ph * level_sum * vol;
        }
    }

    const double lhs = rep.lhs_gradient + rep.lhs_sup;
    const double rhs = rep.rhs_level + rep.rhs_time;
    rep.vacuous = lhs == 0.0 && rhs == 0.0;
    rep.ratio = rep.vacuous ? 0.0 : lhs / rhs;
    return rep;
}

namespace {

// Cumulative antiderivative table of g on [lo, hi]: per-panel Simpson at the
// nodes, local trapezoid correction inside a panel.
struct Antiderivative {
    double lo = 0.0, step = 0.0;
    std::vector<double> G, gn;
    template <class Fn>
    Antiderivative(double a, double b, int panels, Fn&& g) {
        lo = a;
        step = (b - a) / panels;
        G.resize(panels + 1);
        gn.resize(panels + 1);
        for (int i = 0; i <= panels; ++i) gn[i] = g(a + i * step);
        G[0] = 0.0;
        for (int i = 0; i < panels; ++i) {
            const double mid = g(a + (i + 0.5) * step);
            G[i + 1] = G[i] + step / 6.0 * (gn[i] + 4.0 * mid + gn[i + 1]);
        }
        g_fn = [g](double x) { return g(x); };
    }
    std::function<double(double)> g_fn;
    double eval(double y) const {
        const double yc = std::clamp(y, lo, lo + step * (double)(G.size() - 1));
        const int i = std::min<int>(static_cast<int>((yc - lo) / step),
                                    static_cast<int>(G.size()) - 2);
        const double xi = lo + i * step;
        return G[i] + (yc - xi) * 0.5 * (gn[i] + g_fn(yc));
    }
};

} // namespace

GeneralFormulaReport general_formula_check(const SnapshotSeries& s,
                                           const GeneralFormulaProbe& probe) {
    const EnergyProbe& bp = probe.base;
    const ProbeGeometry geo(s, bp);
    const int d = s.grid.dim;
    const double alpha = s.aniso.alpha;
    const double vol = s.grid.cell_volume;
    const TimeCutoff phi{bp.tau1, bp.phi_ramp * (bp.tau2 - bp.tau1)};
    const std::vector<double> tw = geo.time_weights(s.times);

    double gamma = probe.gamma;
    if (gamma <= 0.0) {
        gamma = 2.0;
        for (int i = 0; i < d; ++i) {
            const double p = s.aniso.p_axis(i);
            gamma = std::max(gamma, std::pow(2.0 * (p - 1.0), p - 1.0));
        }
    }

    const double k = bp.level;
    const double mu = probe.mu, er = probe.eps_reg;
    auto f_of_u = [&](double uu) -> double {
        if (probe.family == TestFamily::linear_truncation) return positive_part(uu - k);
        return std::pow(uu * uu + er * er, 0.5 * (mu - 1.0)) * uu;
    };
    auto fprime_of_u = [&](double uu) -> double {
        if (probe.family == TestFamily::linear_truncation) return uu > k ? 1.0 : 0.0;
        const double q = uu * uu + er * er;
        if (q == 0.0) return 0.0;  // mu >= 1, eps 0: limit value at the origin
        return std::pow(q, 0.5 * (mu - 3.0)) * (mu * uu * uu + er * er);
    };
    auto g_of_v = [&](double vv) { return f_of_u(u_from_v(vv, alpha)); };

    // value range of v across the window, plus the antiderivative base point
    double vmin = 0.0, vmax = 0.0;
    const double base_v =
        probe.family == TestFamily::linear_truncation ? signed_power(k, alpha) : 0.0;
    vmin = vmax = base_v;
    std::vector<double> ub;
    for (int m : geo.time_idx) {
        gather_box(geo, s.u[m], ub);
        for (double uu : ub) {
            const double vv = signed_power(uu, alpha);
            vmin = std::min(vmin, vv);
            vmax = std::max(vmax, vv);
        }
    }
    if (vmax == vmin) vmax = vmin + 1.0;
    const Antiderivative GG(vmin, vmax, 8192, g_of_v);
    const double G_base = GG.eval(base_v);
    auto G_of_v = [&](double vv) { return GG.eval(vv) - G_base; };

    GeneralFormulaReport rep;
    rep.gamma = gamma;
    rep.n_times = static_cast<int>(geo.time_idx.size());

    const double t_first = s.times[geo.time_idx.front()];
    const double t_last = s.times[geo.time_idx.back()];

    std::vector<double> fu(geo.btotal), fpu(geo.btotal);
    for (size_t mi = 0; mi < geo.time_idx.size(); ++mi) {
        const int m = geo.time_idx[mi];
        const double t = s.times[m];
        const double ph = phi.value(t);
        const double dph = phi.deriv(t);
        gather_box(geo, s.u[m], ub);

        double g_term = 0.0;
        for (std::int64_t kk = 0; kk < geo.btotal; ++kk) {
            fu[kk] = f_of_u(ub[kk]);
            fpu[kk] = fprime_of_u(ub[kk]);
            g_term += geo.eta[kk] * G_of_v(signed_power(ub[kk], alpha));
        }
        g_term *= vol;
        if (t == t_first) rep.rhs_initial = ph * g_term;
        if (t == t_last) rep.lhs_boundary = ph * g_term;
        rep.rhs_time += tw[mi] * dph * g_term;

        const std::vector<double>& full = s.u[m];
        for (int axis = 0; axis < d; ++axis) {
            const double pj = s.aniso.p_axis(axis);
            const double inv_h = 1.0 / s.grid.h[axis];
            const std::int64_t gst = s.grid.stride[axis];
            double grad_sum = 0.0, cut_sum = 0.0;
            for (std::int64_t kk = 0; kk < geo.btotal; ++kk) {
                if (fpu[kk] > 0.0) {
                    // gradient of the actual field; neighbors exist because the
                    // cylinder sits strictly inside the domain (or carry eta = 0)
                    const std::int64_t gk = geo.grid_index(kk);
                    double nb = 0.0;
                    const std::int64_t ci = (gk / gst) % s.grid.cells[axis];
                    if (ci + 1 < s.grid.cells[axis]) nb = full[gk + gst];
                    const double diff = (nb - full[gk]) * inv_h;
                    grad_sum += std::pow(std::abs(diff), pj) * fpu[kk] * geo.eta[kk];
                    if (fu[kk] != 0.0)
                        cut_sum += std::pow(std::abs(fu[kk]), pj) *
                                   std::pow(fpu[kk], 1.0 - pj) * geo.cut[axis][kk];
                }
            }
            rep.lhs_gradient += tw[mi] * ph * grad_sum * vol / gamma;
            rep.rhs_cutoff += tw[mi] * ph * cut_sum * vol * gamma;
        }
    }

    rep.lhs = rep.lhs_boundary + rep.lhs_gradient;
    rep.rhs = rep.rhs_cutoff + rep.rhs_initial + rep.rhs_time;
    rep.slack_rel = (rep.rhs - rep.lhs) / std::max(std::abs(rep.rhs), 1e-300);
    return rep;
}

BoundednessReport report_boundedness_bound(const SnapshotSeries& s,
                                           const std::vector<double>& x0, double t0, double r,
                                           double sigma) {
    if (!(sigma > 0.0) || !(sigma < 1.0))
        throw std::invalid_argument("boundedness: sigma must lie in (0,1)");
    const DerivedExponents e = derive(s.aniso);
    const double N = s.aniso.dim;
    const double P = e.P;

    BoundednessReport rep;
    rep.m_threshold = e.m_threshold;
    const double gap = e.p_bar_sigma(s.aniso.alpha + 1.0) - P;
    if (!(gap > 0.0)) {
        rep.refused = true;  // integrability exponent P sits outside the window
        return rep;
    }
    rep.bound_exponent = e.p_bar / (N * gap);
    rep.shrink_factor =
        std::pow(1.0 - sigma, -(s.aniso.p_max() / e.p_bar) * (N + e.p_bar));

    const CylinderSelection big = restrict_to_cylinder(s.grid, s.aniso, x0, r);
    const CylinderSelection small = restrict_to_cylinder(s.grid, s.aniso, x0, sigma * r);

    // mean of u_+^P over the full cylinder, measure |K_r| * r
    std::vector<int> tN;
    for (size_t m = 0; m < s.times.size(); ++m)
        if (s.times[m] >= t0 - r && s.times[m] <= t0) tN.push_back(static_cast<int>(m));
    if (tN.size() < 4)
        throw std::invalid_argument("boundedness: needs >= 4 snapshots in the time depth");

    double integral = 0.0;
    std::vector<std::int64_t> c(s.grid.dim, 0);
    for (size_t mi = 0; mi < tN.size(); ++mi) {
        double w = 0.0;
        if (mi + 1 < tN.size()) w += 0.5 * (s.times[tN[mi + 1]] - s.times[tN[mi]]);
        if (mi > 0) w += 0.5 * (s.times[tN[mi]] - s.times[tN[mi - 1]]);
        const std::vector<double>& field = s.u[tN[mi]];
        double slab = 0.0;
        // iterate the index box
        std::fill(c.begin(), c.end(), 0);
        while (true) {
            std::int64_t g = 0;
            for (int i = 0; i < s.grid.dim; ++i) g += (big.lo[i] + c[i]) * s.grid.stride[i];
            const double up = std::max(field[g], 0.0);
            slab += std::pow(up, P);
            int i = s.grid.dim - 1;
            for (; i >= 0; --i) {
                if (++c[i] < big.hi[i] - big.lo[i]) break;
                c[i] = 0;
            }
            if (i < 0) break;
        }
        integral += w * slab * s.grid.cell_volume;
    }
    double measure = r;
    for (int i = 0; i < s.grid.dim; ++i) measure *= 2.0 * big.halfwidth[i];
    rep.mean_integral = integral / measure;

    for (size_t m = 0; m < s.times.size(); ++m) {
        if (s.times[m] < t0 - sigma * r || s.times[m] > t0) continue;
        const std::vector<double>& field = s.u[m];
        std::fill(c.begin(), c.end(), 0);
        while (true) {
            std::int64_t g = 0;
            for (int i = 0; i < s.grid.dim; ++i) g += (small.lo[i] + c[i]) * s.grid.stride[i];
            rep.sup_measured = std::max(rep.sup_measured, std::max(field[g], 0.0));
            int i = s.grid.dim - 1;
            for (; i >= 0; --i) {
                if (++c[i] < small.hi[i] - small.lo[i]) break;
                c[i] = 0;
            }
            if (i < 0) break;
        }
    }

    if (rep.sup_measured <= 1.0) {
        rep.trivial = true;
    } else {
        rep.implied_c = rep.sup_measured /
                        std::pow(rep.shrink_factor * rep.mean_integral, rep.bound_exponent);
    }
    return rep;
}

} // namespace anisodiff
