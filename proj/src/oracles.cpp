#include "anisodiff/oracles.hpp"

#include <cmath>
#include <stdexcept>

#include "anisodiff/kernels.hpp"

namespace anisodiff {

double HeatOracle::value(const double* x, double t) const {
    const double s = t + t_offset;
    double r2 = 0.0;
    for (int i = 0; i < dim; ++i) r2 += x[i] * x[i];
    const double pi = 3.14159265358979323846;
    return mass * std::pow(4.0 * pi * s, -0.5 * dim) * std::exp(-r2 / (4.0 * s));
}

BarenblattOracle make_barenblatt(int dim, double p, double C, double t_offset) {
    if (!(p > 2.0)) throw std::invalid_argument("barenblatt: needs p > 2");
    if (!(C > 0.0)) throw std::invalid_argument("barenblatt: needs C > 0");
    BarenblattOracle o;
    o.dim = dim;
    o.p = p;
    o.C = C;
    o.t_offset = t_offset;
    o.lambda = dim * (p - 2.0) + p;
    o.q = p / (p - 1.0);
    o.m = (p - 1.0) / (p - 2.0);
    o.k = (p - 2.0) / p * std::pow(o.lambda, -1.0 / (p - 1.0));
    return o;
}

double BarenblattOracle::value(const double* x, double t) const {
    const double s = t + t_offset;
    const double scale = std::pow(s, -1.0 / lambda);
    double arg = C;
    for (int i = 0; i < dim; ++i) arg -= k * std::pow(std::abs(x[i]) * scale, q);
    if (arg <= 0.0) return 0.0;
    return std::pow(s, -static_cast<double>(dim) / lambda) * std::pow(arg, m);
}

double BarenblattOracle::axis_support_radius(double t) const {
    return std::pow(C / k, 1.0 / q) * std::pow(t + t_offset, 1.0 / lambda);
}

std::vector<double> sample_field(const GridSpec& grid,
                                 const std::function<double(const double*)>& f) {
    std::vector<double> out(grid.total);
    std::vector<double> x(grid.dim);
    std::vector<std::int64_t> c(grid.dim, 0);
    for (int i = 0; i < grid.dim; ++i) x[i] = grid.center(i, 0);
    for (std::int64_t k = 0;; ++k) {
        out[k] = f(x.data());
        int i = grid.dim - 1;
        for (; i >= 0; --i) {
            if (++c[i] < grid.cells[i]) {
                x[i] = grid.center(i, c[i]);
                break;
            }
            c[i] = 0;
            x[i] = grid.center(i, 0);
        }
        if (i < 0) break;
    }
    return out;
}

ResidualReport barenblatt_residual(const BarenblattOracle& o, const GridSpec& grid, double t,
                                   double margin_fb, double margin_axis) {
    if (grid.dim != o.dim) throw std::invalid_argument("residual: grid/oracle dimension mismatch");
    const double s = t + o.t_offset;
    const double dt = 1e-5 * s;
    auto at = [&](double tt) {
        return sample_field(grid, [&](const double* x) { return o.value(x, tt); });
    };
    const std::vector<double> um = at(t - dt), u0 = at(t), up = at(t + dt);

    // divergence of the face fluxes of the sampled profile
    std::vector<double> div(grid.total, 0.0), F(grid.total);
    for (int axis = 0; axis < grid.dim; ++axis) {
        diff_forward(grid, u0, axis, F);
        for (std::int64_t k = 0; k < grid.total; ++k) F[k] = flux(F[k], o.p, 0.0);
        const std::int64_t st = grid.stride[axis];
        const std::int64_t n = grid.cells[axis];
        const double inv_h = 1.0 / grid.h[axis];
        const std::int64_t outer = grid.total / (n * st);
        for (std::int64_t b = 0; b < outer; ++b) {
            for (std::int64_t c = 0; c < n; ++c) {
                const std::int64_t base = b * n * st + c * st;
                for (std::int64_t i = 0; i < st; ++i) {
                    const std::int64_t k = base + i;
                    const double Fl = c > 0 ? F[k - st] : flux(u0[k] * inv_h, o.p, 0.0);
                    div[k] += (F[k] - Fl) * inv_h;
                }
            }
        }
    }

    const double scale = std::pow(s, -1.0 / o.lambda);
    ResidualReport rep;
    std::vector<double> x(grid.dim);
    std::vector<std::int64_t> c(grid.dim, 0);
    for (std::int64_t k = 0; k < grid.total; ++k) {
        double arg = o.C;
        bool near_axis = false;
        for (int i = 0; i < grid.dim; ++i) {
            x[i] = grid.center(i, c[i]);
            arg -= o.k * std::pow(std::abs(x[i]) * scale, o.q);
            if (std::abs(x[i]) < margin_axis) near_axis = true;
        }
        if (arg >= margin_fb * o.C && !near_axis) {
            const double dtu = (up[k] - um[k]) / (2.0 * dt);
            rep.max_residual = std::max(rep.max_residual, std::abs(dtu - div[k]));
            ++rep.cells;
        }
        for (int i = grid.dim - 1; i >= 0; --i) {
            if (++c[i] < grid.cells[i]) break;
            c[i] = 0;
        }
    }
    return rep;
}

} // namespace anisodiff
