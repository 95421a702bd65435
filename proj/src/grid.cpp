#include "anisodiff/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace anisodiff {

GridSpec make_grid(int dim, const std::vector<double>& half_length,
                   const std::vector<std::int64_t>& cells) {
    if (dim < 1) throw std::invalid_argument("grid dim must be >= 1");
    if (static_cast<int>(half_length.size()) != dim ||
        static_cast<int>(cells.size()) != dim)
        throw std::invalid_argument("grid: half_length and cells must each have dim entries");

    GridSpec s;
    s.dim = dim;
    s.half_length = half_length;
    s.cells = cells;
    s.h.resize(dim);
    s.total = 1;
    s.cell_volume = 1.0;
    for (int i = 0; i < dim; ++i) {
        if (!(half_length[i] > 0.0) || !std::isfinite(half_length[i]))
            throw std::invalid_argument("grid: half_length must be positive, axis " +
                                        std::to_string(i));
        if (cells[i] < 8 || cells[i] % 2 != 0)
            throw std::invalid_argument("grid: cell count must be even and >= 8, axis " +
                                        std::to_string(i) + " has " +
                                        std::to_string(cells[i]));
        s.h[i] = 2.0 * half_length[i] / static_cast<double>(cells[i]);
        s.cell_volume *= s.h[i];
        if (s.total > kMaxCells / cells[i])
            throw std::invalid_argument("grid: cell count exceeds memory cap");
        s.total *= cells[i];
    }
    s.stride.assign(dim, 1);
    for (int i = dim - 2; i >= 0; --i) s.stride[i] = s.stride[i + 1] * cells[i + 1];
    return s;
}

double pairwise_sum(const double* x, std::int64_t n) {
    if (n <= 32) {
        double acc = 0.0;
        for (std::int64_t i = 0; i < n; ++i) acc += x[i];
        return acc;
    }
    std::int64_t m = n / 2;
    return pairwise_sum(x, m) + pairwise_sum(x + m, n - m);
}

namespace {

// Pairwise-tree reduction of f(g[k]) over [lo, hi) without materializing the
// transformed array.
template <class F>
double pairwise_map_sum(const double* g, std::int64_t lo, std::int64_t hi, F&& f) {
    if (hi - lo <= 32) {
        double acc = 0.0;
        for (std::int64_t i = lo; i < hi; ++i) acc += f(g[i]);
        return acc;
    }
    std::int64_t m = lo + (hi - lo) / 2;
    return pairwise_map_sum(g, lo, m, f) + pairwise_map_sum(g, m, hi, f);
}

} // namespace

void diff_forward(const GridSpec& spec, const std::vector<double>& g, int axis,
                  std::vector<double>& out) {
    out.resize(g.size());
    const std::int64_t n = spec.cells[axis];
    const std::int64_t st = spec.stride[axis];
    const std::int64_t outer = spec.total / (n * st);
    const double inv_h = 1.0 / spec.h[axis];
    for (std::int64_t o = 0; o < outer; ++o) {
        const std::int64_t base = o * n * st;
        for (std::int64_t c = 0; c < n - 1; ++c) {
            const std::int64_t k0 = base + c * st;
            for (std::int64_t i = 0; i < st; ++i)
                out[k0 + i] = (g[k0 + st + i] - g[k0 + i]) * inv_h;
        }
        const std::int64_t klast = base + (n - 1) * st;
        for (std::int64_t i = 0; i < st; ++i) out[klast + i] = -g[klast + i] * inv_h;
    }
}

double mass(const GridSpec& spec, const std::vector<double>& v) {
    return pairwise_sum(v.data(), spec.total) * spec.cell_volume;
}

double norm_l1(const GridSpec& spec, const std::vector<double>& g) {
    return pairwise_map_sum(g.data(), 0, spec.total, [](double x) { return std::abs(x); }) *
           spec.cell_volume;
}

double norm_lq(const GridSpec& spec, const std::vector<double>& g, double q) {
    double s;
    if (q == 1.0) {
        return norm_l1(spec, g);
    } else if (q == 2.0) {
        s = pairwise_map_sum(g.data(), 0, spec.total, [](double x) { return x * x; });
    } else if (q == 1.5) {
        s = pairwise_map_sum(g.data(), 0, spec.total, [](double x) {
            double a = std::abs(x);
            return a * std::sqrt(a);
        });
    } else {
        s = pairwise_map_sum(g.data(), 0, spec.total,
                             [q](double x) { return std::pow(std::abs(x), q); });
    }
    return std::pow(s * spec.cell_volume, 1.0 / q);
}

double norm_linf(const std::vector<double>& g) {
    double m = 0.0;
    for (double x : g) m = std::max(m, std::abs(x));
    return m;
}

std::vector<double> support_halfwidth(const GridSpec& spec, const std::vector<double>& g,
                                      double threshold) {
    const int d = spec.dim;
    std::vector<std::int64_t> lo(d, -1), hi(d, -1), coord(d, 0);
    for (std::int64_t k = 0; k < spec.total; ++k) {
        if (std::abs(g[k]) > threshold) {
            for (int i = 0; i < d; ++i) {
                if (lo[i] < 0 || coord[i] < lo[i]) lo[i] = coord[i];
                if (coord[i] > hi[i]) hi[i] = coord[i];
            }
        }
        for (int i = d - 1; i >= 0; --i) {  // odometer increment
            if (++coord[i] < spec.cells[i]) break;
            coord[i] = 0;
        }
    }
    std::vector<double> R(d, 0.0);
    for (int i = 0; i < d; ++i) {
        if (lo[i] < 0) continue;  // nothing above threshold
        double r = std::max(std::abs(spec.center(i, lo[i])), std::abs(spec.center(i, hi[i])));
        R[i] = r + 0.5 * spec.h[i];
    }
    return R;
}

CylinderSelection restrict_to_cylinder(const GridSpec& spec, const Anisotropy& a,
                                       const std::vector<double>& x0, double r) {
    if (a.dim != spec.dim)
        throw std::invalid_argument("cylinder: anisotropy/grid dimension mismatch");
    if (static_cast<int>(x0.size()) != spec.dim)
        throw std::invalid_argument("cylinder: center must have dim entries");
    if (!(r > 0.0)) throw std::invalid_argument("cylinder: scale r must be positive");

    CylinderSelection sel;
    sel.lo.resize(spec.dim);
    sel.hi.resize(spec.dim);
    sel.halfwidth.resize(spec.dim);
    for (int i = 0; i < spec.dim; ++i) {
        const double w = std::pow(r, 1.0 / a.p_axis(i));
        sel.halfwidth[i] = w;
        if (x0[i] - w < -spec.half_length[i] || x0[i] + w > spec.half_length[i])
            throw std::invalid_argument("cylinder exceeds domain on axis " + std::to_string(i));
        // first/last cell center inside [x0 - w, x0 + w]
        const double lo_x = x0[i] - w + spec.half_length[i];
        const double hi_x = x0[i] + w + spec.half_length[i];
        std::int64_t lo = static_cast<std::int64_t>(std::ceil(lo_x / spec.h[i] - 0.5));
        std::int64_t hi = static_cast<std::int64_t>(std::floor(hi_x / spec.h[i] - 0.5)) + 1;
        lo = std::max<std::int64_t>(lo, 0);
        hi = std::min<std::int64_t>(hi, spec.cells[i]);
        if (hi <= lo)
            throw std::invalid_argument("cylinder thinner than one cell on axis " +
                                        std::to_string(i));
        sel.lo[i] = lo;
        sel.hi[i] = hi;
    }
    return sel;
}

} // namespace anisodiff
