#pragma once

#include <cstdint>
#include <vector>

#include "anisodiff/params.hpp"

// Uniform tensor grids on centered boxes prod_i [-L_i, L_i], cell-centered
// storage in row-major order (axis 0 slowest, last axis contiguous), plus the
// discrete operators and reductions the solver and the checkers share.
//
// All summation-type reductions use a fixed pairwise tree determined solely by
// index ranges, so results are bitwise reproducible run to run.

namespace anisodiff {

struct GridSpec {
    int dim = 0;
    std::vector<double> half_length;   // L_i > 0
    std::vector<std::int64_t> cells;   // n_i, even, >= 8
    std::vector<double> h;             // 2 L_i / n_i
    std::vector<std::int64_t> stride;  // row-major strides
    std::int64_t total = 0;            // prod n_i
    double cell_volume = 1.0;          // prod h_i

    double center(int axis, std::int64_t j) const {
        return -half_length[axis] + (static_cast<double>(j) + 0.5) * h[axis];
    }
};

// Validates (even cell counts >= 8, positive extents, memory cap) and
// precomputes strides. Throws std::invalid_argument on violation.
GridSpec make_grid(int dim, const std::vector<double>& half_length,
                   const std::vector<std::int64_t>& cells);

// Maximum number of cells accepted by make_grid (keeps a handful of field
// copies comfortably inside sandbox memory).
inline constexpr std::int64_t kMaxCells = std::int64_t(1) << 24;

// Fixed pairwise-tree summation over [0, n); leaves of <= 32 elements are
// accumulated sequentially. Deterministic for a given index range.
double pairwise_sum(const double* x, std::int64_t n);

// Forward difference with zero extension beyond the boundary:
//   out[k] = (g[k + e_axis] - g[k]) / h_axis,  g == 0 outside the box.
// out[k] lives on the face between cell k and its +axis neighbor.
void diff_forward(const GridSpec& spec, const std::vector<double>& g, int axis,
                  std::vector<double>& out);

double mass(const GridSpec& spec, const std::vector<double>& v);        // sum v * cell_volume
double norm_l1(const GridSpec& spec, const std::vector<double>& g);     // sum |g| * vol
double norm_lq(const GridSpec& spec, const std::vector<double>& g, double q); // (sum |g|^q vol)^{1/q}
double norm_linf(const std::vector<double>& g);                          // max |g|

// Smallest R_i such that |g| <= threshold outside prod_i [-R_i, R_i], with
// the cell-center convention and half-cell padding. Zero field gives R = 0.
std::vector<double> support_halfwidth(const GridSpec& spec, const std::vector<double>& g,
                                      double threshold);

// Index box of the anisotropic cylinder cross-section: along axis s the
// cylinder of scale r spans [x0_s - r^{1/p_s}, x0_s + r^{1/p_s}]. Selected
// cells are those whose centers lie inside. Rejects cylinders that exceed the
// domain or select no cell on some axis.
struct CylinderSelection {
    std::vector<std::int64_t> lo;       // inclusive
    std::vector<std::int64_t> hi;       // exclusive
    std::vector<double> halfwidth;      // r^{1/p_s}
};

CylinderSelection restrict_to_cylinder(const GridSpec& spec, const Anisotropy& a,
                                       const std::vector<double>& x0, double r);

} // namespace anisodiff
