#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "anisodiff/grid.hpp"

// Closed-form solutions used as accuracy references: the heat kernel
// (alpha = 1, every p_i = 2) and the orthotropic source-type solution
// (alpha = 1, every p_i = p > 2)
//
//   u(x,t) = s^{-N/lam} (C - k sum_i |x_i s^{-1/lam}|^q)_+^m,   s = t + t_offset,
//   q = p/(p-1),  m = (p-1)/(p-2),  lam = N(p-2) + p,  k = ((p-2)/p) lam^{-1/(p-1)}.
//
// The orthotropic profile is a genuine solution only with the l^q dependence
// on the coordinates (a radial l^2 profile is not); barenblatt_residual
// verifies this discretely before the profile is trusted in comparisons.

namespace anisodiff {

struct HeatOracle {
    int dim = 2;
    double mass = 1.0;       // conserved integral of u
    double t_offset = 0.0;   // kernel age at solver time 0
    double value(const double* x, double t) const;
};

struct BarenblattOracle {
    int dim = 2;
    double p = 3.0;
    double C = 1.0;
    double t_offset = 0.0;
    double lambda = 0.0, q = 0.0, m = 0.0, k = 0.0;
    double value(const double* x, double t) const;
    double axis_support_radius(double t) const;  // support intercept on a coordinate axis
};

BarenblattOracle make_barenblatt(int dim, double p, double C, double t_offset);

// Evaluates f at every cell center.
std::vector<double> sample_field(const GridSpec& grid,
                                 const std::function<double(const double*)>& f);

struct ResidualReport {
    double max_residual = 0.0;
    std::int64_t cells = 0;   // cells that passed the masks
};

// max |d_t u - sum_i d_i(|d_i u|^{p-2} d_i u)| over cells with profile argument
// above margin_fb * C (free-boundary kink) and every |x_i| above margin_axis
// (the |x_i|^{q-1} kink of the flux on the coordinate hyperplanes). Time
// derivative by central sampling, divergence by the solver's face stencil;
// decays like h^2 for the true profile.
ResidualReport barenblatt_residual(const BarenblattOracle& o, const GridSpec& grid, double t,
                                   double margin_fb = 0.1, double margin_axis = 0.15);

} // namespace anisodiff
