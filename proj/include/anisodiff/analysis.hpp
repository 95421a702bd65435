#pragma once

#include <cstdint>
#include <vector>

#include "anisodiff/grid.hpp"
#include "anisodiff/params.hpp"

// Numerical checks of the auxiliary machinery: exponential time mollification,
// geometric fast-convergence recursions, and the anisotropic Sobolev quotient.

namespace anisodiff {

// Exponential mollification on a uniform time grid t_i = i * dt:
//   forward:  (1/h) int_0^t   e^{(s-t)/h} v(s) ds
//   backward: (1/h) int_t^T   e^{(t-s)/h} v(s) ds
// Trapezoid quadrature, evaluated by an O(n) recursion.
std::vector<double> mollify_forward(const std::vector<double>& v, double dt, double h);
std::vector<double> mollify_backward(const std::vector<double>& v, double dt, double h);

struct MollifierReport {
    // L^p(0,T) contraction ||v_h||_p <= ||v||_p + O(dt), p in {1, 2, inf}.
    double contraction_excess_l1 = 0.0;   // max(0, ||v_h||_1 - ||v||_1)
    double contraction_excess_l2 = 0.0;
    double contraction_excess_linf = 0.0;
    // Max residual of the defining ODEs, centered differences at interior nodes:
    //   d_t v_h = (v - v_h)/h,   d_t v_hbar = (v_hbar - v)/h.
    double identity_residual_forward = 0.0;
    double identity_residual_backward = 0.0;
    // ||v_h - v||_2 for h, h/2, h/4; must decrease.
    std::vector<double> l2_distance_sweep;
    bool l2_distance_decreasing = false;
    bool pass = false;
};

MollifierReport check_mollifier_properties(const std::vector<double>& v, double dt, double h,
                                           double contraction_tol, double residual_tol);

// Geometric recursion Z_{n+1} = C b^n max{Z_n^{1+mu}, Z_n^{1+nu}} iterated with
// equality. Starting at or below
//   threshold = min{C^{-1/mu}, C^{-1/nu}} b^{-1/mu_min^2},   mu_min = min(mu, nu),
// the iterates obey Z_n <= b^{-n/mu_min} Z_0.
struct RecursionResult {
    std::vector<double> z;          // iterates, z[0] = z0
    bool bound_held = false;        // Z_n <= b^{-n/mu_min} Z_0 for all computed n
    bool diverged = false;          // overflow / exceeded 1e100
    int diverged_at = -1;
};

double recursion_threshold(double C, double b, double mu, double nu);
RecursionResult run_recursion(double C, double b, double mu, double nu, double z0, int steps);

// Averaged multi-exponent variant Z_{n+1} = C b^n (1/M) sum_j Z_n^{1+chi_j};
// threshold and bound use chi_min and chi_max in place of mu, nu.
double recursion_threshold_multi(double C, double b, const std::vector<double>& chi);
RecursionResult run_recursion_multi(double C, double b, const std::vector<double>& chi,
                                    double z0, int steps);

// Anisotropic Sobolev quotient ||g||_{p_bar^*} / prod_i ||D_i g||_{p_i}^{1/N}
// for compactly supported grid fields (requires p_bar < N). The quotient is
// scale invariant in the field amplitude and stays bounded under refinement.
struct TroisiReport {
    double numerator = 0.0;       // ||g||_{p_bar^*}
    double denominator = 0.0;     // prod ||D_i g||_{p_i}^{1/N}
    double ratio = 0.0;
};

TroisiReport check_troisi(const GridSpec& spec, const std::vector<double>& g,
                          const Anisotropy& a);

} // namespace anisodiff
