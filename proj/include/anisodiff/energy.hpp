#pragma once

#include <string>
#include <vector>

#include "anisodiff/grid.hpp"
#include "anisodiff/params.hpp"

// Discrete evaluation of the truncation energy estimate on anisotropic
// cylinders, of the generalized test-function identity behind it, and of the
// local boundedness bound. All integrals are cell sums weighted by cell
// volume and trapezoid in time over recorded snapshots.

namespace anisodiff {

struct SnapshotSeries {
    GridSpec grid;
    Anisotropy aniso;
    std::vector<double> times;             // strictly increasing
    std::vector<std::vector<double>> u;    // one field per time
};

// Reads index.json plus the GFB files it lists.
SnapshotSeries load_snapshots(const std::string& dir);

struct EnergyProbe {
    std::vector<double> center;   // cylinder center x0
    double r = 0.0;               // cylinder scale; axis-s half-width r^{1/p_s}
    double tau1 = 0.0;            // time window
    double tau2 = 0.0;
    double level = 0.0;           // truncation level k > 0
    int sign = +1;                // +1: (u-k)_+, -1: (u-k)_-
    double eta_inner = 0.6;       // flat fraction of the spatial cutoff
    double phi_ramp = 0.25;       // rising fraction of the time cutoff
};

struct EnergyReport {
    double lhs_gradient = 0.0;  // sum_j iint |d_j[(u-k)_pm eta]|^{p_j} phi
    double lhs_sup = 0.0;       // sup_tau int (u^{(a+1)/2} - k^{(a+1)/2})_pm^2 eta phi
    double rhs_level = 0.0;     // sum_j iint (u-k)_pm^{p_j} |d_j eta^{1/p_j}|^{p_j} phi
    double rhs_time = 0.0;      // iint (u^{(a+1)/2} - k^{(a+1)/2})_pm^2 eta (phi')_+
    double ratio = 0.0;         // (lhs_gradient + lhs_sup) / (rhs_level + rhs_time)
    bool vacuous = false;       // every term exactly zero (level above the range of u)
    int n_times = 0;
};

// Requires >= 8 snapshots inside [tau1, tau2]; throws otherwise.
EnergyReport evaluate_energy(const SnapshotSeries& s, const EnergyProbe& probe);

enum class TestFamily { linear_truncation, regularized_power };

struct GeneralFormulaProbe {
    EnergyProbe base;            // cylinder, window, cutoffs, level (truncation family)
    TestFamily family = TestFamily::linear_truncation;
    double mu = 1.0;             // regularized power exponent
    double eps_reg = 0.0;        // regularization of the power family
    double gamma = 0.0;          // 0 selects the Young constant max{2, max_i (2(p_i-1))^{p_i-1}}
};

struct GeneralFormulaReport {
    double lhs_boundary = 0.0;   // int eta phi G(v) at tau2
    double lhs_gradient = 0.0;   // (1/gamma) sum_i iint |d_i u|^{p_i} f'(u) eta phi
    double rhs_cutoff = 0.0;     // gamma sum_i iint |f|^{p_i} f'^{1-p_i} |d_i eta^{1/p_i}|^{p_i} phi
    double rhs_initial = 0.0;    // int eta phi G(v) at tau1
    double rhs_time = 0.0;       // iint eta phi' G(v)
    double lhs = 0.0, rhs = 0.0;
    double slack_rel = 0.0;      // (rhs - lhs) / max(rhs, tiny)
    double gamma = 0.0;
    int n_times = 0;
};

GeneralFormulaReport general_formula_check(const SnapshotSeries& s,
                                           const GeneralFormulaProbe& probe);

struct BoundednessReport {
    bool refused = false;        // bound exponent undefined (P >= p_bar(1+(alpha+1)/N))
    double m_threshold = 0.0;    // extra integrability needed in that case
    double mean_integral = 0.0;  // mean of u_+^P over the cylinder of scale r
    double sup_measured = 0.0;   // max u over the sigma-shrunk cylinder
    double shrink_factor = 0.0;  // (1 - sigma)^{-(p_max/p_bar)(N + p_bar)}
    double bound_exponent = 0.0; // p_bar / (N (p_bar(1+(alpha+1)/N) - P))
    double implied_c = 0.0;      // sup / (shrink * mean)^{exponent} when sup > 1
    bool trivial = false;        // sup <= 1: bound holds with any constant
};

// Cylinder of scale r topped at (x0, t0): space box of half-widths r^{1/p_i},
// time depth (t0 - r, t0]. sigma in (0,1) shrinks both.
BoundednessReport report_boundedness_bound(const SnapshotSeries& s,
                                           const std::vector<double>& x0, double t0, double r,
                                           double sigma);

} // namespace anisodiff
