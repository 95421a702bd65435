#pragma once

#include <string>
#include <vector>

#include "anisodiff/params.hpp"
#include "anisodiff/solver.hpp"

// Scaling diagnostics on recorded time series: log-log power-law fits of the
// sup-norm decay, of the per-axis support growth, and the two-sided
// sup-norm x support-box vs mass comparison.

namespace anisodiff {

struct PowerLawFit {
    double slope = 0.0;
    double intercept = 0.0;   // log y = slope * log t + intercept
    double r_squared = 0.0;
    int n_points = 0;
};

// Ordinary least squares on (log t, log y), restricted to t in [t_lo, t_hi].
// Requires >= 5 usable points with t > 0 and y > 0; throws otherwise.
PowerLawFit fit_power_law(const std::vector<double>& t, const std::vector<double>& y,
                          double t_lo, double t_hi);

struct UltracontractivityVerdict {
    PowerLawFit fit;              // log ||u||_inf vs log t
    double slope_target = 0.0;    // -N / lambda1
    double rel_deviation = 0.0;   // |slope - target| / |target|
    double prefactor_min = 0.0;   // ||u||_inf t^{N/lambda1} / ||u0||_1^{p_bar/lambda1}
    double prefactor_max = 0.0;
    bool pass = false;
};

UltracontractivityVerdict check_ultracontractivity(const std::vector<TimeSeriesRecord>& recs,
                                                   const DerivedExponents& e, double u0_l1,
                                                   double t_lo, double t_hi, double tol);

struct SupportLawVerdict {
    std::vector<PowerLawFit> fits;      // per axis, log(supp_i - 2 R0) vs log t
    std::vector<double> slope_target;   // (N(p_bar - p_i) + p_bar)/(lambda1 p_i)
    std::vector<double> rel_deviation;
    bool ranking_strictly_decreasing = false;  // measured slopes decrease in p_i
    bool pass = false;
};

// R0 is the common initial support half-width; records are used only where
// every axis satisfies supp_i >= 4 R0 (the fitted excess supp_i - 2 R0 stays
// at or above 2 R0, so the additive offset is subdominant) in addition to the
// [t_lo, t_hi] window. Requires slow diffusion; throws otherwise.
SupportLawVerdict check_support_law(const std::vector<TimeSeriesRecord>& recs,
                                    const Anisotropy& a, const DerivedExponents& e, double R0,
                                    double t_lo, double t_hi, double tol);

struct RectangleOptimalityVerdict {
    bool lower_chain_ok = false;  // l1 <= linf * prod(2 supp_i) + threshold slack, each record
    double worst_chain_slack = 0.0;  // most negative (rhs - lhs); >= -tol when ok
    double ratio_min = 0.0;          // linf * prod(2 supp_i) / l1_u(0) over the window
    double ratio_max = 0.0;          // empirical gamma
    bool pass = false;
};

// threshold * domain_volume bounds the below-threshold truncation mass that
// the support box misses; ratio_floor is the non-degeneracy bound.
RectangleOptimalityVerdict check_rectangle_optimality(
    const std::vector<TimeSeriesRecord>& recs, double u0_l1, double support_threshold,
    double domain_volume, double t_lo, double t_hi, double ratio_floor = 0.01);

// CSV round trip of solver records (header step,t,dt,mass_v,l1_u,lalpha1_u,
// linf_u,supp_1..supp_N).
std::vector<TimeSeriesRecord> read_records_csv(const std::string& path);

} // namespace anisodiff
