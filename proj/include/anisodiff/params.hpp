#pragma once

#include <optional>
#include <string>
#include <vector>

// Problem parameters of the doubly nonlinear anisotropic diffusion equation
//
//   d_t(|u|^{alpha-1} u) = sum_i d_i(|d_i u|^{p_i - 2} d_i u),
//
// together with every exponent derived from (N, alpha, p) that the scaling
// diagnostics compare against, and the qualitative regime flags.

namespace anisodiff {

struct Anisotropy {
    int dim = 0;                    // N >= 1
    double alpha = 0.0;             // in (0, 1]; alpha = 1 is the classical edge case
    double lambda_struct = 1.0;     // structure constant of the flux class, >= 1;
                                    // carried through reports, never enters exponents
    std::vector<double> p;          // sorted ascending, each in (1, inf)
    std::vector<int> axis_order;    // axis_order[j] = original axis of sorted slot j

    // p_i in the caller's original axis order.
    double p_axis(int axis) const;
    double p_min() const { return p.front(); }
    double p_max() const { return p.back(); }
};

// Validates and normalizes; throws std::invalid_argument with a precise
// message on any violated range.
Anisotropy make_anisotropy(int dim, double alpha, const std::vector<double>& p_user,
                           double lambda_struct = 1.0);

struct DerivedExponents {
    int dim = 0;
    double alpha = 0.0;

    double p_bar = 0.0;                    // harmonic mean N / sum(1/p_i)
    std::optional<double> p_bar_star;      // N p_bar / (N - p_bar), only when p_bar < N
    double P = 0.0;                        // max{alpha + 1, p_max}
    double lambda1 = 0.0;                  // N (p_bar - (alpha+1)) + p_bar
    double mass_decay_exponent = 0.0;      // N / lambda1   (sup-norm decay rate)
    double mass_gain_exponent = 0.0;       // p_bar / lambda1 (initial-mass power)
    std::vector<double> support_exponent;       // per user axis: (N(p_bar - p_i) + p_bar)/(lambda1 p_i)
    std::vector<double> support_mass_exponent;  // per user axis: p_bar (p_i - alpha - 1)/(lambda1 p_i)
    double m_threshold = 0.0;              // (N/p_bar)(alpha + 1 - p_bar)
    double lambda_small = 0.0;             // P - (N/p_bar)(p_bar(1 + (alpha+1)/N) - P)

    // lambda_q = N (p_bar - (alpha+1)) + q p_bar, strictly increasing in q.
    double lambda_q(double q) const;
    // p_bar_sigma = p_bar (1 + sigma/N).
    double p_bar_sigma(double sigma) const;
};

DerivedExponents derive(const Anisotropy& a);

struct RegimeFlags {
    bool supercritical = false;       // p_bar > N(alpha+1)/(N+alpha+1)
    bool boundedness_window = false;  // 1 < p_i < p_bar(1 + (alpha+1)/N) for all i
    bool slow_diffusion = false;      // alpha+1 < p_min and p_max < p_bar(1+alpha/N) < N+alpha
    bool rough_support = false;       // alpha+1 < p_i < p_bar(1+(alpha+1)/N) < N+alpha+1 for all i
    bool ultracontractive = false;    // p_bar(1 + 1/N) > alpha + 1
};

RegimeFlags regime_flags(const Anisotropy& a);

// The two closed sum identities behind the sharpness of the support box:
//   sum_i support_exponent[i]      == N / lambda1
//   sum_i support_mass_exponent[i] == (lambda1 - p_bar) / lambda1
struct SumIdentityCheck {
    double err_support = 0.0;   // |lhs - rhs| of the first identity
    double err_mass = 0.0;      // |lhs - rhs| of the second
    bool ok = false;
};

SumIdentityCheck check_sum_identities(const DerivedExponents& e, double tol = 1e-10);

// JSON text (schema_version 1) with every derived field and flag.
std::string params_report_json(const Anisotropy& a);

} // namespace anisodiff
