#pragma once

#include <cmath>
#include <stdexcept>

// Pointwise nonlinearities shared by the solver, the energy checker and the
// property suites: the signed power, the regularized gradient flux, the
// chain-rule factor of the time nonlinearity, and the b-form that controls
// the time boundary terms in the energy estimates.
//
// Everything in this header is a pure function of its arguments; the hot
// paths carry exact fast branches for the exponents that dominate our runs
// (gamma in {0.5, 1, 2}, p in {2, 3}).

namespace anisodiff {

// |a|^{gamma-1} a, understood to be 0 at a = 0.
inline double signed_power(double a, double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("signed_power: gamma must be > 0");
    if (a == 0.0) return 0.0;
    if (gamma == 1.0) return a;
    if (gamma == 2.0) return std::abs(a) * a;
    if (gamma == 0.5) {
        double r = std::sqrt(std::abs(a));
        return a < 0.0 ? -r : r;
    }
    double r = std::pow(std::abs(a), gamma);
    return a < 0.0 ? -r : r;
}

// Weight (s^2 + eps^2)^{(p-2)/2}; flux(s) = flux_weight(s) * s.
// For p < 2 the unregularized weight blows up at s = 0; configuration
// validation requires eps > 0 in that case, and the eps = 0, s = 0 branch
// below is only ever taken for p > 2 (weight 0).
inline double flux_weight(double s, double p, double eps) {
    if (p == 2.0) return 1.0;
    double q = s * s + eps * eps;
    if (q == 0.0) return 0.0;
    if (p == 3.0) return std::sqrt(q);
    return std::pow(q, 0.5 * (p - 2.0));
}

// Regularized monotone flux (s^2 + eps^2)^{(p-2)/2} s.
// eps = 0 reduces exactly to the signed power |s|^{p-2} s.
inline double flux(double s, double p, double eps) {
    if (eps == 0.0) return signed_power(s, p - 1.0);
    return flux_weight(s, p, eps) * s;
}

// Inverse of the time nonlinearity: u = |v|^{1/alpha - 1} v where v = |u|^{alpha-1} u.
inline double u_from_v(double v, double alpha) {
    return signed_power(v, 1.0 / alpha);
}

// Regularized du/dv = (1/alpha) (v^2 + eps_v^2)^{(1-alpha)/(2 alpha)}, the
// chain-rule factor that turns the flux linearization into an effective
// diffusivity for the conserved variable. Singular at v = 0 for alpha < 1,
// hence the guard eps_v.
inline double du_dv(double v, double alpha, double eps_v) {
    if (alpha == 1.0) return 1.0;
    double q = v * v + eps_v * eps_v;
    double e = (1.0 - alpha) / (2.0 * alpha);
    double w = (e == 0.5) ? std::sqrt(q) : std::pow(q, e);
    return w / alpha;
}

// b-form controlling time boundary terms:
//   b_alpha(v, w) = alpha/(alpha+1) (|v|^{alpha+1} - |w|^{alpha+1})
//                   - w (|v|^{alpha-1} v - |w|^{alpha-1} w).
// Nonnegative, zero iff v = w.
inline double b_alpha(double v, double w, double alpha) {
    double av = std::abs(v), aw = std::abs(w);
    double t1 = alpha / (alpha + 1.0) * (std::pow(av, alpha + 1.0) - std::pow(aw, alpha + 1.0));
    double t2 = w * (signed_power(v, alpha) - signed_power(w, alpha));
    return t1 - t2;
}

// Equivalent second expression, obtained by writing the same quantity through
// the conjugate exponent 1/alpha:
//   b_alpha(v, w) = 1/(1+alpha) (|w|^{alpha+1} - |v|^{alpha+1})
//                   - |v|^{alpha-1} v (w - v).
// Used only as an independent cross-check of b_alpha.
inline double b_alpha_alt(double v, double w, double alpha) {
    double av = std::abs(v), aw = std::abs(w);
    double t1 = (std::pow(aw, alpha + 1.0) - std::pow(av, alpha + 1.0)) / (1.0 + alpha);
    double t2 = signed_power(v, alpha) * (w - v);
    return t1 - t2;
}

} // namespace anisodiff
