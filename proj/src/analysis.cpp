#include "anisodiff/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace anisodiff {

std::vector<double> mollify_forward(const std::vector<double>& v, double dt, double h) {
    if (!(dt > 0.0) || !(h > 0.0))
        throw std::invalid_argument("mollify: dt and h must be positive");
    const size_t n = v.size();
    std::vector<double> m(n, 0.0);
    if (n == 0) return m;
    const double decay = std::exp(-dt / h);
    const double w = 0.5 * dt / h;
    for (size_t i = 1; i < n; ++i)
        m[i] = decay * m[i - 1] + w * (decay * v[i - 1] + v[i]);
    return m;
}

std::vector<double> mollify_backward(const std::vector<double>& v, double dt, double h) {
    if (!(dt > 0.0) || !(h > 0.0))
        throw std::invalid_argument("mollify: dt and h must be positive");
    const size_t n = v.size();
    std::vector<double> m(n, 0.0);
    if (n == 0) return m;
    const double decay = std::exp(-dt / h);
    const double w = 0.5 * dt / h;
    for (size_t i = n - 1; i-- > 0;)
        m[i] = decay * m[i + 1] + w * (decay * v[i + 1] + v[i]);
    return m;
}

namespace {

double lp_time_norm(const std::vector<double>& v, double dt, double p) {
    // trapezoid-in-time L^p norm on [0, T]
    double s = 0.0;
    for (size_t i = 0; i < v.size(); ++i) {
        double w = (i == 0 || i + 1 == v.size()) ? 0.5 : 1.0;
        s += w * std::pow(std::abs(v[i]), p);
    }
    return std::pow(s * dt, 1.0 / p);
}

double linf_time_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double identity_residual(const std::vector<double>& v, const std::vector<double>& m,
                         double dt, double h, int sign) {
    // sign +1: d_t m = (v - m)/h ; sign -1: d_t m = (m - v)/h
    double worst = 0.0;
    for (size_t i = 1; i + 1 < v.size(); ++i) {
        double dmdt = (m[i + 1] - m[i - 1]) / (2.0 * dt);
        double rhs = sign * (v[i] - m[i]) / h;
        worst = std::max(worst, std::abs(dmdt - rhs));
    }
    return worst;
}

} // namespace

MollifierReport check_mollifier_properties(const std::vector<double>& v, double dt, double h,
                                           double contraction_tol, double residual_tol) {
    if (v.size() < 8) throw std::invalid_argument("mollifier check needs >= 8 samples");
    MollifierReport r;

    const std::vector<double> mf = mollify_forward(v, dt, h);
    const std::vector<double> mb = mollify_backward(v, dt, h);

    r.contraction_excess_l1 = std::max(0.0, lp_time_norm(mf, dt, 1.0) - lp_time_norm(v, dt, 1.0));
    r.contraction_excess_l2 = std::max(0.0, lp_time_norm(mf, dt, 2.0) - lp_time_norm(v, dt, 2.0));
    r.contraction_excess_linf = std::max(0.0, linf_time_norm(mf) - linf_time_norm(v));

    r.identity_residual_forward = identity_residual(v, mf, dt, h, +1);
    r.identity_residual_backward = identity_residual(v, mb, dt, h, -1);

    for (double hh : {h, 0.5 * h, 0.25 * h}) {
        const std::vector<double> m = mollify_forward(v, dt, hh);
        double s = 0.0;
        for (size_t i = 0; i < v.size(); ++i) {
            double w = (i == 0 || i + 1 == v.size()) ? 0.5 : 1.0;
            double d = m[i] - v[i];
            s += w * d * d;
        }
        r.l2_distance_sweep.push_back(std::sqrt(s * dt));
    }
    r.l2_distance_decreasing = r.l2_distance_sweep[0] > r.l2_distance_sweep[1] &&
                               r.l2_distance_sweep[1] > r.l2_distance_sweep[2];

    r.pass = r.contraction_excess_l1 <= contraction_tol &&
             r.contraction_excess_l2 <= contraction_tol &&
             r.contraction_excess_linf <= contraction_tol &&
             r.identity_residual_forward <= residual_tol &&
             r.identity_residual_backward <= residual_tol && r.l2_distance_decreasing;
    return r;
}

namespace {

void validate_recursion_params(double C, double b, double z0) {
    if (!(C > 0.0)) throw std::invalid_argument("recursion: C must be positive");
    if (!(b > 1.0)) throw std::invalid_argument("recursion: b must exceed 1");
    if (!(z0 >= 0.0)) throw std::invalid_argument("recursion: z0 must be nonnegative");
}

RecursionResult iterate_recursion(double b, double mu_min, double z0, int steps,
                                  const std::vector<double>& z_seq) {
    RecursionResult r;
    r.z = z_seq;
    r.bound_held = true;
    const double decay = std::pow(b, -1.0 / mu_min);
    double bound = z0;
    for (size_t n = 0; n < r.z.size(); ++n) {
        if (!std::isfinite(r.z[n]) || r.z[n] > 1e100) {
            r.diverged = true;
            r.diverged_at = static_cast<int>(n);
            r.bound_held = false;
            r.z.resize(n + 1);
            break;
        }
        if (r.z[n] > bound) r.bound_held = false;
        bound *= decay;
    }
    (void)steps;
    return r;
}

} // namespace

double recursion_threshold(double C, double b, double mu, double nu) {
    if (!(mu > 0.0) || !(nu > 0.0))
        throw std::invalid_argument("recursion: exponents must be positive");
    const double mu_min = std::min(mu, nu);
    return std::min(std::pow(C, -1.0 / mu), std::pow(C, -1.0 / nu)) *
           std::pow(b, -1.0 / (mu_min * mu_min));
}

RecursionResult run_recursion(double C, double b, double mu, double nu, double z0, int steps) {
    validate_recursion_params(C, b, z0);
    if (!(mu > 0.0) || !(nu > 0.0))
        throw std::invalid_argument("recursion: exponents must be positive");
    std::vector<double> z(static_cast<size_t>(steps) + 1);
    z[0] = z0;
    double bn = 1.0;
    for (int n = 0; n < steps; ++n) {
        const double zn = z[n];
        double grown = std::isfinite(zn)
                           ? C * bn * std::max(std::pow(zn, 1.0 + mu), std::pow(zn, 1.0 + nu))
                           : zn;
        z[n + 1] = grown;
        bn *= b;
        if (!std::isfinite(grown) || grown > 1e100) {
            z.resize(static_cast<size_t>(n) + 2);
            break;
        }
    }
    return iterate_recursion(b, std::min(mu, nu), z0, steps, z);
}

double recursion_threshold_multi(double C, double b, const std::vector<double>& chi) {
    if (chi.empty()) throw std::invalid_argument("recursion: chi must be nonempty");
    for (double c : chi)
        if (!(c > 0.0)) throw std::invalid_argument("recursion: exponents must be positive");
    const double cmin = *std::min_element(chi.begin(), chi.end());
    const double cmax = *std::max_element(chi.begin(), chi.end());
    return std::min(std::pow(C, -1.0 / cmin), std::pow(C, -1.0 / cmax)) *
           std::pow(b, -1.0 / (cmin * cmin));
}

RecursionResult run_recursion_multi(double C, double b, const std::vector<double>& chi,
                                    double z0, int steps) {
    validate_recursion_params(C, b, z0);
    if (chi.empty()) throw std::invalid_argument("recursion: chi must be nonempty");
    const double cmin = *std::min_element(chi.begin(), chi.end());
    std::vector<double> z(static_cast<size_t>(steps) + 1);
    z[0] = z0;
    double bn = 1.0;
    for (int n = 0; n < steps; ++n) {
        const double zn = z[n];
        double s = 0.0;
        for (double c : chi) s += std::pow(zn, 1.0 + c);
        double grown = std::isfinite(zn) ? C * bn * s / static_cast<double>(chi.size()) : zn;
        z[n + 1] = grown;
        bn *= b;
        if (!std::isfinite(grown) || grown > 1e100) {
            z.resize(static_cast<size_t>(n) + 2);
            break;
        }
    }
    return iterate_recursion(b, cmin, z0, steps, z);
}

TroisiReport check_troisi(const GridSpec& spec, const std::vector<double>& g,
                          const Anisotropy& a) {
    const DerivedExponents e = derive(a);
    if (!e.p_bar_star)
        throw std::invalid_argument("troisi: requires p_bar < N");
    TroisiReport r;
    r.numerator = norm_lq(spec, g, *e.p_bar_star);
    r.denominator = 1.0;
    std::vector<double> d;
    for (int i = 0; i < spec.dim; ++i) {
        diff_forward(spec, g, i, d);
        r.denominator *= std::pow(norm_lq(spec, d, a.p_axis(i)), 1.0 / spec.dim);
    }
    r.ratio = r.denominator > 0.0 ? r.numerator / r.denominator : 0.0;
    return r;
}

} // namespace anisodiff
