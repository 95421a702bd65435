#include "anisodiff/params.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace anisodiff {

double Anisotropy::p_axis(int axis) const {
    for (size_t j = 0; j < axis_order.size(); ++j)
        if (axis_order[j] == axis) return p[j];
    throw std::out_of_range("p_axis: axis " + std::to_string(axis) + " out of range");
}

Anisotropy make_anisotropy(int dim, double alpha, const std::vector<double>& p_user,
                           double lambda_struct) {
    if (dim < 1)
        throw std::invalid_argument("dim must be >= 1, got " + std::to_string(dim));
    if (!(alpha > 0.0) || !(alpha <= 1.0) || !std::isfinite(alpha))
        throw std::invalid_argument("alpha must lie in (0, 1], got " + std::to_string(alpha));
    if (static_cast<int>(p_user.size()) != dim)
        throw std::invalid_argument("p has " + std::to_string(p_user.size()) +
                                    " entries, expected dim = " + std::to_string(dim));
    for (double pi : p_user)
        if (!(pi > 1.0) || !std::isfinite(pi))
            throw std::invalid_argument("every p_i must be finite and > 1, got " +
                                        std::to_string(pi));
    if (!(lambda_struct >= 1.0) || !std::isfinite(lambda_struct))
        throw std::invalid_argument("lambda_struct must be >= 1, got " +
                                    std::to_string(lambda_struct));

    Anisotropy a;
    a.dim = dim;
    a.alpha = alpha;
    a.lambda_struct = lambda_struct;
    a.axis_order.resize(dim);
    std::iota(a.axis_order.begin(), a.axis_order.end(), 0);
    std::stable_sort(a.axis_order.begin(), a.axis_order.end(),
                     [&](int i, int j) { return p_user[i] < p_user[j]; });
    a.p.resize(dim);
    for (int j = 0; j < dim; ++j) a.p[j] = p_user[a.axis_order[j]];
    return a;
}

DerivedExponents derive(const Anisotropy& a) {
    DerivedExponents e;
    e.dim = a.dim;
    e.alpha = a.alpha;

    const double N = a.dim;
    double inv_sum = 0.0;
    for (double pi : a.p) inv_sum += 1.0 / pi;
    e.p_bar = N / inv_sum;
    if (e.p_bar < N) e.p_bar_star = N * e.p_bar / (N - e.p_bar);
    e.P = std::max(a.alpha + 1.0, a.p_max());
    e.lambda1 = N * (e.p_bar - (a.alpha + 1.0)) + e.p_bar;
    e.mass_decay_exponent = N / e.lambda1;
    e.mass_gain_exponent = e.p_bar / e.lambda1;
    e.m_threshold = (N / e.p_bar) * (a.alpha + 1.0 - e.p_bar);
    e.lambda_small = e.P - (N / e.p_bar) * (e.p_bar * (1.0 + (a.alpha + 1.0) / N) - e.P);

    e.support_exponent.resize(a.dim);
    e.support_mass_exponent.resize(a.dim);
    for (int axis = 0; axis < a.dim; ++axis) {
        double pi = a.p_axis(axis);
        e.support_exponent[axis] = (N * (e.p_bar - pi) + e.p_bar) / (e.lambda1 * pi);
        e.support_mass_exponent[axis] = e.p_bar * (pi - a.alpha - 1.0) / (e.lambda1 * pi);
    }
    return e;
}

double DerivedExponents::lambda_q(double q) const {
    return dim * (p_bar - (alpha + 1.0)) + q * p_bar;
}

double DerivedExponents::p_bar_sigma(double sigma) const {
    return p_bar * (1.0 + sigma / dim);
}

RegimeFlags regime_flags(const Anisotropy& a) {
    const DerivedExponents e = derive(a);
    const double N = a.dim;
    const double a1 = a.alpha + 1.0;
    RegimeFlags f;
    f.supercritical = e.p_bar > N * a1 / (N + a1);
    f.boundedness_window = a.p_max() < e.p_bar_sigma(a1);  // p_i > 1 holds by construction
    f.slow_diffusion = a1 < a.p_min() && a.p_max() < e.p_bar_sigma(a.alpha) &&
                       e.p_bar_sigma(a.alpha) < N + a.alpha;
    f.rough_support = a1 < a.p_min() && a.p_max() < e.p_bar_sigma(a1) &&
                      e.p_bar_sigma(a1) < N + a1;
    f.ultracontractive = e.p_bar_sigma(1.0) > a1;
    return f;
}

SumIdentityCheck check_sum_identities(const DerivedExponents& e, double tol) {
    SumIdentityCheck c;
    double se = 0.0, sm = 0.0;
    for (double x : e.support_exponent) se += x;
    for (double x : e.support_mass_exponent) sm += x;
    c.err_support = std::abs(se - e.dim / e.lambda1);
    c.err_mass = std::abs(sm - (e.lambda1 - e.p_bar) / e.lambda1);
    c.ok = c.err_support <= tol && c.err_mass <= tol;
    return c;
}

std::string params_report_json(const Anisotropy& a) {
    const DerivedExponents e = derive(a);
    const RegimeFlags f = regime_flags(a);

    std::vector<double> p_user(a.dim);
    for (int j = 0; j < a.dim; ++j) p_user[a.axis_order[j]] = a.p[j];

    nlohmann::json j;
    j["schema_version"] = 1;
    j["dim"] = a.dim;
    j["alpha"] = a.alpha;
    j["lambda_struct"] = a.lambda_struct;
    j["p"] = p_user;
    j["p_sorted"] = a.p;
    j["p_bar"] = e.p_bar;
    if (e.p_bar_star)
        j["p_bar_star"] = *e.p_bar_star;
    else
        j["p_bar_star"] = nullptr;
    j["P"] = e.P;
    j["lambda1"] = e.lambda1;
    j["lambda_q_at_alpha_plus_1"] = e.lambda_q(a.alpha + 1.0);
    j["p_bar_sigma_1"] = e.p_bar_sigma(1.0);
    j["p_bar_sigma_alpha_plus_1"] = e.p_bar_sigma(a.alpha + 1.0);
    j["mass_decay_exponent"] = e.mass_decay_exponent;
    j["mass_gain_exponent"] = e.mass_gain_exponent;
    j["support_exponent"] = e.support_exponent;
    j["support_mass_exponent"] = e.support_mass_exponent;
    j["m_threshold"] = e.m_threshold;
    j["lambda_small"] = e.lambda_small;
    j["flags"] = {{"supercritical", f.supercritical},
                  {"boundedness_window", f.boundedness_window},
                  {"slow_diffusion", f.slow_diffusion},
                  {"rough_support", f.rough_support},
                  {"ultracontractive", f.ultracontractive}};
    const SumIdentityCheck c = check_sum_identities(e);
    j["sum_identity_errors"] = {{"support", c.err_support}, {"mass", c.err_mass}};
    return j.dump(2);
}

} // namespace anisodiff
