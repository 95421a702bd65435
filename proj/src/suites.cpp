#include "anisodiff/suites.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <vector>

#include <nlohmann/json.hpp>

#include "anisodiff/analysis.hpp"
#include "anisodiff/grid.hpp"
#include "anisodiff/kernels.hpp"
#include "anisodiff/oracles.hpp"
#include "anisodiff/params.hpp"

namespace anisodiff {

ParamSuiteResult run_param_suite(int tuples, std::uint64_t seed) {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dim_d(1, 5);
    std::uniform_real_distribution<double> alpha_d(0.05, 1.0);
    std::uniform_real_distribution<double> p_d(1.05, 6.0);

    ParamSuiteResult r;
    r.tuples = tuples;
    for (int n = 0; n < tuples; ++n) {
        const int dim = dim_d(rng);
        const double alpha = alpha_d(rng);
        std::vector<double> p(dim);
        for (double& x : p) x = p_d(rng);

        const Anisotropy a = make_anisotropy(dim, alpha, p);
        const DerivedExponents e = derive(a);
        const RegimeFlags f = regime_flags(a);

        const SumIdentityCheck ids = check_sum_identities(e, 1e-10);
        r.max_identity_error =
            std::max({r.max_identity_error, ids.err_support, ids.err_mass});
        if (!ids.ok) ++r.identity_failures;

        if ((f.slow_diffusion && !f.rough_support) ||
            (f.rough_support && !f.ultracontractive))
            ++r.implication_failures;

        bool ok = true;
        // supercritical is exactly positivity of lambda_{alpha+1}
        if (f.supercritical != (e.lambda_q(alpha + 1.0) > 0.0)) ok = false;
        // N * gain == p_bar * decay
        if (std::abs(dim * e.mass_gain_exponent - e.p_bar * e.mass_decay_exponent) >
            1e-12 * std::abs(e.p_bar * e.mass_decay_exponent))
            ok = false;
        if (e.P != std::max(alpha + 1.0, a.p_max())) ok = false;
        if (!(e.p_bar >= a.p_min() - 1e-12) || !(e.p_bar <= a.p_max() + 1e-12)) ok = false;
        if (e.p_bar_star.has_value() != (e.p_bar < dim)) ok = false;
        if (e.p_bar_star && !(*e.p_bar_star > e.p_bar)) ok = false;
        // lambda_q strictly increasing in q
        if (!(e.lambda_q(alpha) < e.lambda_q(alpha + 0.5) &&
              e.lambda_q(alpha + 0.5) < e.lambda_q(alpha + 1.0)))
            ok = false;
        if (!ok) ++r.consistency_failures;

        // isotropic alpha=1 exactness at power-of-two p (harmonic mean is exact there):
        // support_exponent[i] == 1/(N(p-2)+p) bitwise
        if (n % 16 == 0) {
            const double piso = (n % 32 == 0) ? 2.0 : 4.0;
            const DerivedExponents ei =
                derive(make_anisotropy(dim, 1.0, std::vector<double>(dim, piso)));
            const double target = 1.0 / (dim * (piso - 2.0) + piso);
            for (int i = 0; i < dim; ++i)
                if (ei.support_exponent[i] != target) ++r.consistency_failures;
        }
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.pass = r.identity_failures == 0 && r.implication_failures == 0 &&
             r.consistency_failures == 0;
    return r;
}

KernelSuiteResult run_kernel_suite(int trials, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> alpha_d(0.05, 1.0);
    std::uniform_real_distribution<double> vw_d(-3.0, 3.0);
    std::uniform_real_distribution<double> gamma_d(1.0 + 1e-6, 5.0);

    KernelSuiteResult r;
    r.trials = trials;
    for (int n = 0; n < trials; ++n) {
        const double a = alpha_d(rng);
        const double v = vw_d(rng), w = vw_d(rng);
        const double s = std::max(std::abs(v), std::abs(w));
        if (s == 0.0) continue;
        const double sp1a = std::pow(s, 1.0 + a);

        const double b = b_alpha(v, w, a);
        const double b2 = b_alpha_alt(v, w, a);
        r.form_disagreement =
            std::max(r.form_disagreement, std::abs(b - b2) / (sp1a + std::abs(b)));

        if (b < -1e-15 * sp1a) ++r.negativity_failures;

        // Hoelder-type upper bound, absolute guard for near-diagonal noise
        const double rhs3 =
            std::pow(2.0, 1.0 - a) * std::pow(std::abs(v - w), 1.0 + a) + 1e-14 * sp1a;
        r.hoelder_margin = std::min(r.hoelder_margin, (rhs3 - b) / sp1a);

        // two-sided envelopes away from the cancellation-dominated diagonal
        if (std::abs(v - w) >= 1e-3 * s) {
            const double A = signed_power(v, 0.5 * (a + 1.0));
            const double B = signed_power(w, 0.5 * (a + 1.0));
            const double r1 = b / ((A - B) * (A - B));
            const double r2 =
                b / (std::pow(std::abs(v) + std::abs(w), a - 1.0) * (v - w) * (v - w));
            r.r1_min_margin = std::min(r.r1_min_margin, r1 - 0.5 * a);
            r.r1_max_margin = std::min(r.r1_max_margin, 2.0 / (1.0 + a) - r1);
            r.r2_min_margin = std::min(r.r2_min_margin, r2 - 0.5 * a);
            r.r2_max_margin = std::min(r.r2_max_margin, std::pow(2.0, 1.0 - a) - r2);
        }

        // |x - y|^g <= 2^{g-1} |x^g - y^g| with signed powers, incl. the
        // near-equality ray y ~ -x where both sides coincide to rounding
        const double g = gamma_d(rng);
        double x = vw_d(rng), y = vw_d(rng);
        if (n % 8 == 0) y = -x * (1.0 + (n % 9 - 4) * 1e-16);
        const double lhs = std::pow(std::abs(x - y), g);
        const double rhs = std::pow(2.0, g - 1.0) *
                           std::abs(signed_power(x, g) - signed_power(y, g));
        if (lhs > rhs * (1.0 + 1e-13) + 1e-300) ++r.power_violations;
    }

    r.pass = r.form_disagreement <= 1e-12 && r.negativity_failures == 0 &&
             r.power_violations == 0 && r.r1_min_margin >= -1e-6 &&
             r.r1_max_margin >= -1e-6 && r.r2_min_margin >= -1e-6 &&
             r.r2_max_margin >= -1e-6 && r.hoelder_margin >= 0.0;
    return r;
}

MollifierSuiteResult run_mollifier_suite(int signals, std::uint64_t seed) {
    MollifierSuiteResult r;
    r.signals = signals;
    const double h = 0.05;

    {
        // closed forms: constant c -> c(1 - e^{-t/h}), ramp t -> t - h(1 - e^{-t/h})
        const double dt = 1e-5;
        const int n = 100001;
        std::vector<double> c(n, 1.7), ramp(n);
        for (int i = 0; i < n; ++i) ramp[i] = i * dt;
        const auto mc = mollify_forward(c, dt, h);
        const auto mr = mollify_forward(ramp, dt, h);
        const auto bc = mollify_backward(c, dt, h);
        const double T = (n - 1) * dt;
        double err = 0.0;
        for (int i = 0; i < n; ++i) {
            const double t = i * dt;
            err = std::max(err, std::abs(mc[i] - 1.7 * (1.0 - std::exp(-t / h))));
            err = std::max(err, std::abs(mr[i] - (t - h * (1.0 - std::exp(-t / h)))));
            err = std::max(err, std::abs(bc[i] - 1.7 * (1.0 - std::exp(-(T - t) / h))));
        }
        if (err > 1e-6) ++r.closed_form_failures;
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 6.283185307179586);
    const double dt = 1e-4;
    const int n = 10001;
    std::vector<double> v(n);
    for (int sig = 0; sig < signals; ++sig) {
        std::vector<double> amp(8), ph(8);
        for (int k = 0; k < 8; ++k) {
            amp[k] = gauss(rng) / ((k + 1) * (k + 1));
            ph[k] = phase(rng);
        }
        for (int i = 0; i < n; ++i) {
            const double t = i * dt;
            double x = 0.0;
            for (int k = 0; k < 8; ++k)
                x += amp[k] * std::cos(6.283185307179586 * (k + 1) * t + ph[k]);
            v[i] = x;
        }
        double linf = 0.0;
        for (double x : v) linf = std::max(linf, std::abs(x));
        const double ctol = 1e-5 * std::max(1.0, linf);
        const double rtol = 1e-4 * std::max(1.0, linf);
        const MollifierReport rep = check_mollifier_properties(v, dt, h, ctol, rtol);
        const double scale = std::max(1.0, linf);
        r.max_contraction_excess =
            std::max({r.max_contraction_excess, rep.contraction_excess_l1 / scale,
                      rep.contraction_excess_l2 / scale, rep.contraction_excess_linf / scale});
        r.max_identity_residual =
            std::max({r.max_identity_residual, rep.identity_residual_forward / scale,
                      rep.identity_residual_backward / scale});
        if (!rep.pass) ++r.failures;
    }
    r.pass = r.failures == 0 && r.closed_form_failures == 0;
    return r;
}

RecursionSuiteResult run_recursion_suite() {
    RecursionSuiteResult r;
    auto run_case = [&](const RecursionResult& res) {
        ++r.cases;
        if (!res.bound_held) ++r.bound_failures;
        if (res.diverged) ++r.divergences;
    };
    // powers-of-two grid: thresholds, iterates, and bound factors stay exact
    for (double C : {0.5, 1.0, 2.0})
        for (double b : {2.0, 4.0})
            for (double mu : {0.25, 0.5, 1.0}) {
                const double z0 = recursion_threshold(C, b, mu, mu);
                run_case(run_recursion(C, b, mu, mu, z0, 40));
                run_case(run_recursion(C, b, mu, mu, 0.5 * z0, 40));
            }
    for (double C : {0.5, 2.0}) {
        const double z0 = recursion_threshold(C, 2.0, 0.5, 0.25);
        run_case(run_recursion(C, 2.0, 0.5, 0.25, z0, 40));
    }
    const std::vector<double> chi = {0.25, 0.5, 1.0};
    for (double C : {0.5, 2.0})
        for (double b : {2.0, 4.0}) {
            const double z0 = recursion_threshold_multi(C, b, chi);
            run_case(run_recursion_multi(C, b, chi, z0, 40));
        }
    r.pass = r.bound_failures == 0 && r.divergences == 0;
    return r;
}

namespace {

struct TroisiScenario {
    int dim;
    std::vector<double> p, half_length, radii;
    std::vector<std::int64_t> cells;
    double amplitude;
};

TroisiReport troisi_of(const TroisiScenario& sc) {
    const Anisotropy a = make_anisotropy(sc.dim, 1.0, sc.p);
    const GridSpec g = make_grid(sc.dim, sc.half_length, sc.cells);
    const std::vector<double> field = sample_field(g, [&](const double* x) {
        double val = sc.amplitude;
        for (int i = 0; i < sc.dim; ++i) {
            const double xi = x[i] / sc.radii[i];
            if (std::abs(xi) >= 1.0) return 0.0;
            const double c = std::cos(1.5707963267948966 * xi);
            val *= c * c;
        }
        return val;
    });
    return check_troisi(g, field, a);
}

} // namespace

TroisiSuiteResult run_troisi_suite() {
    TroisiSuiteResult r;

    TroisiScenario base2{2, {1.7, 1.9}, {1.0, 1.2}, {0.5, 0.7}, {64, 80}, 1.0};
    TroisiScenario scaled2 = base2;  // dilate axes by (2, 0.5), triple the amplitude
    scaled2.half_length = {2.0, 0.6};
    scaled2.radii = {1.0, 0.35};
    scaled2.amplitude = 3.0;
    TroisiScenario fine2 = base2;
    fine2.cells = {128, 160};

    TroisiScenario base3{3, {1.5, 1.7, 1.9}, {1.0, 1.0, 1.0}, {0.55, 0.6, 0.65},
                         {32, 32, 32}, 1.0};
    TroisiScenario scaled3 = base3;
    scaled3.half_length = {0.5, 2.0, 1.0};
    scaled3.radii = {0.275, 1.2, 0.65};
    scaled3.amplitude = 0.125;
    TroisiScenario fine3 = base3;
    fine3.cells = {64, 64, 64};

    const double rb2 = troisi_of(base2).ratio, rb3 = troisi_of(base3).ratio;
    r.ratio_base_2d = rb2;
    r.ratio_base_3d = rb3;
    r.scale_rel_diff = std::max(std::abs(troisi_of(scaled2).ratio - rb2) / rb2,
                                std::abs(troisi_of(scaled3).ratio - rb3) / rb3);
    r.refine_rel_diff = std::max(std::abs(troisi_of(fine2).ratio - rb2) / rb2,
                                 std::abs(troisi_of(fine3).ratio - rb3) / rb3);
    r.pass = r.scale_rel_diff <= 1e-12 && r.refine_rel_diff <= 0.10;
    return r;
}

std::string suites_report_json(const ParamSuiteResult& pr, const KernelSuiteResult& kr,
                               const MollifierSuiteResult& mr, const RecursionSuiteResult& rr,
                               const TroisiSuiteResult& tr) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["parameters"] = {{"tuples", pr.tuples},
                       {"max_identity_error", pr.max_identity_error},
                       {"identity_failures", pr.identity_failures},
                       {"implication_failures", pr.implication_failures},
                       {"consistency_failures", pr.consistency_failures},
                       {"seconds", pr.seconds},
                       {"pass", pr.pass}};
    j["kernels"] = {{"trials", kr.trials},
                    {"form_disagreement", kr.form_disagreement},
                    {"r1_min_margin", kr.r1_min_margin},
                    {"r1_max_margin", kr.r1_max_margin},
                    {"r2_min_margin", kr.r2_min_margin},
                    {"r2_max_margin", kr.r2_max_margin},
                    {"hoelder_margin", kr.hoelder_margin},
                    {"negativity_failures", kr.negativity_failures},
                    {"power_violations", kr.power_violations},
                    {"pass", kr.pass}};
    j["mollifier"] = {{"signals", mr.signals},
                      {"max_contraction_excess", mr.max_contraction_excess},
                      {"max_identity_residual", mr.max_identity_residual},
                      {"closed_form_failures", mr.closed_form_failures},
                      {"failures", mr.failures},
                      {"pass", mr.pass}};
    j["recursion"] = {{"cases", rr.cases},
                      {"bound_failures", rr.bound_failures},
                      {"divergences", rr.divergences},
                      {"pass", rr.pass}};
    j["troisi"] = {{"ratio_base_2d", tr.ratio_base_2d},
                   {"ratio_base_3d", tr.ratio_base_3d},
                   {"scale_rel_diff", tr.scale_rel_diff},
                   {"refine_rel_diff", tr.refine_rel_diff},
                   {"pass", tr.pass}};
    j["pass"] = pr.pass && kr.pass && mr.pass && rr.pass && tr.pass;
    return j.dump(2) + "\n";
}

} // namespace anisodiff
