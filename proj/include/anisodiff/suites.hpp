#pragma once

#include <cstdint>
#include <string>

// Self-contained property suites shared by the `check` subcommand and the
// acceptance gate. Every tolerance is pinned inside the runner; results carry
// the observed extremes plus a pass flag.

namespace anisodiff {

struct ParamSuiteResult {
    int tuples = 0;
    double max_identity_error = 0.0;    // worst sum-identity error seen
    int identity_failures = 0;
    int implication_failures = 0;       // slow => rough => ultracontractive
    int consistency_failures = 0;       // cross-checks between derived values
    double seconds = 0.0;
    bool pass = false;
};
ParamSuiteResult run_param_suite(int tuples, std::uint64_t seed);

struct KernelSuiteResult {
    int trials = 0;
    double form_disagreement = 0.0;  // max |b - b_alt| / (s^{1+a} + |b|)
    // signed envelope margins, min over trials (negative = violation):
    double r1_min_margin = 1e300;    // b/(A-B)^2        - alpha/2
    double r1_max_margin = 1e300;    // 2/(1+alpha)      - b/(A-B)^2
    double r2_min_margin = 1e300;    // weighted ratio   - alpha/2
    double r2_max_margin = 1e300;    // 2^{1-alpha}      - weighted ratio
    double hoelder_margin = 1e300;   // 2^{1-a}|v-w|^{1+a} + guard - b
    int negativity_failures = 0;
    int power_violations = 0;        // |a-b|^g <= 2^{g-1} |a^g - b^g|
    bool pass = false;
};
KernelSuiteResult run_kernel_suite(int trials, std::uint64_t seed);

struct MollifierSuiteResult {
    int signals = 0;
    double max_contraction_excess = 0.0;  // relative to ||v||_inf
    double max_identity_residual = 0.0;   // relative to max(1, ||v||_inf)
    int closed_form_failures = 0;         // constant / ramp signals vs closed forms
    int failures = 0;
    bool pass = false;
};
MollifierSuiteResult run_mollifier_suite(int signals, std::uint64_t seed);

struct RecursionSuiteResult {
    int cases = 0;
    int bound_failures = 0;
    int divergences = 0;
    bool pass = false;
};
RecursionSuiteResult run_recursion_suite();

struct TroisiSuiteResult {
    double ratio_base_2d = 0.0;
    double ratio_base_3d = 0.0;
    double scale_rel_diff = 0.0;   // worst drift under anisotropic dilation + amplitude
    double refine_rel_diff = 0.0;  // worst drift under grid doubling
    bool pass = false;
};
TroisiSuiteResult run_troisi_suite();

std::string suites_report_json(const ParamSuiteResult& pr, const KernelSuiteResult& kr,
                               const MollifierSuiteResult& mr, const RecursionSuiteResult& rr,
                               const TroisiSuiteResult& tr);

} // namespace anisodiff
