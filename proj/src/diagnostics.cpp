#include "anisodiff/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace anisodiff {

PowerLawFit fit_power_law(const std::vector<double>& t, const std::vector<double>& y,
                          double t_lo, double t_hi) {
    if (t.size() != y.size()) throw std::invalid_argument("fit: t and y sizes differ");
    std::vector<double> lt, ly;
    for (size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t_lo || t[i] > t_hi) continue;
        if (!(t[i] > 0.0) || !(y[i] > 0.0)) continue;
        lt.push_back(std::log(t[i]));
        ly.push_back(std::log(y[i]));
    }
    const int n = static_cast<int>(lt.size());
    if (n < 5) throw std::invalid_argument("fit: needs >= 5 usable points, got " +
                                           std::to_string(n));
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) {
        mx += lt[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (int i = 0; i < n; ++i) {
        const double dx = lt[i] - mx, dy = ly[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("fit: degenerate abscissa (all t equal)");

    PowerLawFit f;
    f.n_points = n;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    if (syy > 0.0) {
        double ss_res = 0.0;
        for (int i = 0; i < n; ++i) {
            const double r = ly[i] - (f.intercept + f.slope * lt[i]);
            ss_res += r * r;
        }
        f.r_squared = std::max(0.0, 1.0 - ss_res / syy);
    } else {
        f.r_squared = 1.0;  // constant signal fitted exactly by slope 0
    }
    return f;
}

UltracontractivityVerdict check_ultracontractivity(const std::vector<TimeSeriesRecord>& recs,
                                                   const DerivedExponents& e, double u0_l1,
                                                   double t_lo, double t_hi, double tol) {
    if (!(u0_l1 > 0.0)) throw std::invalid_argument("ultracontractivity: ||u0||_1 must be > 0");
    std::vector<double> t, y;
    for (const auto& r : recs) {
        t.push_back(r.t);
        y.push_back(r.linf_u);
    }
    UltracontractivityVerdict v;
    v.fit = fit_power_law(t, y, t_lo, t_hi);
    v.slope_target = -e.mass_decay_exponent;
    v.rel_deviation = std::abs(v.fit.slope - v.slope_target) / std::abs(v.slope_target);

    const double mass_pow = std::pow(u0_l1, e.mass_gain_exponent);
    bool first = true;
    for (const auto& r : recs) {
        if (r.t < t_lo || r.t > t_hi || !(r.t > 0.0) || !(r.linf_u > 0.0)) continue;
        const double c = r.linf_u * std::pow(r.t, e.mass_decay_exponent) / mass_pow;
        if (first) {
            v.prefactor_min = v.prefactor_max = c;
            first = false;
        } else {
            v.prefactor_min = std::min(v.prefactor_min, c);
            v.prefactor_max = std::max(v.prefactor_max, c);
        }
    }
    v.pass = v.rel_deviation <= tol && std::isfinite(v.prefactor_max);
    return v;
}

SupportLawVerdict check_support_law(const std::vector<TimeSeriesRecord>& recs,
                                    const Anisotropy& a, const DerivedExponents& e, double R0,
                                    double t_lo, double t_hi, double tol) {
    if (!regime_flags(a).slow_diffusion)
        throw std::invalid_argument("support law: requires the slow-diffusion regime");
    if (!(R0 > 0.0)) throw std::invalid_argument("support law: R0 must be positive");
    const int d = a.dim;

    SupportLawVerdict v;
    v.fits.resize(d);
    v.slope_target.resize(d);
    v.rel_deviation.resize(d);

    std::vector<double> t;
    std::vector<std::vector<double>> y(d);
    for (const auto& r : recs) {
        bool grown = true;
        for (int i = 0; i < d; ++i) grown = grown && r.supp[i] >= 4.0 * R0;
        if (!grown) continue;
        t.push_back(r.t);
        for (int i = 0; i < d; ++i) y[i].push_back(r.supp[i] - 2.0 * R0);
    }

    bool all_ok = true;
    for (int i = 0; i < d; ++i) {
        v.fits[i] = fit_power_law(t, y[i], t_lo, t_hi);
        v.slope_target[i] = e.support_exponent[i];
        v.rel_deviation[i] = std::abs(v.fits[i].slope - v.slope_target[i]) /
                             std::abs(v.slope_target[i]);
        all_ok = all_ok && v.rel_deviation[i] <= tol;
    }

    // measured slopes must decrease strictly along increasing p_i
    std::vector<int> order(d);
    for (int j = 0; j < d; ++j) order[j] = a.axis_order[j];  // axes sorted by p
    v.ranking_strictly_decreasing = true;
    for (int j = 0; j + 1 < d; ++j)
        if (!(v.fits[order[j]].slope > v.fits[order[j + 1]].slope))
            v.ranking_strictly_decreasing = false;

    v.pass = all_ok && v.ranking_strictly_decreasing;
    return v;
}

RectangleOptimalityVerdict check_rectangle_optimality(
    const std::vector<TimeSeriesRecord>& recs, double u0_l1, double support_threshold,
    double domain_volume, double t_lo, double t_hi, double ratio_floor) {
    if (!(u0_l1 > 0.0)) throw std::invalid_argument("rectangle: ||u0||_1 must be > 0");
    RectangleOptimalityVerdict v;
    v.lower_chain_ok = true;
    v.worst_chain_slack = 0.0;
    bool first = true;
    for (const auto& r : recs) {
        double box = 1.0;
        for (double s : r.supp) box *= 2.0 * s;
        // Holder chain: everything above threshold lives in the support box,
        // the rest carries at most threshold * |domain| of mass.
        const double slack = r.linf_u * box + support_threshold * domain_volume - r.l1_u;
        v.worst_chain_slack = std::min(v.worst_chain_slack, slack);
        if (slack < -1e-13 * std::max(1.0, r.l1_u)) v.lower_chain_ok = false;

        if (r.t < t_lo || r.t > t_hi) continue;
        const double ratio = r.linf_u * box / u0_l1;
        if (first) {
            v.ratio_min = v.ratio_max = ratio;
            first = false;
        } else {
            v.ratio_min = std::min(v.ratio_min, ratio);
            v.ratio_max = std::max(v.ratio_max, ratio);
        }
    }
    if (first) throw std::invalid_argument("rectangle: no records inside the window");
    v.pass = v.lower_chain_ok && v.ratio_min >= ratio_floor && std::isfinite(v.ratio_max);
    return v;
}

std::vector<TimeSeriesRecord> read_records_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open CSV " + path);
    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error("empty CSV " + path);

    int dim = 0;
    {
        std::stringstream ss(line);
        std::string col;
        std::vector<std::string> cols;
        while (std::getline(ss, col, ',')) cols.push_back(col);
        const std::vector<std::string> fixed = {"step", "t",         "dt",    "mass_v",
                                                "l1_u", "lalpha1_u", "linf_u"};
        if (cols.size() < fixed.size() + 1)
            throw std::runtime_error("CSV header too short in " + path);
        for (size_t i = 0; i < fixed.size(); ++i)
            if (cols[i] != fixed[i])
                throw std::runtime_error("unexpected CSV column '" + cols[i] + "' in " + path);
        dim = static_cast<int>(cols.size() - fixed.size());
    }

    std::vector<TimeSeriesRecord> out;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
        if (static_cast<int>(vals.size()) != 7 + dim)
            throw std::runtime_error("bad CSV row in " + path);
        TimeSeriesRecord r;
        r.step = static_cast<std::int64_t>(vals[0]);
        r.t = vals[1];
        r.dt = vals[2];
        r.mass_v = vals[3];
        r.l1_u = vals[4];
        r.lalpha1_u = vals[5];
        r.linf_u = vals[6];
        r.supp.assign(vals.begin() + 7, vals.end());
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace anisodiff
