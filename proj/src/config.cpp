#include "anisodiff/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "anisodiff/format.hpp"

namespace anisodiff {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, ',')) out.push_back(trim(item));
    return out;
}

double parse_double(const std::string& key, const std::string& s) {
    try {
        size_t pos = 0;
        const double x = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad number '" + s + "' for " + key);
    }
}

std::int64_t parse_int(const std::string& key, const std::string& s) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::invalid_argument("config: bad integer '" + s + "' for " + key);
    return v;
}

std::vector<double> parse_doubles(const std::string& key, const std::string& s) {
    std::vector<double> out;
    for (const auto& item : split_list(s)) out.push_back(parse_double(key, item));
    return out;
}

std::vector<std::int64_t> parse_ints(const std::string& key, const std::string& s) {
    std::vector<std::int64_t> out;
    for (const auto& item : split_list(s)) out.push_back(parse_int(key, item));
    return out;
}

std::string join(const std::vector<double>& xs) {
    std::string out;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += format_g17(xs[i]);
    }
    return out;
}

std::string join(const std::vector<std::int64_t>& xs) {
    std::string out;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(xs[i]);
    }
    return out;
}

} // namespace

RunConfigFile parse_config(const std::string& text) {
    RunConfigFile c;
    std::set<std::string> seen;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (!seen.insert(key).second)
            throw std::invalid_argument("config: duplicate key " + key);

        if (key == "dim") c.dim = static_cast<int>(parse_int(key, val));
        else if (key == "alpha") c.alpha = parse_double(key, val);
        else if (key == "p") c.p = parse_doubles(key, val);
        else if (key == "lambda") c.lambda_struct = parse_double(key, val);
        else if (key == "grid.half_length") c.half_length = parse_doubles(key, val);
        else if (key == "grid.cells") c.cells = parse_ints(key, val);
        else if (key == "init.kind") c.init_kind = val;
        else if (key == "init.amplitude") c.amplitude = parse_double(key, val);
        else if (key == "init.center") c.center = parse_doubles(key, val);
        else if (key == "init.radii") c.radii = parse_doubles(key, val);
        else if (key == "solver.cfl") c.cfl = parse_double(key, val);
        else if (key == "solver.t_end") c.t_end = parse_double(key, val);
        else if (key == "solver.eps_grad") c.eps_grad = parse_double(key, val);
        else if (key == "solver.record_every") c.record_every = parse_int(key, val);
        else if (key == "solver.dt_min") c.dt_min = parse_double(key, val);
        else if (key == "solver.support_threshold") c.support_threshold = parse_double(key, val);
        else if (key == "solver.seed") c.seed = static_cast<std::uint64_t>(parse_int(key, val));
        else if (key == "snapshot.times") c.snapshot_times = parse_doubles(key, val);
        else if (key == "output.csv") c.csv_path = val;
        else if (key == "output.snapshots") c.snapshot_dir = val;
        else if (key == "output.summary") c.summary_path = val;
        else throw std::invalid_argument("config: unknown key " + key);
    }
    for (const char* req : {"dim", "alpha", "p", "grid.half_length", "grid.cells",
                            "init.radii", "solver.t_end"})
        if (!seen.count(req))
            throw std::invalid_argument(std::string("config: missing required key ") + req);
    if (c.center.empty()) c.center.assign(c.p.size(), 0.0);
    return c;
}

RunConfigFile load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfigFile& c) {
    std::ostringstream o;
    o << "dim = " << c.dim << "\n";
    o << "alpha = " << format_g17(c.alpha) << "\n";
    o << "p = " << join(c.p) << "\n";
    o << "lambda = " << format_g17(c.lambda_struct) << "\n";
    o << "grid.half_length = " << join(c.half_length) << "\n";
    o << "grid.cells = " << join(c.cells) << "\n";
    o << "init.kind = " << c.init_kind << "\n";
    o << "init.amplitude = " << format_g17(c.amplitude) << "\n";
    o << "init.center = " << join(c.center) << "\n";
    o << "init.radii = " << join(c.radii) << "\n";
    o << "solver.cfl = " << format_g17(c.cfl) << "\n";
    o << "solver.t_end = " << format_g17(c.t_end) << "\n";
    o << "solver.eps_grad = " << format_g17(c.eps_grad) << "\n";
    o << "solver.record_every = " << c.record_every << "\n";
    o << "solver.dt_min = " << format_g17(c.dt_min) << "\n";
    o << "solver.support_threshold = " << format_g17(c.support_threshold) << "\n";
    o << "solver.seed = " << c.seed << "\n";
    if (!c.snapshot_times.empty()) o << "snapshot.times = " << join(c.snapshot_times) << "\n";
    if (!c.csv_path.empty()) o << "output.csv = " << c.csv_path << "\n";
    if (!c.snapshot_dir.empty()) o << "output.snapshots = " << c.snapshot_dir << "\n";
    if (!c.summary_path.empty()) o << "output.summary = " << c.summary_path << "\n";
    return o.str();
}

SolverConfig build_solver_config(const RunConfigFile& c) {
    SolverConfig cfg{.aniso = make_anisotropy(c.dim, c.alpha, c.p, c.lambda_struct),
                     .grid = make_grid(c.dim, c.half_length, c.cells),
                     .init = {},
                     .cfl = c.cfl,
                     .t_end = c.t_end,
                     .eps_grad = c.eps_grad,
                     .eps_v = 1e-300,
                     .record_every = c.record_every,
                     .dt_min = c.dt_min,
                     .support_threshold = c.support_threshold,
                     .snapshot_times = c.snapshot_times,
                     .csv_path = c.csv_path,
                     .snapshot_dir = c.snapshot_dir,
                     .summary_path = c.summary_path,
                     .seed = c.seed};
    if (c.init_kind == "box") cfg.init.kind = InitKind::box;
    else if (c.init_kind == "cosine_bump") cfg.init.kind = InitKind::cosine_bump;
    else if (c.init_kind == "gaussian_truncated") cfg.init.kind = InitKind::gaussian_truncated;
    else throw std::invalid_argument("config: unknown init.kind " + c.init_kind);
    cfg.init.amplitude = c.amplitude;
    cfg.init.center = c.center;
    cfg.init.radii = c.radii;
    return cfg;
}

} // namespace anisodiff
