// Command line front end; every computation goes through the C API in
// nodal.h.  Exit codes: 0 success, 1 numerical failure, 2 invalid usage or
// configuration.

#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nodal.h"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct CliError {
    int code;
    std::string message;
};

[[noreturn]] void fail(int code, const std::string& msg) { throw CliError{code, msg}; }

void check(nodal_status st, const std::string& stage) {
    if (st == NODAL_OK) return;
    int code = (st == NODAL_ERR_CONFIG || st == NODAL_ERR_INVALID_ARG ||
                st == NODAL_ERR_PRECONDITION || st == NODAL_ERR_DOMAIN ||
                st == NODAL_ERR_INDEX)
                   ? 2
                   : 1;
    fail(code, stage + ": " + nodal_last_error());
}

struct WeightHandle {
    nodal_weight* w = nullptr;
    ~WeightHandle() { nodal_weight_free(w); }
};

// "sine:2", "paper-a", "constant:1.0"
void parse_weight(const std::string& spec, WeightHandle& out, const char* what) {
    if (spec.rfind("sine:", 0) == 0) {
        int n = std::atoi(spec.c_str() + 5);
        check(nodal_weight_sine(n, &out.w), what);
        return;
    }
    if (spec == "paper-a") {
        check(nodal_weight_paper_a(&out.w), what);
        return;
    }
    if (spec.rfind("constant:", 0) == 0) {
        check(nodal_weight_constant(std::atof(spec.c_str() + 9), &out.w), what);
        return;
    }
    fail(2, std::string(what) + ": unknown weight '" + spec +
                "' (expected sine:N, paper-a or constant:V)");
}

// "lo:hi" or "lo..hi"
std::pair<double, double> parse_range(const std::string& s) {
    auto sep = s.find("..");
    std::size_t skip = 2;
    if (sep == std::string::npos) {
        sep = s.find(':', 1);  // allow a leading minus sign
        skip = 1;
    }
    if (sep == std::string::npos) fail(2, "bad range '" + s + "' (expected lo:hi)");
    return {std::atof(s.substr(0, sep).c_str()), std::atof(s.substr(sep + skip).c_str())};
}

std::pair<int, int> parse_mode_range(const std::string& s) {
    auto sep = s.find("..");
    if (sep == std::string::npos) {
        int m = std::atoi(s.c_str());
        return {m, m};
    }
    return {std::atoi(s.substr(0, sep).c_str()), std::atoi(s.substr(sep + 2).c_str())};
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::atof(item.c_str()));
    return out;
}

std::string format12(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// ---------------------------------------------------------------------
// run configuration: config file + flag overrides

struct RunConfig {
    std::string m = "sine:2";
    std::string a = "paper-a";
    std::string scheme = "spectral";
    int n_interior = 2000;
    int n_modes = 64;
    double mu = 0.0;
    bool mu_set = false;
    std::vector<double> mu_list;
    std::string modes = "1..5";
    double range_lo = -200.0, range_hi = 200.0;
    double step = 0.5;
    std::string out;
    std::string out_dir;
    int jobs = 1;
    unsigned long long seed = 0;
    double eps = 0.05;
    double norm_cap = 50.0;
    int trace_n_interior = 300;
    double trace_tol = 1e-8;
    int max_points = 4000;
};

// key = value lines; values: number, "string", or inline table {k=v, ...}
std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(2, "cannot read config file " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    auto trim = [](std::string s) {
        auto a = s.find_first_not_of(" \t\r");
        auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) fail(2, "config: missing '=' in line: " + line);
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (!val.empty() && val.front() == '{') {
            if (val.back() != '}') fail(2, "config: unterminated table in line: " + line);
            std::string inner = val.substr(1, val.size() - 2);
            std::stringstream ss(inner);
            std::string part;
            while (std::getline(ss, part, ',')) {
                auto peq = part.find('=');
                if (peq == std::string::npos) fail(2, "config: bad table entry: " + part);
                kv[key + "." + trim(part.substr(0, peq))] = trim(part.substr(peq + 1));
            }
        } else {
            kv[key] = val;
        }
    }
    return kv;
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
        return s.substr(1, s.size() - 2);
    return s;
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
    auto kv = parse_config_file(path);
    auto weight_from_table = [&](const std::string& prefix) -> std::optional<std::string> {
        auto type = kv.find(prefix + ".type");
        if (type == kv.end()) return std::nullopt;
        std::string t = unquote(type->second);
        if (t == "sine") {
            auto n = kv.find(prefix + ".n");
            if (n == kv.end()) fail(2, "config: sine weight needs n");
            return "sine:" + n->second;
        }
        if (t == "paper-a") return "paper-a";
        if (t == "constant") {
            auto v = kv.find(prefix + ".value");
            if (v == kv.end()) fail(2, "config: constant weight needs value");
            return "constant:" + v->second;
        }
        fail(2, "config: unknown weight type " + t);
    };
    std::map<std::string, bool> used;
    for (const auto& [k, v] : kv) used[k] = false;

    auto take = [&](const std::string& key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        used[key] = true;
        return unquote(it->second);
    };
    if (auto w = weight_from_table("m")) {
        cfg.m = *w;
        used["m.type"] = used["m.n"] = true;
    } else if (auto w2 = take("m")) {
        cfg.m = *w2;
    }
    if (auto w = weight_from_table("a")) {
        cfg.a = *w;
        used["a.type"] = used["a.value"] = true;
    } else if (auto w2 = take("a")) {
        cfg.a = *w2;
    }
    if (auto v = take("scheme")) cfg.scheme = *v;
    if (auto v = take("n_interior")) cfg.n_interior = std::atoi(v->c_str());
    if (auto v = take("n_modes")) cfg.n_modes = std::atoi(v->c_str());
    if (auto v = take("mu")) { cfg.mu = std::atof(v->c_str()); cfg.mu_set = true; }
    if (auto v = take("mu_list")) cfg.mu_list = parse_list(*v);
    if (auto v = take("modes")) cfg.modes = *v;
    if (auto v = take("range")) std::tie(cfg.range_lo, cfg.range_hi) = parse_range(*v);
    if (auto v = take("step")) cfg.step = std::atof(v->c_str());
    if (auto v = take("out")) cfg.out = *v;
    if (auto v = take("out_dir")) cfg.out_dir = *v;
    if (auto v = take("jobs")) cfg.jobs = std::atoi(v->c_str());
    if (auto v = take("seed")) cfg.seed = std::strtoull(v->c_str(), nullptr, 10);
    if (auto v = take("eps")) cfg.eps = std::atof(v->c_str());
    if (auto v = take("norm_cap")) cfg.norm_cap = std::atof(v->c_str());
    if (auto v = take("trace_n_interior")) cfg.trace_n_interior = std::atoi(v->c_str());
    if (auto v = take("trace_tol")) cfg.trace_tol = std::atof(v->c_str());
    if (auto v = take("max_points")) cfg.max_points = std::atoi(v->c_str());

    for (const auto& [k, was_used] : used)
        if (!was_used) fail(2, "config: unknown key '" + k + "'");
}

// output root: --out/--out-dir joined under NODAL_OUT_ROOT when relative
fs::path resolve_out(const std::string& p) {
    fs::path path(p);
    if (path.is_absolute()) return path;
    if (const char* root = std::getenv("NODAL_OUT_ROOT")) return fs::path(root) / path;
    return path;
}

struct Manifest {
    json doc;
    std::vector<std::string> artifacts;
    std::map<std::string, double> timings;
    json checks = json::object();
    bool all_checks_passed = true;

    void add_artifact(const fs::path& p) { artifacts.push_back(p.string()); }
    void add_check(const std::string& name, bool ok, const json& detail = {}) {
        json entry;
        entry["passed"] = ok;
        if (!detail.is_null()) entry["detail"] = detail;
        checks[name] = entry;
        if (!ok) all_checks_passed = false;
    }
    void write(const fs::path& dir) {
        doc["version"] = nodal_version();
        doc["artifacts"] = artifacts;
        json t = json::object();
        for (auto& [k, v] : timings) t[k] = v;
        doc["timings_ms"] = t;
        doc["checks"] = checks;
        fs::create_directories(dir);
        std::ofstream out(dir / "manifest.json", std::ios::binary);
        out << doc.dump(2) << "\n";
    }
};

class Stopwatch {
  public:
    explicit Stopwatch(Manifest& m, std::string name)
        : m_(m), name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}
    ~Stopwatch() {
        auto end = std::chrono::steady_clock::now();
        m_.timings[name_] =
            std::chrono::duration<double, std::milli>(end - start_).count();
    }

  private:
    Manifest& m_;
    std::string name_;
    std::chrono::steady_clock::time_point start_;
};

json config_json(const RunConfig& c) {
    json j;
    j["m"] = c.m;
    j["a"] = c.a;
    j["scheme"] = c.scheme;
    j["n_interior"] = c.n_interior;
    j["n_modes"] = c.n_modes;
    if (c.mu_set) j["mu"] = c.mu;
    if (!c.mu_list.empty()) j["mu_list"] = c.mu_list;
    j["modes"] = c.modes;
    j["range"] = {c.range_lo, c.range_hi};
    j["step"] = c.step;
    j["jobs"] = c.jobs;
    j["seed"] = c.seed;
    j["eps"] = c.eps;
    j["norm_cap"] = c.norm_cap;
    j["trace_n_interior"] = c.trace_n_interior;
    j["trace_tol"] = c.trace_tol;
    return j;
}

nodal_scheme scheme_of(const RunConfig& cfg) {
    if (cfg.scheme == "fd") return NODAL_SCHEME_FD;
    if (cfg.scheme == "spectral") return NODAL_SCHEME_SPECTRAL;
    fail(2, "unknown scheme '" + cfg.scheme + "' (fd|spectral)");
}

nodal_continuation_options trace_options(const RunConfig& cfg) {
    nodal_continuation_options o;
    nodal_continuation_options_default(&o);
    o.n_interior = cfg.trace_n_interior;
    o.norm_cap = cfg.norm_cap;
    o.eps = cfg.eps;
    o.tol = cfg.trace_tol;
    o.max_points = cfg.max_points;
    o.lambda_lo = std::min(cfg.range_lo, -450.0);
    o.lambda_hi = std::max(cfg.range_hi, 450.0);
    o.seed = cfg.seed;
    return o;
}

// ---------------------------------------------------------------------
// subcommand bodies

struct CurveHandle {
    nodal_curve* c = nullptr;
    ~CurveHandle() { nodal_curve_free(c); }
};
struct SetHandle {
    nodal_branch_set* s = nullptr;
    ~SetHandle() { nodal_branch_set_free(s); }
};
struct DiagramHandle {
    nodal_diagram* d = nullptr;
    ~DiagramHandle() { nodal_diagram_free(d); }
};

int run_eigencurves(const RunConfig& cfg, const std::string& svg_out) {
    Manifest man;
    man.doc["command"] = "eigencurves";
    man.doc["config"] = config_json(cfg);

    auto [mlo, mhi] = parse_mode_range(cfg.modes);
    if (mlo != 1) fail(2, "eigencurves: modes must start at 1 (got " + cfg.modes + ")");
    WeightHandle m;
    parse_weight(cfg.m, m, "m");

    fs::path out = resolve_out(cfg.out.empty() ? "curves.csv" : cfg.out);
    fs::create_directories(out.parent_path().empty() ? fs::path(".") : out.parent_path());

    CurveHandle curve;
    {
        Stopwatch sw(man, "sample");
        check(nodal_curve_sample(m.w, mhi, cfg.range_lo, cfg.range_hi, cfg.step,
                                 scheme_of(cfg),
                                 cfg.scheme == "fd" ? cfg.n_interior : cfg.n_modes,
                                 cfg.jobs, &curve.c),
              "sample");
    }
    check(nodal_curve_export_csv(curve.c, out.string().c_str()), "export");
    man.add_artifact(out);

    if (!svg_out.empty()) {
        fs::path svg = resolve_out(svg_out);
        DiagramHandle d;
        check(nodal_diagram_new("eigencurves", &d.d), "diagram");
        check(nodal_diagram_add_curves(d.d, curve.c), "diagram");
        check(nodal_diagram_render_svg(d.d, svg.string().c_str(), 900, 600), "svg");
        man.add_artifact(svg);
    }
    man.write(out.parent_path().empty() ? fs::path(".") : out.parent_path());
    return 0;
}

int run_verify_theorem(const RunConfig& cfg, int k) {
    Manifest man;
    man.doc["command"] = "verify-theorem";
    man.doc["config"] = config_json(cfg);
    man.doc["k"] = k;

    auto [mlo, mhi] = parse_mode_range(cfg.modes);
    if (mlo <= k) mlo = k + 1;
    fs::path out = resolve_out(cfg.out.empty() ? "theorem21.csv" : cfg.out);
    fs::create_directories(out.parent_path().empty() ? fs::path(".") : out.parent_path());
    std::ofstream csv(out, std::ios::binary);
    if (!csv) fail(1, "cannot write " + out.string());
    csv << "n,k,closed_form,quadrature_2_15,curve_fd,quad_vs_closed,curvefd_rel_err\n";

    bool all_ok = true;
    Stopwatch sw(man, "verify");
    for (int n = mlo; n <= mhi; ++n) {
        double closed = 0, quad = 0, curve = 0;
        check(nodal_sigma_ddot_zero(n, k, NODAL_ROUTE_CLOSED_FORM, &closed), "closed");
        check(nodal_sigma_ddot_zero(n, k, NODAL_ROUTE_QUADRATURE_2_15, &quad), "quad");
        check(nodal_sigma_ddot_zero(n, k, NODAL_ROUTE_CURVE_FD, &curve), "curvefd");
        double dq = std::abs(quad - closed);
        double rel = std::abs(curve - closed) / std::abs(closed);
        bool ok = dq <= 1e-6 && std::abs(curve - closed) <= 1e-4 * std::abs(closed) + 1e-6;
        all_ok = all_ok && ok;
        man.add_check("n=" + std::to_string(n), ok,
                      {{"closed", closed}, {"quadrature", quad}, {"curve_fd", curve}});
        csv << n << ',' << k << ',' << format12(closed) << ',' << format12(quad) << ','
            << format12(curve) << ',' << format12(dq) << ',' << format12(rel) << '\n';
        std::printf("n=%d k=%d closed=%.8g quadrature=%.8g curve_fd=%.8g %s\n", n, k,
                    closed, quad, curve, ok ? "ok" : "MISMATCH");
    }
    man.add_artifact(out);
    man.write(out.parent_path().empty() ? fs::path(".") : out.parent_path());
    return all_ok ? 0 : 1;
}

int run_bifpoints(const RunConfig& cfg) {
    if (!cfg.mu_set) fail(2, "bifpoints: --mu is required");
    Manifest man;
    man.doc["command"] = "bifpoints";
    man.doc["config"] = config_json(cfg);

    auto [mlo, mhi] = parse_mode_range(cfg.modes);
    WeightHandle m;
    parse_weight(cfg.m, m, "m");

    std::vector<nodal_root> roots(64);
    size_t count = 0;
    {
        Stopwatch sw(man, "detect");
        check(nodal_bifurcation_values(m.w, cfg.mu, mlo, mhi, cfg.range_lo, cfg.range_hi,
                                       cfg.step, roots.data(), roots.size(), &count),
              "bifpoints");
    }
    count = std::min(count, roots.size());
    for (size_t i = 0; i < count; ++i)
        std::printf("mode=%d lambda=%.10g slope=%.6g%s\n", roots[i].mode,
                    roots[i].lambda, roots[i].slope,
                    roots[i].at_boundary ? " (boundary)" : "");

    if (!cfg.out.empty()) {
        fs::path out = resolve_out(cfg.out);
        fs::create_directories(out.parent_path().empty() ? fs::path(".")
                                                         : out.parent_path());
        std::ofstream csv(out, std::ios::binary);
        csv << "mode,label,lambda,mu,slope,boundary\n";
        for (size_t i = 0; i < count; ++i)
            csv << roots[i].mode << ',' << roots[i].label << ','
                << format12(roots[i].lambda) << ',' << format12(roots[i].mu) << ','
                << format12(roots[i].slope) << ',' << roots[i].at_boundary << '\n';
        man.add_artifact(out);
        man.write(out.parent_path().empty() ? fs::path(".") : out.parent_path());
    }
    return 0;
}

int trace_one_mu(const RunConfig& cfg, double mu, int mode, const fs::path& csv_pattern,
                 const std::string& svg_out, Manifest& man) {
    WeightHandle m, a;
    parse_weight(cfg.m, m, "m");
    parse_weight(cfg.a, a, "a");
    nodal_continuation_options opts = trace_options(cfg);

    SetHandle set;
    check(nodal_trace_at_mu(m.w, a.w, mu, mode, &opts, cfg.jobs, &set.s), "trace");

    size_t nb = 0;
    check(nodal_branch_set_count(set.s, &nb), "trace");
    int comps = 0;
    check(nodal_branch_set_components(set.s, &comps), "trace");
    std::printf("mu=%.6g mode=%d: %zu branches, %d components\n", mu, mode, nb, comps);

    if (nb > 0) {
        check(nodal_branch_set_export_csv(set.s, csv_pattern.string().c_str()), "export");
        for (size_t i = 0; i < nb; ++i) {
            std::string p = csv_pattern.string();
            auto star = p.find('*');
            if (star != std::string::npos)
                p = p.substr(0, star) + std::to_string(i) + p.substr(star + 1);
            man.add_artifact(p);
        }
    }
    if (!svg_out.empty()) {
        DiagramHandle d;
        std::string title = "mu = " + format12(mu);
        check(nodal_diagram_new(title.c_str(), &d.d), "diagram");
        check(nodal_diagram_add_branch_set(d.d, set.s), "diagram");
        std::vector<nodal_root> roots(16);
        size_t rc = 0;
        check(nodal_bifurcation_values(m.w, mu, mode, mode, opts.lambda_lo,
                                       opts.lambda_hi, 2.0, roots.data(), roots.size(),
                                       &rc),
              "bifpoints");
        check(nodal_diagram_annotate_roots(d.d, roots.data(), std::min(rc, roots.size())),
              "diagram");
        fs::path svg = resolve_out(svg_out);
        check(nodal_diagram_render_svg(d.d, svg.string().c_str(), 900, 600), "svg");
        man.add_artifact(svg);
    }
    man.doc["components"] = comps;
    return 0;
}

int run_branch(const RunConfig& cfg, const std::string& svg_out) {
    if (!cfg.mu_set) fail(2, "branch: --mu is required");
    Manifest man;
    man.doc["command"] = "branch";
    man.doc["config"] = config_json(cfg);
    auto [mlo, mhi] = parse_mode_range(cfg.modes);
    if (mlo != mhi) fail(2, "branch: exactly one mode expected");

    fs::path out = resolve_out(cfg.out.empty() ? "branch_*.csv" : cfg.out);
    fs::create_directories(out.parent_path().empty() ? fs::path(".") : out.parent_path());
    Stopwatch sw(man, "trace");
    int rc = trace_one_mu(cfg, cfg.mu, mlo, out, svg_out, man);
    man.write(out.parent_path().empty() ? fs::path(".") : out.parent_path());
    return rc;
}

int run_sweep(const RunConfig& cfg) {
    if (cfg.mu_list.empty()) fail(2, "sweep: --mu-list is required");
    Manifest man;
    man.doc["command"] = "sweep";
    man.doc["config"] = config_json(cfg);
    auto [mlo, mhi] = parse_mode_range(cfg.modes);
    if (mlo != mhi) fail(2, "sweep: exactly one mode expected");

    fs::path dir = resolve_out(cfg.out_dir.empty() ? "sweep" : cfg.out_dir);
    fs::create_directories(dir);
    for (double mu : cfg.mu_list) {
        std::string tag = format12(mu);
        for (auto& ch : tag)
            if (ch == '.') ch = 'p';
        Stopwatch sw(man, "mu=" + tag);
        fs::path pattern = dir / ("branch_mu" + tag + "_*.csv");
        fs::path svg = dir / ("diagram_mu" + tag + ".svg");
        trace_one_mu(cfg, mu, mlo, pattern, svg.string(), man);
    }
    man.write(dir);
    return 0;
}

int run_plot(const std::vector<std::string>& inputs, const std::string& out_svg,
             const std::string& title) {
    if (inputs.empty()) fail(2, "plot: need at least one --in file");
    DiagramHandle d;
    check(nodal_diagram_new(title.c_str(), &d.d), "diagram");
    for (const auto& in : inputs)
        check(nodal_diagram_add_branch_csv(d.d, in.c_str()), "plot: " + in);
    fs::path svg = resolve_out(out_svg.empty() ? "fig.svg" : out_svg);
    if (!svg.parent_path().empty()) fs::create_directories(svg.parent_path());
    check(nodal_diagram_render_svg(d.d, svg.string().c_str(), 900, 600), "svg");
    std::printf("wrote %s\n", svg.string().c_str());
    return 0;
}

// ---------------------------------------------------------------------
// reproduce recipes (desk-scale fixtures of the reference figures)

int reproduce_curve_fig(const std::string& id, const fs::path& dir, int jobs) {
    struct Entry {
        const char* weight;
        const char* name;
    };
    std::vector<Entry> entries;
    if (id == "fig1") entries = {{"sine:2", "fig1"}};
    if (id == "fig2") entries = {{"sine:4", "fig2a"}, {"sine:6", "fig2b"}};
    if (id == "fig3") entries = {{"sine:3", "fig3a"}, {"sine:5", "fig3b"}};
    fs::create_directories(dir);
    for (const auto& e : entries) {
        RunConfig c;
        c.m = e.weight;
        c.scheme = "fd";
        c.n_interior = 2000;
        c.modes = "1..5";
        c.range_lo = -200;
        c.range_hi = 200;
        c.step = 0.5;
        c.jobs = jobs;
        c.out = (dir / (std::string(e.name) + "_curves.csv")).string();
        int rc = run_eigencurves(c, (dir / (std::string(e.name) + ".svg")).string());
        if (rc != 0) return rc;
    }
    return 0;
}

int reproduce_branch_fig(const std::string& id, const fs::path& dir, int jobs) {
    RunConfig c;
    c.jobs = jobs;
    c.out_dir = dir.string();
    if (id == "fig4") {
        c.modes = "2";
        c.mu_list = {35.0, 39.6, 45.0};
        c.norm_cap = 16.0;  // the mu=39.6 connecting arcs peak near 13
        int rc = run_sweep(c);
        if (rc != 0) return rc;
        // mu = 54 > mu_2: isolas found by homotopy from the mu = 45 branches
        WeightHandle m, a;
        parse_weight(c.m, m, "m");
        parse_weight(c.a, a, "a");
        nodal_continuation_options opts = trace_options(c);
        opts.norm_cap = 26.0;
        SetHandle src;
        check(nodal_trace_at_mu(m.w, a.w, 45.0, 2, &opts, jobs, &src.s), "trace mu=45");
        size_t nb = 0;
        check(nodal_branch_set_count(src.s, &nb), "trace mu=45");
        Manifest man;
        man.doc["command"] = "reproduce fig4d";
        for (size_t i = 0; i < nb; i += 2) {  // one direction per onset point
            SetHandle iso;
            nodal_continuation_options hopts = opts;
            hopts.norm_cap = 30.0;
            if (nodal_mu_homotopy(src.s, i, 54.0, 18, &hopts, &iso.s) != NODAL_OK)
                continue;
            const nodal_branch* br = nullptr;
            check(nodal_branch_set_get(iso.s, 0, &br), "homotopy");
            fs::path csv = dir / ("branch_mu54_" + std::to_string(i / 2) + ".csv");
            check(nodal_branch_export_csv(br, csv.string().c_str()), "export");
            man.add_artifact(csv);
        }
        man.write(dir);
        return 0;
    }
    if (id == "fig6") {
        c.modes = "3";
        c.mu_list = {105.0, 108.1, 110.0};
        c.norm_cap = 60.0;  // near mu_c the connecting arcs climb past 48
        return run_sweep(c);
    }
    return 2;
}

int reproduce_profile_fig(const std::string& id, const fs::path& dir, int jobs) {
    // profiles of selected solutions along one traced component
    RunConfig c;
    c.jobs = jobs;
    double mu = id == "fig5" ? 35.0 : 105.0;
    int mode = id == "fig5" ? 2 : 3;
    c.norm_cap = id == "fig5" ? 12.0 : 40.0;
    WeightHandle m, a;
    parse_weight(c.m, m, "m");
    parse_weight(c.a, a, "a");
    nodal_continuation_options opts = trace_options(c);
    opts.norm_cap = c.norm_cap;

    fs::create_directories(dir);
    Manifest man;
    man.doc["command"] = "reproduce " + id;
    SetHandle set;
    check(nodal_trace_at_mu(m.w, a.w, mu, mode, &opts, jobs, &set.s), "trace");
    const nodal_branch* br = nullptr;
    check(nodal_branch_set_get(set.s, 0, &br), "trace");
    size_t np = 0;
    check(nodal_branch_size(br, &np), "trace");
    fs::path bcsv = dir / (id + "_branch.csv");
    check(nodal_branch_export_csv(br, bcsv.string().c_str()), "export");
    man.add_artifact(bcsv);
    const int profiles = 5;
    for (int j = 0; j < profiles; ++j) {
        size_t idx = np < 2 ? 0 : (np - 1) * static_cast<size_t>(j) / (profiles - 1);
        fs::path pcsv = dir / (id + "_profile_" + std::to_string(j) + ".csv");
        check(nodal_branch_profile_export_csv(br, idx, pcsv.string().c_str()), "profile");
        man.add_artifact(pcsv);
    }
    man.write(dir);
    return 0;
}

int reproduce_fig8(const fs::path& dir, int jobs) {
    // mu = 0: positive, 1-node and 2-node branches superimposed
    fs::create_directories(dir);
    Manifest man;
    man.doc["command"] = "reproduce fig8";
    WeightHandle m, a;
    RunConfig c;
    parse_weight(c.m, m, "m");
    parse_weight(c.a, a, "a");

    DiagramHandle d;
    check(nodal_diagram_new("mu = 0", &d.d), "diagram");
    for (int mode = 1; mode <= 3; ++mode) {
        nodal_continuation_options opts = trace_options(c);
        opts.norm_cap = 14.0;
        // the 2-node onsets at mu = 0 sit near |lambda| = 507
        opts.lambda_lo = -650.0;
        opts.lambda_hi = 650.0;
        SetHandle set;
        check(nodal_trace_at_mu(m.w, a.w, 0.0, mode, &opts, jobs, &set.s), "trace");
        check(nodal_diagram_add_branch_set(d.d, set.s), "diagram");
        size_t nb = 0;
        check(nodal_branch_set_count(set.s, &nb), "count");
        fs::path pattern = dir / ("fig8a_mode" + std::to_string(mode) + "_*.csv");
        if (nb) check(nodal_branch_set_export_csv(set.s, pattern.string().c_str()), "csv");
    }
    fs::path svg = dir / "fig8a.svg";
    check(nodal_diagram_render_svg(d.d, svg.string().c_str(), 900, 600), "svg");
    man.add_artifact(svg);
    man.write(dir);
    return 0;
}

int run_reproduce(const std::string& id, const std::string& out_dir, int jobs) {
    fs::path dir = resolve_out(out_dir.empty() ? ("reproduce_" + id) : out_dir);
    if (id == "fig1" || id == "fig2" || id == "fig3")
        return reproduce_curve_fig(id, dir, jobs);
    if (id == "fig4" || id == "fig6") return reproduce_branch_fig(id, dir, jobs);
    if (id == "fig5" || id == "fig7") return reproduce_profile_fig(id, dir, jobs);
    if (id == "fig8") return reproduce_fig8(dir, jobs);
    fail(2, "unknown figure id '" + id + "' (fig1..fig8)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nodal eigencurves and bifurcation diagrams"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path, svg_out, fig_id;
    std::vector<std::string> plot_inputs;
    int theorem_k = 1;

    app.add_option("--config", config_path, "declarative config file (flags override)");

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--m", cfg.m, "weight m (sine:N | paper-a | constant:V)");
        sub->add_option("--a", cfg.a, "weight a");
        sub->add_option("--scheme", cfg.scheme, "fd | spectral");
        sub->add_option("--n-interior", cfg.n_interior, "FD interior points");
        sub->add_option("--n-modes", cfg.n_modes, "spectral modes");
        sub->add_option("--jobs", cfg.jobs, "parallel workers");
        sub->add_option("--seed", cfg.seed, "run seed (recorded; perturbs Newton retries)");
        sub->add_option("--out", cfg.out, "output file");
        sub->add_option("--out-dir", cfg.out_dir, "output directory");
    };

    auto* ec = app.add_subcommand("eigencurves", "sample Sigma_n(lambda) curves");
    add_common(ec);
    ec->add_option("--modes", cfg.modes, "mode range, e.g. 1..5");
    ec->add_option("--range", [&cfg](const std::vector<std::string>& v) {
        std::tie(cfg.range_lo, cfg.range_hi) = parse_range(v.front());
        return true;
    }, "lambda range lo:hi");
    ec->add_option("--step", cfg.step, "lambda spacing");
    ec->add_option("--svg", svg_out, "also render an SVG");

    auto* vt = app.add_subcommand("verify-theorem", "second-derivative routes at lambda=0");
    add_common(vt);
    vt->add_option("--k", theorem_k, "weight frequency (m = sin(2k pi x))");
    vt->add_option("--modes", cfg.modes, "mode range, e.g. 2..5");

    auto* bp = app.add_subcommand("bifpoints", "bifurcation values at a mu level");
    add_common(bp);
    bp->add_option("--mu", [&cfg](const std::vector<std::string>& v) {
        cfg.mu = std::atof(v.front().c_str());
        cfg.mu_set = true;
        return true;
    }, "level");
    bp->add_option("--mode,--modes", cfg.modes, "mode or range");
    bp->add_option("--range", [&cfg](const std::vector<std::string>& v) {
        std::tie(cfg.range_lo, cfg.range_hi) = parse_range(v.front());
        return true;
    }, "lambda range lo:hi");
    bp->add_option("--step", cfg.step, "scan spacing");

    auto* br = app.add_subcommand("branch", "trace nodal branches at one mu");
    add_common(br);
    br->add_option("--mu", [&cfg](const std::vector<std::string>& v) {
        cfg.mu = std::atof(v.front().c_str());
        cfg.mu_set = true;
        return true;
    }, "level");
    br->add_option("--mode,--modes", cfg.modes, "eigen mode (n-1 nodes)");
    br->add_option("--eps", cfg.eps, "branch-switch amplitude");
    br->add_option("--norm-cap", cfg.norm_cap, "L2 truncation");
    br->add_option("--trace-n-interior", cfg.trace_n_interior, "FD grid for tracing");
    br->add_option("--trace-tol", cfg.trace_tol, "corrector tolerance");
    br->add_option("--max-points", cfg.max_points, "points per branch");
    br->add_option("--svg", svg_out, "diagram output");

    auto* sw = app.add_subcommand("sweep", "branch diagrams across a mu list");
    add_common(sw);
    sw->add_option("--mu-list", [&cfg](const std::vector<std::string>& v) {
        cfg.mu_list = parse_list(v.front());
        return true;
    }, "comma separated mu values");
    sw->add_option("--mode,--modes", cfg.modes, "eigen mode");
    sw->add_option("--eps", cfg.eps, "branch-switch amplitude");
    sw->add_option("--norm-cap", cfg.norm_cap, "L2 truncation");
    sw->add_option("--trace-n-interior", cfg.trace_n_interior, "FD grid for tracing");

    auto* rp = app.add_subcommand("reproduce", "rebuild a reference figure");
    add_common(rp);
    rp->add_option("figure", fig_id, "fig1..fig8")->required();

    auto* pl = app.add_subcommand("plot", "render branch CSVs as an SVG");
    pl->add_option("--in", plot_inputs, "input branch CSV (repeatable)");
    pl->add_option("--out", cfg.out, "output SVG");
    std::string plot_title;
    pl->add_option("--title", plot_title, "diagram title");

    try {
        app.parse(argc, argv);
        if (!config_path.empty()) {
            RunConfig file_cfg;  // file first, then re-apply flags by reparsing
            apply_config_file(file_cfg, config_path);
            // flags already wrote into cfg; merge: start from file values for
            // fields the flags left at defaults is fragile, so the simple rule
            // is: config file sets the baseline, explicit flags win because
            // they were parsed into cfg afterwards.  Re-apply file values only
            // where the user gave no flag.
            RunConfig defaults;
            auto pick = [](auto& target, const auto& flag_val, const auto& def_val,
                           const auto& file_val) {
                target = (flag_val != def_val) ? flag_val : file_val;
            };
            RunConfig merged = file_cfg;
            pick(merged.m, cfg.m, defaults.m, file_cfg.m);
            pick(merged.a, cfg.a, defaults.a, file_cfg.a);
            pick(merged.scheme, cfg.scheme, defaults.scheme, file_cfg.scheme);
            pick(merged.n_interior, cfg.n_interior, defaults.n_interior, file_cfg.n_interior);
            pick(merged.n_modes, cfg.n_modes, defaults.n_modes, file_cfg.n_modes);
            pick(merged.modes, cfg.modes, defaults.modes, file_cfg.modes);
            pick(merged.range_lo, cfg.range_lo, defaults.range_lo, file_cfg.range_lo);
            pick(merged.range_hi, cfg.range_hi, defaults.range_hi, file_cfg.range_hi);
            pick(merged.step, cfg.step, defaults.step, file_cfg.step);
            pick(merged.out, cfg.out, defaults.out, file_cfg.out);
            pick(merged.out_dir, cfg.out_dir, defaults.out_dir, file_cfg.out_dir);
            pick(merged.jobs, cfg.jobs, defaults.jobs, file_cfg.jobs);
            pick(merged.seed, cfg.seed, defaults.seed, file_cfg.seed);
            pick(merged.eps, cfg.eps, defaults.eps, file_cfg.eps);
            pick(merged.norm_cap, cfg.norm_cap, defaults.norm_cap, file_cfg.norm_cap);
            pick(merged.trace_n_interior, cfg.trace_n_interior, defaults.trace_n_interior,
                 file_cfg.trace_n_interior);
            pick(merged.trace_tol, cfg.trace_tol, defaults.trace_tol, file_cfg.trace_tol);
            pick(merged.max_points, cfg.max_points, defaults.max_points, file_cfg.max_points);
            if (cfg.mu_set) {
                merged.mu = cfg.mu;
                merged.mu_set = true;
            }
            if (!cfg.mu_list.empty()) merged.mu_list = cfg.mu_list;
            cfg = merged;
        }

        if (ec->parsed()) return run_eigencurves(cfg, svg_out);
        if (vt->parsed()) return run_verify_theorem(cfg, theorem_k);
        if (bp->parsed()) return run_bifpoints(cfg);
        if (br->parsed()) return run_branch(cfg, svg_out);
        if (sw->parsed()) return run_sweep(cfg);
        if (rp->parsed()) return run_reproduce(fig_id, cfg.out_dir, cfg.jobs);
        if (pl->parsed()) return run_plot(plot_inputs, cfg.out, plot_title);
        return 2;
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const CliError& e) {
        std::fprintf(stderr, "error: %s\n", e.message.c_str());
        return e.code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
