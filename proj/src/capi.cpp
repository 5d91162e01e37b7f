#include "nodal.h"

#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "nodal/continuation.hpp"
#include "nodal/diagram.hpp"
#include "nodal/eigencurve.hpp"
#include "nodal/perturbation.hpp"

using namespace nodal;

namespace {

thread_local std::string g_last_error;

template <typename F>
nodal_status wrap(F&& f) noexcept {
    try {
        f();
        return NODAL_OK;
    } catch (const DomainError& e) {
        g_last_error = e.what();
        return NODAL_ERR_DOMAIN;
    } catch (const IndexError& e) {
        g_last_error = e.what();
        return NODAL_ERR_INDEX;
    } catch (const ConfigError& e) {
        g_last_error = e.what();
        return NODAL_ERR_CONFIG;
    } catch (const PreconditionError& e) {
        g_last_error = e.what();
        return NODAL_ERR_PRECONDITION;
    } catch (const NumericError& e) {
        g_last_error = e.what();
        return NODAL_ERR_NUMERIC;
    } catch (const ConsistencyError& e) {
        g_last_error = e.what();
        return NODAL_ERR_CONSISTENCY;
    } catch (const IoError& e) {
        g_last_error = e.what();
        return NODAL_ERR_IO;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return NODAL_ERR_UNKNOWN;
    } catch (...) {
        g_last_error = "unknown failure";
        return NODAL_ERR_UNKNOWN;
    }
}

nodal_status invalid(const char* msg) {
    g_last_error = msg;
    return NODAL_ERR_INVALID_ARG;
}

Scheme to_scheme(nodal_scheme s) {
    return s == NODAL_SCHEME_FD ? Scheme::CenteredFD : Scheme::SineSpectral;
}

int resolution_or_default(nodal_scheme s, int res) {
    if (res > 0) return res;
    return s == NODAL_SCHEME_FD ? 2000 : 64;
}

nodal_root to_c_root(const BifurcationPoint& bp) {
    nodal_root r;
    r.mode = bp.mode;
    r.label = static_cast<int>(bp.label);
    r.lambda = bp.lambda;
    r.mu = bp.mu;
    r.slope = bp.slope;
    r.at_boundary = bp.at_boundary ? 1 : 0;
    return r;
}

nodal_point_info to_c_point(const SolutionRecord& rec) {
    nodal_point_info p;
    p.lambda = rec.state.lambda;
    p.mu = rec.state.mu;
    p.l2 = rec.l2;
    p.nodes = rec.node_count;
    p.residual = rec.residual_norm;
    p.stability = rec.stability_hint;
    return p;
}

ContinuationConfig to_config(const nodal_continuation_options& o) {
    ContinuationConfig cfg;
    cfg.ds0 = o.ds0;
    cfg.ds_min = o.ds_min;
    cfg.ds_max = o.ds_max;
    cfg.tol = o.tol;
    cfg.max_points = o.max_points;
    cfg.lambda_lo = o.lambda_lo;
    cfg.lambda_hi = o.lambda_hi;
    cfg.norm_cap = o.norm_cap;
    return cfg;
}

}  // namespace

struct nodal_weight {
    Weight w;
};

struct nodal_curve {
    std::vector<EigencurveSample> samples;
    std::shared_ptr<CurveSolver> solver;
};

struct nodal_branch {
    Branch br;
    Grid grid = Grid::unit(8);
};

struct nodal_branch_set {
    std::vector<nodal_branch> branches;
    std::vector<double> onsets;
    Weight m = Weight::constant(0.0);
    Weight a = Weight::constant(0.0);
    Grid grid = Grid::unit(8);
    nodal_continuation_options opts{};
};

struct nodal_diagram {
    std::string title;
    std::vector<Branch> branches;
    std::vector<BifurcationPoint> bifpoints;
    std::vector<Series> extra_series;
};

const char* nodal_version(void) { return "0.1.0"; }

const char* nodal_last_error(void) { return g_last_error.c_str(); }

/* ---------------- weights ---------------- */

nodal_status nodal_weight_sine(int frequency, nodal_weight** out) {
    if (!out) return invalid("null out");
    return wrap([&] { *out = new nodal_weight{Weight::sine(frequency)}; });
}

nodal_status nodal_weight_paper_a(nodal_weight** out) {
    if (!out) return invalid("null out");
    return wrap([&] { *out = new nodal_weight{Weight::paper_a()}; });
}

nodal_status nodal_weight_constant(double value, nodal_weight** out) {
    if (!out) return invalid("null out");
    return wrap([&] { *out = new nodal_weight{Weight::constant(value)}; });
}

nodal_status nodal_weight_tabulated(const double* values, size_t count,
                                    nodal_weight** out) {
    if (!out || !values) return invalid("null argument");
    return wrap([&] {
        *out = new nodal_weight{Weight::tabulated({values, values + count})};
    });
}

void nodal_weight_free(nodal_weight* w) { delete w; }

nodal_status nodal_weight_eval(const nodal_weight* w, double x, double* out) {
    if (!w || !out) return invalid("null argument");
    return wrap([&] { *out = w->w(x); });
}

nodal_status nodal_weight_is_odd_about_half(const nodal_weight* w, double tol,
                                            int* out) {
    if (!w || !out) return invalid("null argument");
    return wrap([&] { *out = w->w.is_odd_about_half(tol) ? 1 : 0; });
}

nodal_status nodal_weight_sign_witnesses(const nodal_weight* w, double* x_minus,
                                         double* x_plus, int* present) {
    if (!w || !present) return invalid("null argument");
    return wrap([&] {
        auto ww = w->w.sign_change_witnesses();
        *present = ww ? 1 : 0;
        if (ww) {
            if (x_minus) *x_minus = ww->first;
            if (x_plus) *x_plus = ww->second;
        }
    });
}

/* ---------------- eigencurves ---------------- */

nodal_status nodal_sigma(const nodal_weight* m, int mode, double lambda,
                         nodal_scheme scheme, int resolution, double* out) {
    if (!m || !out) return invalid("null argument");
    return wrap([&] {
        CurveSolver solver(m->w, to_scheme(scheme),
                           scheme == NODAL_SCHEME_FD
                               ? resolution_or_default(scheme, resolution)
                               : 8,
                           scheme == NODAL_SCHEME_SPECTRAL
                               ? resolution_or_default(scheme, resolution)
                               : 64);
        *out = solver.sigma(lambda, mode);
    });
}

nodal_status nodal_curve_sample(const nodal_weight* m, int n_max, double lambda_lo,
                                double lambda_hi, double step, nodal_scheme scheme,
                                int resolution, int jobs, nodal_curve** out) {
    if (!m || !out) return invalid("null argument");
    return wrap([&] {
        auto c = std::make_unique<nodal_curve>();
        int res = resolution_or_default(scheme, resolution);
        c->solver = std::make_shared<CurveSolver>(
            m->w, to_scheme(scheme), scheme == NODAL_SCHEME_FD ? res : 8,
            scheme == NODAL_SCHEME_SPECTRAL ? res : 64);
        c->samples = sample_curves(*c->solver, n_max, lambda_lo, lambda_hi, step,
                                   jobs > 0 ? jobs : 1);
        *out = c.release();
    });
}

void nodal_curve_free(nodal_curve* c) { delete c; }

namespace {
const EigencurveSample& sample_for(const nodal_curve* c, int mode) {
    for (const auto& s : c->samples)
        if (s.mode == mode) return s;
    throw IndexError("mode not sampled in this curve set");
}
}  // namespace

nodal_status nodal_curve_count(const nodal_curve* c, size_t* n_points, int* n_modes) {
    if (!c) return invalid("null curve");
    return wrap([&] {
        if (n_points)
            *n_points = c->samples.empty() ? 0 : c->samples.front().lambdas.size();
        if (n_modes) *n_modes = static_cast<int>(c->samples.size());
    });
}

nodal_status nodal_curve_row(const nodal_curve* c, int mode, size_t i, double* lambda,
                             double* sigma, double* d1, double* d2) {
    if (!c) return invalid("null curve");
    return wrap([&] {
        const auto& s = sample_for(c, mode);
        if (i >= s.lambdas.size()) throw IndexError("sample index out of range");
        if (lambda) *lambda = s.lambdas[i];
        if (sigma) *sigma = s.values[i];
        if (d1) *d1 = s.d1[i];
        if (d2) *d2 = s.d2[i];
    });
}

nodal_status nodal_curve_roots(const nodal_curve* c, int mode, double mu,
                               nodal_root* out, size_t cap, size_t* count) {
    if (!c || !count) return invalid("null argument");
    return wrap([&] {
        auto roots = roots_at_level(*c->solver, sample_for(c, mode), mu);
        *count = roots.size();
        if (out)
            for (size_t i = 0; i < roots.size() && i < cap; ++i)
                out[i] = to_c_root(roots[i]);
    });
}

nodal_status nodal_curve_max(const nodal_curve* c, int mode, double* mu_n,
                             double* argmax, size_t cap, size_t* n_argmax) {
    if (!c) return invalid("null curve");
    return wrap([&] {
        auto ext = curve_maximum(*c->solver, sample_for(c, mode));
        if (mu_n) *mu_n = ext.mu_n;
        if (n_argmax) *n_argmax = ext.argmax.size();
        if (argmax)
            for (size_t i = 0; i < ext.argmax.size() && i < cap; ++i)
                argmax[i] = ext.argmax[i];
    });
}

nodal_status nodal_curve_concavity(const nodal_curve* c, int mode,
                                   int* globally_concave, double* second_diff_at_zero) {
    if (!c) return invalid("null curve");
    return wrap([&] {
        auto rep = concavity_report(sample_for(c, mode));
        if (globally_concave) *globally_concave = rep.globally_concave ? 1 : 0;
        if (second_diff_at_zero) *second_diff_at_zero = rep.second_diff_at_zero;
    });
}

nodal_status nodal_curve_export_csv(const nodal_curve* c, const char* path) {
    if (!c || !path) return invalid("null argument");
    return wrap([&] { export_curves_csv(c->samples, path); });
}

nodal_status nodal_decay_bound(const nodal_weight* m, int mode, double lambda,
                               double* out) {
    if (!m || !out) return invalid("null argument");
    return wrap([&] { *out = decay_bound(m->w, mode, lambda); });
}

/* ---------------- theorem routes ---------------- */

nodal_status nodal_sigma_ddot_zero(int n, int k, nodal_sigma_ddot_route route,
                                   double* out) {
    if (!out) return invalid("null out");
    return wrap([&] {
        SigmaDdotRoute r = route == NODAL_ROUTE_CLOSED_FORM
                               ? SigmaDdotRoute::ClosedForm
                               : route == NODAL_ROUTE_QUADRATURE_2_15
                                     ? SigmaDdotRoute::Quadrature2_15
                                     : SigmaDdotRoute::CurveFD;
        *out = sigma_ddot_zero(n, k, r);
    });
}

nodal_status nodal_p_closed_form(int n, int k, double x, double* out) {
    if (!out) return invalid("null out");
    return wrap([&] { *out = p_closed_form(n, k, x); });
}

nodal_status nodal_p_quadrature(int n, int k, double x, double* out) {
    if (!out) return invalid("null out");
    return wrap([&] { *out = p_quadrature(n, k, x); });
}

/* ---------------- continuation ---------------- */

void nodal_continuation_options_default(nodal_continuation_options* opts) {
    if (!opts) return;
    opts->ds0 = 0.0;
    opts->ds_min = 1e-6;
    opts->ds_max = 5.0;
    opts->tol = 1e-8;
    opts->max_points = 4000;
    opts->lambda_lo = -450.0;
    opts->lambda_hi = 450.0;
    opts->norm_cap = 50.0;
    opts->n_interior = 300;
    opts->eps = 0.05;
    opts->seed = 0;
}

nodal_status nodal_bifurcation_values(const nodal_weight* m, double mu, int mode_lo,
                                      int mode_hi, double lambda_lo, double lambda_hi,
                                      double step, nodal_root* out, size_t cap,
                                      size_t* count) {
    if (!m || !count) return invalid("null argument");
    return wrap([&] {
        CurveSolver solver(m->w, Scheme::SineSpectral, 8, 64);
        auto pts = detect_bifurcation_values(solver, mu, mode_lo, mode_hi, lambda_lo,
                                             lambda_hi, step);
        *count = pts.size();
        if (out)
            for (size_t i = 0; i < pts.size() && i < cap; ++i) out[i] = to_c_root(pts[i]);
    });
}

nodal_status nodal_onset_solution(const nodal_weight* m, const nodal_weight* a,
                                  double mu, int mode, double lambda_onset, double eps,
                                  const nodal_continuation_options* opts,
                                  nodal_point_info* out) {
    if (!m || !a || !opts || !out) return invalid("null argument");
    return wrap([&] {
        NonlinearProblem prob(m->w, a->w, Grid::unit(opts->n_interior));
        CurveSolver fd(m->w, Scheme::CenteredFD, opts->n_interior);
        BifurcationPoint bp;
        bp.mode = mode;
        bp.lambda = lambda_onset;
        bp.mu = mu;
        bp.slope = fd.slope(lambda_onset, mode, 0.05);
        NewtonOptions nopts;
        nopts.tol = opts->tol;
        StateVector s = branch_switch(prob, bp, mu, eps, nopts);
        *out = to_c_point(prob.record(s));
    });
}

nodal_status nodal_trace_at_mu(const nodal_weight* m, const nodal_weight* a, double mu,
                               int mode, const nodal_continuation_options* opts,
                               int jobs, nodal_branch_set** out) {
    if (!m || !a || !opts || !out) return invalid("null argument");
    return wrap([&] {
        auto set = std::make_unique<nodal_branch_set>();
        set->m = m->w;
        set->a = a->w;
        set->grid = Grid::unit(opts->n_interior);
        set->opts = *opts;
        NonlinearProblem prob(m->w, a->w, set->grid);
        set->onsets = grid_bifurcation_values(prob, mode, mu, opts->lambda_lo,
                                              opts->lambda_hi, 2.0);
        auto branches = trace_from_bifurcations(prob, set->onsets, mode, mu, opts->eps,
                                                to_config(*opts), jobs > 0 ? jobs : 1,
                                                opts->seed);
        for (auto& br : branches)
            set->branches.push_back(nodal_branch{std::move(br), set->grid});
        *out = set.release();
    });
}

void nodal_branch_set_free(nodal_branch_set* s) { delete s; }

nodal_status nodal_branch_set_count(const nodal_branch_set* s, size_t* count) {
    if (!s || !count) return invalid("null argument");
    *count = s->branches.size();
    return NODAL_OK;
}

nodal_status nodal_branch_set_get(const nodal_branch_set* s, size_t i,
                                  const nodal_branch** out) {
    if (!s || !out) return invalid("null argument");
    if (i >= s->branches.size()) return invalid("branch index out of range");
    *out = &s->branches[i];
    return NODAL_OK;
}

nodal_status nodal_branch_set_components(const nodal_branch_set* s, int* components) {
    if (!s || !components) return invalid("null argument");
    return wrap([&] {
        std::vector<Branch> plain;
        plain.reserve(s->branches.size());
        for (const auto& b : s->branches) plain.push_back(b.br);
        *components = count_components(s->onsets, plain);
    });
}

nodal_status nodal_branch_set_onsets(const nodal_branch_set* s, double* out, size_t cap,
                                     size_t* count) {
    if (!s || !count) return invalid("null argument");
    *count = s->onsets.size();
    if (out)
        for (size_t i = 0; i < s->onsets.size() && i < cap; ++i) out[i] = s->onsets[i];
    return NODAL_OK;
}

nodal_status nodal_branch_set_export_csv(const nodal_branch_set* s, const char* pattern) {
    if (!s || !pattern) return invalid("null argument");
    return wrap([&] {
        std::string pat(pattern);
        auto star = pat.find('*');
        if (star == std::string::npos && s->branches.size() > 1)
            throw ConfigError("pattern needs a '*' placeholder for multiple branches");
        for (size_t i = 0; i < s->branches.size(); ++i) {
            std::string path = pat;
            if (star != std::string::npos)
                path = pat.substr(0, star) + std::to_string(i) + pat.substr(star + 1);
            export_branch_csv(s->branches[i].br, path);
        }
    });
}

nodal_status nodal_mu_homotopy(const nodal_branch_set* s, size_t source, double mu_target,
                               int steps, const nodal_continuation_options* opts,
                               nodal_branch_set** out) {
    if (!s || !opts || !out) return invalid("null argument");
    if (source >= s->branches.size()) return invalid("source branch index out of range");
    return wrap([&] {
        NonlinearProblem prob(s->m, s->a, s->grid);
        Branch result = mu_homotopy(prob, s->branches[source].br, mu_target, steps,
                                    to_config(*opts));
        auto set = std::make_unique<nodal_branch_set>();
        set->m = s->m;
        set->a = s->a;
        set->grid = s->grid;
        set->opts = *opts;
        set->branches.push_back(nodal_branch{std::move(result), s->grid});
        *out = set.release();
    });
}

nodal_status nodal_branch_size(const nodal_branch* b, size_t* count) {
    if (!b || !count) return invalid("null argument");
    *count = b->br.points.size();
    return NODAL_OK;
}

nodal_status nodal_branch_point(const nodal_branch* b, size_t i, nodal_point_info* out) {
    if (!b || !out) return invalid("null argument");
    if (i >= b->br.points.size()) return invalid("point index out of range");
    *out = to_c_point(b->br.points[i]);
    return NODAL_OK;
}

nodal_status nodal_branch_termination(const nodal_branch* b, int* kind,
                                      double* lambda_cross) {
    if (!b || !kind) return invalid("null argument");
    *kind = static_cast<int>(b->br.termination.kind);
    if (lambda_cross) *lambda_cross = b->br.termination.lambda_cross;
    return NODAL_OK;
}

nodal_status nodal_branch_min_l2(const nodal_branch* b, double* out) {
    if (!b || !out) return invalid("null argument");
    *out = b->br.min_l2();
    return NODAL_OK;
}

nodal_status nodal_branch_export_csv(const nodal_branch* b, const char* path) {
    if (!b || !path) return invalid("null argument");
    return wrap([&] { export_branch_csv(b->br, path); });
}

nodal_status nodal_branch_profile(const nodal_branch* b, size_t i, double* x, double* u,
                                  size_t cap, size_t* count) {
    if (!b || !count) return invalid("null argument");
    if (i >= b->br.points.size()) return invalid("point index out of range");
    const auto& rec = b->br.points[i];
    const Grid& g = b->grid;
    size_t total = static_cast<size_t>(g.n_interior) + 2;
    *count = total;
    if (!x || !u) return NODAL_OK;
    if (cap < total) return invalid("profile buffer too small");
    x[0] = g.r;
    u[0] = 0.0;
    for (int j = 0; j < g.n_interior; ++j) {
        x[j + 1] = g.node(j);
        u[j + 1] = rec.state.u[j];
    }
    x[total - 1] = g.s;
    u[total - 1] = 0.0;
    return NODAL_OK;
}

nodal_status nodal_branch_profile_export_csv(const nodal_branch* b, size_t i,
                                             const char* path) {
    if (!b || !path) return invalid("null argument");
    if (i >= b->br.points.size()) return invalid("point index out of range");
    return wrap([&] { export_profile_csv(b->grid, b->br.points[i], path); });
}

nodal_status nodal_newton_refine(const nodal_weight* m, const nodal_weight* a,
                                 double mu, double lambda, const double* u,
                                 size_t n_interior, double tol, int max_iter,
                                 nodal_point_info* out, int* iterations) {
    if (!m || !a || !u || !out) return invalid("null argument");
    return wrap([&] {
        NonlinearProblem prob(m->w, a->w, Grid::unit(static_cast<int>(n_interior)));
        StateVector s;
        s.mu = mu;
        s.lambda = lambda;
        s.u.assign(u, u + n_interior);
        NewtonOptions opts;
        opts.tol = tol;
        opts.max_iter = max_iter;
        NewtonOutcome res = newton_correct(prob, s, std::nullopt, opts);
        if (iterations) *iterations = res.iterations;
        *out = to_c_point(prob.record(res.state));
    });
}

/* ---------------- diagrams ---------------- */

nodal_status nodal_diagram_new(const char* title, nodal_diagram** out) {
    if (!out) return invalid("null out");
    return wrap([&] {
        auto d = std::make_unique<nodal_diagram>();
        d->title = title ? title : "";
        *out = d.release();
    });
}

void nodal_diagram_free(nodal_diagram* d) { delete d; }

nodal_status nodal_diagram_add_branch_set(nodal_diagram* d, const nodal_branch_set* s) {
    if (!d || !s) return invalid("null argument");
    return wrap([&] {
        for (const auto& b : s->branches) d->branches.push_back(b.br);
    });
}

nodal_status nodal_diagram_add_branch_csv(nodal_diagram* d, const char* path) {
    if (!d || !path) return invalid("null argument");
    return wrap([&] { d->extra_series.push_back(load_branch_series_csv(path)); });
}

nodal_status nodal_diagram_add_curves(nodal_diagram* d, const nodal_curve* c) {
    if (!d || !c) return invalid("null argument");
    return wrap([&] {
        auto doc = assemble_curve_diagram(c->samples, "");
        for (auto& s : doc.series) d->extra_series.push_back(std::move(s));
    });
}

nodal_status nodal_diagram_annotate_roots(nodal_diagram* d, const nodal_root* roots,
                                          size_t count) {
    if (!d || (!roots && count)) return invalid("null argument");
    return wrap([&] {
        for (size_t i = 0; i < count; ++i) {
            BifurcationPoint bp;
            bp.mode = roots[i].mode;
            bp.lambda = roots[i].lambda;
            bp.mu = roots[i].mu;
            bp.slope = roots[i].slope;
            d->bifpoints.push_back(bp);
        }
    });
}

nodal_status nodal_diagram_render_svg(const nodal_diagram* d, const char* path,
                                      int width, int height) {
    if (!d || !path) return invalid("null argument");
    return wrap([&] {
        DiagramOptions options;
        options.title = d->title;
        DiagramDocument doc = assemble_diagram(d->branches, d->bifpoints, options);
        for (const auto& s : d->extra_series) {
            doc.series.push_back(s);
            for (const auto& [px, py] : s.points) {
                doc.x_min = std::min(doc.x_min, px);
                doc.x_max = std::max(doc.x_max, px);
                doc.y_min = std::min(doc.y_min, py);
                doc.y_max = std::max(doc.y_max, py * 1.05);
            }
        }
        export_svg(doc, path, width > 0 ? width : 900, height > 0 ? height : 600);
    });
}
