#include "nodal/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nodal {

double Branch::min_l2() const {
    double v = std::numeric_limits<double>::infinity();
    for (const auto& p : points) v = std::min(v, p.l2);
    return points.empty() ? 0.0 : v;
}

double Branch::max_l2() const {
    double v = 0.0;
    for (const auto& p : points) v = std::max(v, p.l2);
    return v;
}

const SolutionRecord& Branch::max_l2_point() const {
    if (points.empty()) throw IndexError("branch has no points");
    std::size_t best = 0;
    for (std::size_t i = 1; i < points.size(); ++i)
        if (points[i].l2 > points[best].l2) best = i;
    return points[best];
}

namespace {

// Eigenfunction of -D^2 - lambda m on the problem grid, unit L2, sign-fixed.
std::vector<double> onset_eigenfunction(const NonlinearProblem& prob, double lambda,
                                        int mode) {
    const Grid& g = prob.grid();
    const double h = g.h();
    Tridiagonal t;
    t.off = -1.0 / (h * h);
    t.diag.resize(g.n_interior);
    const auto& m = prob.m_values();
    for (int i = 0; i < g.n_interior; ++i)
        t.diag[i] = 2.0 / (h * h) - lambda * m[i];
    DiscreteOperator op;
    op.scheme = Scheme::CenteredFD;
    op.grid = g;
    op.tri = std::move(t);
    return nth_eigenpair(op, mode, Normalization::UnitL2).values;
}

double h_dot(const Grid& g, std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
    return sum * g.h();
}

// Amplitude-constrained solve: <ref, u>_h = s with lambda free.
NewtonOutcome amplitude_solve(const NonlinearProblem& prob, const StateVector& start,
                              const std::vector<double>& ref, double s, double tol) {
    ArclengthConstraint con;
    con.tangent_u = ref;
    con.tangent_lambda = 0.0;
    con.target = s;
    NewtonOptions opts;
    opts.tol = tol;
    opts.max_iter = 30;
    return newton_correct(prob, start, con, opts, /*nothrow=*/true);
}

// Refine the lambda at which a branch meets u = 0: follow the branch down an
// amplitude cascade and extrapolate lambda(s) -> s = 0.
std::optional<double> refine_crossing(const NonlinearProblem& prob,
                                      const StateVector& healthy, double lambda_guess,
                                      double tol) {
    const Grid& g = prob.grid();
    double amp = l2_norm(g, healthy.u);
    if (amp < 1e-8) return std::nullopt;
    std::vector<double> ref = healthy.u;
    for (double& v : ref) v /= amp;

    StateVector cur = healthy;
    cur.lambda = lambda_guess;
    double s = std::max(amp, 2e-4);
    double s_last = 0.0, lam_last = 0.0;
    while (s > 1e-5) {
        s = std::max(s / 8.0, 1e-5);
        double scale = s / std::max(l2_norm(g, cur.u), 1e-300);
        for (double& v : cur.u) v *= scale;
        NewtonOutcome out = amplitude_solve(prob, cur, ref, s, tol);
        if (!out.converged) return std::nullopt;
        cur = out.state;
        s_last = s;
        lam_last = cur.lambda;
    }
    double s2 = 0.5 * s_last;
    double scale = s2 / std::max(l2_norm(g, cur.u), 1e-300);
    for (double& v : cur.u) v *= scale;
    NewtonOutcome out = amplitude_solve(prob, cur, ref, s2, tol);
    if (!out.converged) return std::nullopt;
    // lambda(s) is asymptotically linear; extrapolate the last two solves to 0
    return (out.state.lambda * s_last - lam_last * s2) / (s_last - s2);
}

}  // namespace

StateVector branch_switch(const NonlinearProblem& prob, const BifurcationPoint& bp,
                          double mu, double eps, const NewtonOptions& opts) {
    if (std::abs(bp.mu - mu) > 1e-6 + 1e-9 * std::abs(mu))
        throw PreconditionError("branch_switch: bifurcation point is not at this mu level");
    if (std::abs(bp.slope) < 1e-8)
        throw PreconditionError(
            "branch_switch: transversality failure (curve slope below 1e-8; mu near mu_n)");
    if (!(eps != 0.0))
        throw PreconditionError("branch_switch: eps must be nonzero");

    const Grid& g = prob.grid();
    std::vector<double> phi = onset_eigenfunction(prob, bp.lambda, bp.mode);

    // first-order branch direction: lambda_1 = Int a phi^3 / Int m phi^2
    std::vector<double> aphi2(g.n_interior), mphi(g.n_interior);
    const auto& av = prob.a_values();
    const auto& mv = prob.m_values();
    for (int i = 0; i < g.n_interior; ++i) {
        aphi2[i] = av[i] * phi[i] * phi[i];
        mphi[i] = mv[i] * phi[i];
    }
    double denom = h_dot(g, mphi, phi);
    double lambda1 = denom != 0.0 ? h_dot(g, aphi2, phi) / denom : 0.0;

    StateVector predictor;
    predictor.mu = mu;
    predictor.lambda = bp.lambda + eps * lambda1;
    predictor.u.resize(g.n_interior);
    for (int i = 0; i < g.n_interior; ++i) predictor.u[i] = eps * phi[i];

    ArclengthConstraint con;
    con.tangent_u = phi;
    con.tangent_lambda = 0.0;
    con.target = eps;
    NewtonOutcome out = newton_correct(prob, predictor, con, opts);
    return out.state;
}

Branch trace(const NonlinearProblem& prob, const StateVector& seed,
             const StateVector& previous, const ContinuationConfig& cfg,
             const std::vector<double>& known_bifurcations) {
    const Grid& g = prob.grid();
    Branch br;
    br.points.push_back(prob.record(seed));

    // secant tangent, normalized in the (h-weighted u, lambda) metric
    std::vector<double> tau_u(g.n_interior);
    double tau_lambda = 0.0;
    auto set_tangent = [&](const StateVector& from, const StateVector& to) {
        for (int i = 0; i < g.n_interior; ++i) tau_u[i] = to.u[i] - from.u[i];
        tau_lambda = to.lambda - from.lambda;
        double nrm = std::sqrt(h_dot(g, tau_u, tau_u) + tau_lambda * tau_lambda);
        if (!(nrm > 0.0)) throw NumericError("trace: degenerate tangent", nrm);
        for (double& v : tau_u) v /= nrm;
        tau_lambda /= nrm;
    };
    set_tangent(previous, seed);

    StateVector cur = seed;
    double ds = cfg.ds0 > 0.0 ? cfg.ds0 : std::max(l2_norm(g, seed.u), 0.01);
    int streak = 0;
    const std::vector<double> tau0_u = tau_u;
    const double tau0_lambda = tau_lambda;
    bool departed = false;  // loop closure only counts after leaving the start

    NewtonOptions nopts;
    nopts.tol = cfg.tol;
    nopts.max_iter = cfg.max_corrector_iters;

    auto finish = [&](TerminationKind kind) {
        br.termination.kind = kind;
        return br;
    };
    auto finish_reconnect = [&](const StateVector& healthy, double lambda_guess) {
        br.termination.kind = TerminationKind::TrivialReconnect;
        auto cross = refine_crossing(prob, healthy, lambda_guess, cfg.tol);
        br.termination.lambda_cross = cross.value_or(lambda_guess);
        for (double b : known_bifurcations)
            if (std::abs(br.termination.lambda_cross - b) <= 1e-3) {
                br.termination.matched_bifurcation = b;
                break;
            }
        return br;
    };

    for (int step = 0; step < cfg.max_points; ++step) {
        StateVector next;
        double cosang = 1.0;
        bool accepted = false;
        while (!accepted) {
            // resolve the approach to u = 0: never step far beyond the
            // current amplitude when close to the trivial branch
            double cur_l2 = l2_norm(g, cur.u);
            double ds_eff = cur_l2 < 2.0 * ds ? std::max(0.5 * cur_l2, 4.0 * cfg.ds_min) : ds;

            StateVector pred = cur;
            for (int i = 0; i < g.n_interior; ++i) pred.u[i] += ds_eff * tau_u[i];
            pred.lambda += ds_eff * tau_lambda;

            ArclengthConstraint con;
            con.tangent_u = tau_u;
            con.tangent_lambda = tau_lambda;
            con.target = h_dot(g, tau_u, pred.u) + tau_lambda * pred.lambda;

            NewtonOutcome out = newton_correct(prob, pred, con, nopts, /*nothrow=*/true);
            if (out.converged) {
                next = out.state;
                double l2n = l2_norm(g, next.u);
                cosang = (cur_l2 > 1e-12 && l2n > 1e-12)
                             ? h_dot(g, cur.u, next.u) / (cur_l2 * l2n)
                             : 1.0;
                // profile flip at healthy amplitude = jumped to another branch
                accepted = !(cosang < -0.3 && std::min(cur_l2, l2n) > 3.0 * ds_eff);
            }
            if (!accepted) {
                ds *= 0.5;
                streak = 0;
                if (ds < cfg.ds_min) return finish(TerminationKind::StepFloor);
            }
        }

        double l2n = l2_norm(g, next.u);
        if (cosang < -0.3)
            return finish_reconnect(cur, 0.5 * (cur.lambda + next.lambda));
        if (l2n < 1e-6) return finish_reconnect(cur, next.lambda);

        set_tangent(cur, next);
        cur = next;
        br.points.push_back(prob.record(cur));

        if (++streak >= 4) {
            ds = std::min(ds * 1.3, cfg.ds_max);
            streak = 0;
        }
        if (l2n > cfg.norm_cap) return finish(TerminationKind::NormCap);
        if (cur.lambda < cfg.lambda_lo || cur.lambda > cfg.lambda_hi)
            return finish(TerminationKind::LambdaRangeExit);

        if (step >= 10) {
            const auto& first = br.points.front().state;
            std::vector<double> d0(g.n_interior);
            for (int i = 0; i < g.n_interior; ++i) d0[i] = cur.u[i] - first.u[i];
            double dist = std::sqrt(h_dot(g, d0, d0) +
                                    (cur.lambda - first.lambda) * (cur.lambda - first.lambda));
            // proximity plus alignment with the departure tangent, and only
            // after the branch has actually left the start's neighborhood
            if (dist > 12.0 * ds) departed = true;
            double align = h_dot(g, tau_u, tau0_u) + tau_lambda * tau0_lambda;
            if (departed && dist < 10.0 * ds && align > 0.9)
                return finish(TerminationKind::ClosedLoop);
        }
    }
    return finish(TerminationKind::MaxPoints);
}

Branch mu_homotopy(const NonlinearProblem& prob, const Branch& source,
                   double mu_target, int steps, const ContinuationConfig& cfg) {
    if (source.points.empty())
        throw PreconditionError("mu_homotopy: source branch is empty");
    if (steps < 1) throw PreconditionError("mu_homotopy: steps must be >= 1");

    StateVector cur = source.max_l2_point().state;
    const double mu_src = cur.mu;

    NewtonOptions nopts;
    nopts.tol = cfg.tol;
    nopts.max_iter = cfg.max_corrector_iters * 2;

    double mu = mu_src;
    double dmu = (mu_target - mu_src) / steps;
    int halvings = 0;
    while (mu != mu_target) {
        double mu_next = std::abs(mu_target - mu) <= std::abs(dmu) ? mu_target : mu + dmu;
        StateVector attempt = cur;
        attempt.mu = mu_next;
        NewtonOutcome out = newton_correct(prob, attempt, std::nullopt, nopts, true);
        if (!out.converged) {
            dmu *= 0.5;
            if (++halvings > 40)
                throw NumericError("mu_homotopy: lost convergence at mu = " +
                                       std::to_string(mu_next),
                                   out.residual_norm);
            continue;
        }
        cur = out.state;
        mu = mu_next;
    }
    if (l2_norm(prob.grid(), cur.u) < 1e-6)
        throw NumericError("mu_homotopy: component collapsed onto the trivial solution",
                           0.0);

    // trace at mu_target; when the forward direction closes a loop the whole
    // component is covered, otherwise add the backward half.  The deformation
    // may have raised the norm past the configured cap, so the retrace cap
    // makes room for the continued point.
    ContinuationConfig tcfg = cfg;
    tcfg.norm_cap = std::max(cfg.norm_cap, 1.2 * l2_norm(prob.grid(), cur.u));
    StateVector nudged = cur;
    nudged.lambda += std::max(1e-3, cfg.ds0 * 0.2);
    NewtonOutcome out = newton_correct(prob, nudged, std::nullopt, nopts, true);
    if (!out.converged)
        throw NumericError("mu_homotopy: could not establish a second point",
                           out.residual_norm);
    Branch fwd = trace(prob, out.state, cur, tcfg, {});

    Branch joined;
    joined.origin = OriginKind::MuHomotopy;
    joined.mode = source.mode;
    if (fwd.termination.kind == TerminationKind::ClosedLoop) {
        joined.points = std::move(fwd.points);
        joined.termination = fwd.termination;
        return joined;
    }
    Branch bwd = trace(prob, cur, out.state, tcfg, {});
    joined.points.reserve(fwd.points.size() + bwd.points.size());
    for (auto it = bwd.points.rbegin(); it != bwd.points.rend(); ++it)
        joined.points.push_back(*it);
    for (const auto& p : fwd.points) joined.points.push_back(p);
    joined.termination = fwd.termination;
    return joined;
}

std::vector<BifurcationPoint> detect_bifurcation_values(const CurveSolver& solver,
                                                        double mu, int mode_lo,
                                                        int mode_hi, double lambda_lo,
                                                        double lambda_hi, double dl) {
    if (mode_lo < 1 || mode_hi < mode_lo)
        throw PreconditionError("detect_bifurcation_values: bad mode range");
    std::vector<BifurcationPoint> all;
    auto samples = sample_curves(solver, mode_hi, lambda_lo, lambda_hi, dl);
    for (int mode = mode_lo; mode <= mode_hi; ++mode) {
        auto roots = roots_at_level(solver, samples[mode - 1], mu);
        all.insert(all.end(), roots.begin(), roots.end());
    }
    std::sort(all.begin(), all.end(),
              [](const BifurcationPoint& a, const BifurcationPoint& b) {
                  return a.lambda < b.lambda;
              });
    return all;
}

std::vector<double> grid_bifurcation_values(const NonlinearProblem& prob, int mode,
                                            double mu, double lambda_lo,
                                            double lambda_hi, double dl) {
    CurveSolver solver(prob.m_weight(), Scheme::CenteredFD, prob.grid().n_interior);
    auto sample = sample_curve(solver, mode, lambda_lo, lambda_hi, dl);
    auto roots = roots_at_level(solver, sample, mu);
    std::vector<double> out;
    out.reserve(roots.size());
    for (const auto& r : roots) out.push_back(r.lambda);
    return out;
}

namespace {

// splitmix64: cheap deterministic per-task jitter source
double unit_jitter(unsigned long long seed, unsigned long long task) {
    unsigned long long z = seed + 0x9e3779b97f4a7c15ULL * (task + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z = z ^ (z >> 31);
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

}  // namespace

std::vector<Branch> trace_from_bifurcations(const NonlinearProblem& prob,
                                            const std::vector<double>& onset_lambdas,
                                            int mode, double mu, double eps,
                                            const ContinuationConfig& cfg, int jobs,
                                            unsigned long long seed) {
    std::vector<Branch> branches(2 * onset_lambdas.size());
    parallel_for_index(branches.size(), jobs, [&](std::size_t t) {
        std::size_t i = t / 2;
        double sign = (t % 2 == 0) ? 1.0 : -1.0;
        BifurcationPoint bp;
        bp.mode = mode;
        bp.lambda = onset_lambdas[i];
        bp.mu = mu;
        CurveSolver fd(prob.m_weight(), Scheme::CenteredFD, prob.grid().n_interior);
        bp.slope = fd.slope(bp.lambda, mode, 0.05);

        StateVector zero;
        zero.mu = mu;
        zero.lambda = bp.lambda;
        zero.u.assign(prob.grid().n_interior, 0.0);

        Branch br;
        br.id = static_cast<int>(t);
        br.origin = OriginKind::TrivialBifurcation;
        br.origin_lambda = bp.lambda;
        br.origin_eps = sign * eps;
        br.mode = mode;
        StateVector start;
        try {
            start = branch_switch(prob, bp, mu, sign * eps);
        } catch (const NumericError&) {
            double scaled = eps * (1.05 + 0.1 * unit_jitter(seed, t));
            start = branch_switch(prob, bp, mu, sign * scaled);
            br.origin_eps = sign * scaled;
        }
        Branch traced = trace(prob, start, zero, cfg, onset_lambdas);
        br.points = std::move(traced.points);
        br.termination = traced.termination;
        branches[t] = std::move(br);
    });
    return branches;
}

int count_components(const std::vector<double>& onset_lambdas,
                     const std::vector<Branch>& branches, double match_tol) {
    const std::size_t n = onset_lambdas.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    auto match = [&](double lambda) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < n; ++i)
            if (std::abs(lambda - onset_lambdas[i]) <= match_tol) return i;
        return std::nullopt;
    };
    std::vector<bool> seen(n, false);
    for (const auto& br : branches) {
        auto from = match(br.origin_lambda);
        if (from) seen[*from] = true;
        if (br.termination.kind == TerminationKind::TrivialReconnect && from) {
            auto to = match(br.termination.matched_bifurcation.value_or(
                br.termination.lambda_cross));
            if (to) {
                seen[*to] = true;
                parent[find(*from)] = find(*to);
            }
        }
    }
    int comps = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (seen[i] && find(i) == i) ++comps;
    return comps;
}

}  // namespace nodal
