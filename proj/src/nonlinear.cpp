#include "nodal/nonlinear.hpp"

#include <algorithm>
#include <cmath>

#include "nodal/eigen.hpp"

namespace nodal {

NonlinearProblem::NonlinearProblem(Weight m, Weight a, Grid grid)
    : mw_(std::move(m)), aw_(std::move(a)), grid_(grid) {
    m_.resize(grid_.n_interior);
    a_.resize(grid_.n_interior);
    for (int i = 0; i < grid_.n_interior; ++i) {
        m_[i] = mw_(grid_.node(i));
        a_[i] = aw_(grid_.node(i));
    }
}

std::vector<double> NonlinearProblem::residual(const StateVector& s) const {
    const int n = grid_.n_interior;
    const double h2 = grid_.h() * grid_.h();
    const auto& u = s.u;
    std::vector<double> F(n);
    for (int i = 0; i < n; ++i) {
        double left = i > 0 ? u[i - 1] : 0.0;
        double right = i + 1 < n ? u[i + 1] : 0.0;
        F[i] = (-left + 2.0 * u[i] - right) / h2 - s.mu * u[i] -
               s.lambda * m_[i] * u[i] + a_[i] * u[i] * u[i];
    }
    return F;
}

double NonlinearProblem::residual_inf(const StateVector& s) const {
    double worst = 0.0;
    for (double f : residual(s)) worst = std::max(worst, std::abs(f));
    return worst;
}

Tridiagonal NonlinearProblem::jacobian(const StateVector& s) const {
    const int n = grid_.n_interior;
    const double h2 = grid_.h() * grid_.h();
    Tridiagonal J;
    J.off = -1.0 / h2;
    J.diag.resize(n);
    for (int i = 0; i < n; ++i)
        J.diag[i] = 2.0 / h2 - s.mu - s.lambda * m_[i] + 2.0 * a_[i] * s.u[i];
    return J;
}

std::vector<double> NonlinearProblem::dresidual_dlambda(const StateVector& s) const {
    std::vector<double> b(grid_.n_interior);
    for (int i = 0; i < grid_.n_interior; ++i) b[i] = -m_[i] * s.u[i];
    return b;
}

double NonlinearProblem::l2(std::span<const double> u) const {
    return l2_norm(grid_, u);
}

int NonlinearProblem::negative_jacobian_eigenvalues(const StateVector& s) const {
    return sturm_count_below(jacobian(s), 0.0);
}

SolutionRecord NonlinearProblem::record(const StateVector& s) const {
    SolutionRecord rec;
    rec.state = s;
    rec.l2 = l2(s.u);
    rec.node_count = count_nodes(s.u);
    rec.residual_norm = residual_inf(s);
    rec.stability_hint = negative_jacobian_eigenvalues(s);
    return rec;
}

namespace {

// One bordered Newton step: solve [J b; c^T d] (du, dlam) = -(F, c_res) by
// block elimination on the pivoted tridiagonal factorization of J.
bool bordered_step(const NonlinearProblem& prob, StateVector& s,
                   const std::optional<ArclengthConstraint>& con,
                   const std::vector<double>& F, double c_res) {
    Tridiagonal J = prob.jacobian(s);
    std::vector<double> negF(F.size());
    for (std::size_t i = 0; i < F.size(); ++i) negF[i] = -F[i];
    std::vector<double> y1 = tridiag_solve(J, 0.0, negF);
    double dlam = 0.0;
    if (con) {
        std::vector<double> b = prob.dresidual_dlambda(s);
        std::vector<double> y2 = tridiag_solve(J, 0.0, b);
        const double h = prob.grid().h();
        double cy1 = 0.0, cy2 = 0.0;
        for (std::size_t i = 0; i < y1.size(); ++i) {
            cy1 += con->tangent_u[i] * y1[i];
            cy2 += con->tangent_u[i] * y2[i];
        }
        cy1 *= h;
        cy2 *= h;
        double denom = con->tangent_lambda - cy2;
        if (denom == 0.0 || !std::isfinite(denom)) return false;
        dlam = (-c_res - cy1) / denom;
        for (std::size_t i = 0; i < y1.size(); ++i) y1[i] -= dlam * y2[i];
    }
    for (double v : y1)
        if (!std::isfinite(v)) return false;
    if (!std::isfinite(dlam)) return false;
    for (std::size_t i = 0; i < s.u.size(); ++i) s.u[i] += y1[i];
    s.lambda += dlam;
    return true;
}

double constraint_residual(const NonlinearProblem& prob, const StateVector& s,
                           const std::optional<ArclengthConstraint>& con) {
    if (!con) return 0.0;
    const double h = prob.grid().h();
    double dot = 0.0;
    for (std::size_t i = 0; i < s.u.size(); ++i) dot += con->tangent_u[i] * s.u[i];
    return h * dot + con->tangent_lambda * s.lambda - con->target;
}

}  // namespace

NewtonOutcome newton_correct(const NonlinearProblem& prob, const StateVector& initial,
                             const std::optional<ArclengthConstraint>& constraint,
                             const NewtonOptions& opts, bool nothrow) {
    if (!(opts.tol > 0.0) || opts.max_iter < 1)
        throw ConfigError("newton_correct: invalid tolerance or iteration cap");

    NewtonOutcome out;
    out.state = initial;
    auto merit = [&](const StateVector& s) {
        double r = prob.residual_inf(s);
        return std::max(r, std::abs(constraint_residual(prob, s, constraint)));
    };
    double res = merit(out.state);

    for (int it = 0; it < opts.max_iter; ++it) {
        if (res <= opts.tol) {
            out.converged = true;
            out.residual_norm = res;
            out.iterations = it;
            return out;
        }
        StateVector trial = out.state;
        std::vector<double> F = prob.residual(trial);
        double c_res = constraint_residual(prob, trial, constraint);
        if (!bordered_step(prob, trial, constraint, F, c_res)) break;

        // step halving toward the current iterate while the merit increases
        double new_res = merit(trial);
        StateVector best = trial;
        double best_res = new_res;
        for (int halving = 0; halving < opts.max_halvings && best_res >= res; ++halving) {
            for (std::size_t i = 0; i < trial.u.size(); ++i)
                trial.u[i] = 0.5 * (trial.u[i] + out.state.u[i]);
            trial.lambda = 0.5 * (trial.lambda + out.state.lambda);
            double r = merit(trial);
            if (r < best_res) {
                best = trial;
                best_res = r;
            }
        }
        out.state = std::move(best);
        res = best_res;
    }

    out.residual_norm = res;
    out.converged = res <= opts.tol;
    if (!out.converged && !nothrow)
        throw NumericError("newton_correct: no convergence", res);
    return out;
}

SolutionRecord newton_correct_record(const NonlinearProblem& prob,
                                     const StateVector& initial,
                                     const std::optional<ArclengthConstraint>& constraint,
                                     const NewtonOptions& opts) {
    NewtonOutcome out = newton_correct(prob, initial, constraint, opts);
    return prob.record(out.state);
}

}  // namespace nodal
