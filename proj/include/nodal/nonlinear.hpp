#pragma once

#include <optional>
#include <vector>

#include "nodal/grid.hpp"
#include "nodal/linalg.hpp"
#include "nodal/weights.hpp"

namespace nodal {

// Candidate solution of -u'' - mu u = lambda m u - a u^2, u(0)=u(1)=0,
// sampled at grid interior nodes (boundary values implicitly zero).
struct StateVector {
    std::vector<double> u;
    double lambda = 0.0;
    double mu = 0.0;
};

struct SolutionRecord {
    StateVector state;
    double l2 = 0.0;
    int node_count = 0;
    double residual_norm = 0.0;
    int stability_hint = 0;  // negative Jacobian eigenvalues at the solution
};

// The discretized problem for fixed weights and grid; mu and lambda live in
// the state.  Pure evaluation, safe to share across threads.
class NonlinearProblem {
  public:
    NonlinearProblem(Weight m, Weight a, Grid grid);

    const Grid& grid() const { return grid_; }
    const std::vector<double>& m_values() const { return m_; }
    const std::vector<double>& a_values() const { return a_; }
    const Weight& m_weight() const { return mw_; }
    const Weight& a_weight() const { return aw_; }

    // F_i = (-u_{i-1} + 2u_i - u_{i+1})/h^2 - mu u_i - lambda m_i u_i + a_i u_i^2
    std::vector<double> residual(const StateVector& s) const;
    double residual_inf(const StateVector& s) const;

    // dF/du: tridiagonal, diag 2/h^2 - mu - lambda m_i + 2 a_i u_i
    Tridiagonal jacobian(const StateVector& s) const;

    // dF/dlambda = -m_i u_i
    std::vector<double> dresidual_dlambda(const StateVector& s) const;

    double l2(std::span<const double> u) const;
    int negative_jacobian_eigenvalues(const StateVector& s) const;
    SolutionRecord record(const StateVector& s) const;

  private:
    Weight mw_, aw_;
    Grid grid_;
    std::vector<double> m_, a_;
};

// Corrector constraint: either lambda is held fixed, or the bordered row
// h <tangent_u, u> + tangent_lambda * lambda = target is appended and lambda
// becomes an unknown (pseudo-arclength / amplitude constraints).
struct ArclengthConstraint {
    std::vector<double> tangent_u;
    double tangent_lambda = 0.0;
    double target = 0.0;
};

struct NewtonOptions {
    double tol = 1e-10;
    int max_iter = 25;
    int max_halvings = 6;
};

struct NewtonOutcome {
    StateVector state;
    double residual_norm = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Damped Newton (step halving when the residual fails to decrease).  Throws
// NumericError on non-convergence unless `nothrow` is set, in which case the
// last iterate is returned with converged = false.
NewtonOutcome newton_correct(const NonlinearProblem& prob, const StateVector& initial,
                             const std::optional<ArclengthConstraint>& constraint,
                             const NewtonOptions& opts, bool nothrow = false);

SolutionRecord newton_correct_record(const NonlinearProblem& prob,
                                     const StateVector& initial,
                                     const std::optional<ArclengthConstraint>& constraint,
                                     const NewtonOptions& opts);

}  // namespace nodal
