#pragma once

#include <optional>
#include <vector>

#include "nodal/eigencurve.hpp"
#include "nodal/nonlinear.hpp"

namespace nodal {

enum class TerminationKind {
    LambdaRangeExit,
    NormCap,
    StepFloor,
    ClosedLoop,
    TrivialReconnect,
    MaxPoints,
};

struct Termination {
    TerminationKind kind = TerminationKind::MaxPoints;
    // For TrivialReconnect: the refined crossing and the matched known
    // bifurcation value (if any within the matching window).
    double lambda_cross = 0.0;
    std::optional<double> matched_bifurcation;
};

enum class OriginKind { TrivialBifurcation, MuHomotopy, Manual };

struct Branch {
    int id = 0;
    OriginKind origin = OriginKind::Manual;
    double origin_lambda = 0.0;  // bifurcation value for TrivialBifurcation
    double origin_eps = 0.0;
    int mode = 0;  // eigen mode at onset (node_count + 1), 0 when unknown
    std::vector<SolutionRecord> points;
    Termination termination;

    double mu() const { return points.empty() ? 0.0 : points.front().state.mu; }
    double min_l2() const;
    double max_l2() const;
    const SolutionRecord& max_l2_point() const;
};

struct ContinuationConfig {
    double ds0 = 0.05;       // initial arclength step (0 = from seed amplitude)
    double ds_min = 1e-6;
    double ds_max = 5.0;
    double tol = 1e-8;       // corrector residual tolerance
    int max_points = 4000;
    int max_corrector_iters = 12;
    double lambda_lo = -450.0;
    double lambda_hi = 450.0;
    double norm_cap = 50.0;
};

// Predictor at a simple bifurcation point: eps times the unit-L2 eigenfunction
// of -D^2 - lambda m at bp.lambda plus a first-order lambda offset, corrected
// by an amplitude-constrained Newton solve.  Transversality |slope| >= 1e-8
// is required.
StateVector branch_switch(const NonlinearProblem& prob, const BifurcationPoint& bp,
                          double mu, double eps, const NewtonOptions& opts = {});

// Pseudo-arclength tracing from a corrected seed.  `previous` anchors the
// first secant tangent (the bifurcation point itself for onset branches).
// known_bifurcations are the discrete roots of Sigma_mode = mu on the trace
// grid, used to classify TrivialReconnect terminations.
Branch trace(const NonlinearProblem& prob, const StateVector& seed,
             const StateVector& previous, const ContinuationConfig& cfg,
             const std::vector<double>& known_bifurcations);

// Continue the max-l2 point of `source` from its mu to mu_target in `steps`
// fixed-lambda Newton increments (halving the mu step on failure), then trace
// the branch at mu_target in both directions and join the halves.
Branch mu_homotopy(const NonlinearProblem& prob, const Branch& source,
                   double mu_target, int steps, const ContinuationConfig& cfg);

// Roots of Sigma_n(lambda) = mu for each mode in [mode_lo, mode_hi], merged
// and sorted by lambda.
std::vector<BifurcationPoint> detect_bifurcation_values(const CurveSolver& solver,
                                                        double mu, int mode_lo,
                                                        int mode_hi, double lambda_lo,
                                                        double lambda_hi, double dl);

// Discrete counterparts of the bifurcation values on the trace grid: roots of
// the FD eigencurve at the grid resolution (what trace() reconnects to).
std::vector<double> grid_bifurcation_values(const NonlinearProblem& prob, int mode,
                                            double mu, double lambda_lo,
                                            double lambda_hi, double dl);

// Trace from every +/-eps direction at the given onset points and collect
// the branches (2 per bifurcation point, deterministic order).  When a
// corrector fails at the predictor, one retry runs with a seed-derived
// perturbation of the switch amplitude.
std::vector<Branch> trace_from_bifurcations(const NonlinearProblem& prob,
                                            const std::vector<double>& onset_lambdas,
                                            int mode, double mu, double eps,
                                            const ContinuationConfig& cfg,
                                            int jobs = 1,
                                            unsigned long long seed = 0);

// Union-find style component count over onset points: TrivialReconnect edges
// join onset points; every onset point with at least one traced branch counts.
int count_components(const std::vector<double>& onset_lambdas,
                     const std::vector<Branch>& branches, double match_tol = 1e-3);

}  // namespace nodal
