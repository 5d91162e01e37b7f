#pragma once

#include <memory>
#include <vector>

#include "nodal/eigen.hpp"
#include "nodal/weights.hpp"

namespace nodal {

// Tabulated (lambda, Sigma_n(lambda)) data for one mode with central
// difference estimates at interior sample points (NaN at the ends).
struct EigencurveSample {
    int mode = 1;
    std::vector<double> lambdas;
    std::vector<double> values;
    std::vector<double> d1;
    std::vector<double> d2;

    double step() const { return lambdas.size() > 1 ? lambdas[1] - lambdas[0] : 0.0; }
};

enum class RootLabel { Minus, Plus, MinusOuter, MinusInner, PlusInner, PlusOuter };

struct BifurcationPoint {
    int mode = 1;
    RootLabel label = RootLabel::Minus;
    double lambda = 0.0;
    double mu = 0.0;
    double slope = 0.0;      // Sigma_n'(lambda)
    bool at_boundary = false;  // root at a sample endpoint; range may clip roots
};

struct CurveExtremum {
    int mode = 1;
    double mu_n = 0.0;
    std::vector<double> argmax;  // one or two locations (symmetric weights)
};

struct ConcavityReport {
    bool globally_concave = false;
    double second_diff_at_zero = 0.0;
};

// Evaluator for Sigma_n(lambda) = sigma_n[-D^2 - lambda m; (0,1)] with a fixed
// weight, scheme and resolution.  The spectral backend precomputes the weight
// matrix once so each lambda costs one dense decomposition; the FD backend
// runs Sturm bisection per mode.  Thread-safe: evaluation is pure.
class CurveSolver {
  public:
    CurveSolver(Weight m, Scheme scheme, int n_interior = 2000, int n_modes = 64);

    double sigma(double lambda, int mode) const;
    std::vector<double> sigmas(double lambda, int n_max) const;

    // Central difference slope with spacing delta.
    double slope(double lambda, int mode, double delta) const;

    const Weight& weight() const { return m_; }
    Scheme scheme() const { return scheme_; }

  private:
    Weight m_;
    Scheme scheme_;
    Grid grid_;
    std::vector<double> m_nodes_;       // FD: m at grid nodes
    Eigen::MatrixXd weight_matrix_;     // spectral: 2 Int m sin_i sin_j
    std::vector<double> base_diag_;     // spectral: (j pi)^2
};

// Sample Sigma_mode over [lo, hi] with spacing dl (>= 5 points), parallel
// over lambda when jobs > 1; deterministic output regardless of jobs.
EigencurveSample sample_curve(const CurveSolver& solver, int mode, double lo,
                              double hi, double dl, int jobs = 1);

// All modes 1..n_max in one sweep (one decomposition per lambda on the
// spectral backend).
std::vector<EigencurveSample> sample_curves(const CurveSolver& solver, int n_max,
                                            double lo, double hi, double dl,
                                            int jobs = 1);

// Roots of Sigma_n(lambda) = mu: every bracketed sign change refined to
// |Sigma - mu| <= 1e-8, plus tangential touches at near-zero local minima of
// |Sigma - mu|.  Labels by sign and magnitude ordering.
std::vector<BifurcationPoint> roots_at_level(const CurveSolver& solver,
                                             const EigencurveSample& sample,
                                             double mu);

// Parabolic refinement of the discrete maximum; collects every local maximum
// within 1e-6 of the best.  Throws RangeError-like ConfigError when the
// maximum sits at a range endpoint.
CurveExtremum curve_maximum(const CurveSolver& solver, const EigencurveSample& sample);

// globally_concave iff all interior second differences < +1e-8;
// second_diff_at_zero requires lambda = 0 to be a sample point.
ConcavityReport concavity_report(const EigencurveSample& sample);

// Upper bound (n pi / (2 eps))^2 - lambda * m_L for Sigma_n(lambda), lambda>0,
// with eps the largest of {0.2, 0.1, 0.05, 0.02} keeping J_eps inside (0,1)
// and m positive on it.
double decay_bound(const Weight& m, int mode, double lambda);

// e^{-Sigma_1(lambda_i)} for a mode-1 sample.
double spectral_radius(const EigencurveSample& sample, std::size_t index);

}  // namespace nodal
