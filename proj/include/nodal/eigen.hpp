#pragma once

#include <span>
#include <vector>

#include "nodal/operators.hpp"

namespace nodal {

enum class Normalization { UnitL2, HalfL2 };

// n-th eigenvalue with its eigenfunction sampled on a grid.  node_count is
// the number of strict interior sign changes and must equal index-1.
struct EigenPair {
    int index = 1;
    double value = 0.0;
    std::vector<double> values;  // grid samples, sign-fixed (first value > 0)
    int node_count = 0;
    Normalization normalization = Normalization::UnitL2;
};

// Number of eigenvalues of T strictly below sigma (Sturm sequence count).
int sturm_count_below(const Tridiagonal& t, double sigma);

// Sign changes between consecutive entries whose magnitudes both exceed
// floor_rel * max|v|.
int count_nodes(std::span<const double> v, double floor_rel = 1e-9);

// n-th smallest eigenvalue, 1-based.  CenteredFD: Sturm bisection to 1e-10.
// SineSpectral: dense symmetric decomposition.
double nth_eigenvalue(const DiscreteOperator& op, int n);

// All eigenvalues up to n_max (ascending), sharing one decomposition /
// bisection sweep.
std::vector<double> eigenvalues_up_to(const DiscreteOperator& op, int n_max);

// Eigenvector via inverse iteration (CenteredFD) or the dense decomposition
// mapped onto output_grid (SineSpectral).  For CenteredFD the operator's own
// grid is used and output_grid is ignored.
EigenPair nth_eigenpair(const DiscreteOperator& op, int n, Normalization norm,
                        const Grid& output_grid);
EigenPair nth_eigenpair(const DiscreteOperator& op, int n, Normalization norm);

// Strict monotonicity of sigma_n under q <= q_tilde (same interval) or under
// interval shrinkage (same potential): returns whether the computed
// eigenvalues satisfy the strict inequality.  Preconditions are checked on a
// probe grid.
bool monotonicity_check(const Potential& q, const Potential& q_tilde,
                        const Grid& outer, const Grid& inner, int n);

}  // namespace nodal
