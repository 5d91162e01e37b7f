#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>

#include "nodal/grid.hpp"
#include "nodal/linalg.hpp"

namespace nodal {

enum class Scheme { CenteredFD, SineSpectral };

using Potential = std::function<double(double)>;

// Discrete representation of -D^2 + q(x) with Dirichlet conditions.
// CenteredFD: symmetric tridiagonal on `grid`.
// SineSpectral: dense symmetric matrix in the basis {sqrt(2) sin(j pi x)},
// j = 1..M, on (0,1).
struct DiscreteOperator {
    Scheme scheme = Scheme::CenteredFD;
    Grid grid = Grid::unit(2);
    Tridiagonal tri;        // CenteredFD
    Eigen::MatrixXd dense;  // SineSpectral

    int dimension() const {
        return scheme == Scheme::CenteredFD ? tri.size()
                                            : static_cast<int>(dense.rows());
    }
};

// diagonal[i] = 2/h^2 + q(x_i), off-diagonal -1/h^2.  N < 8 is rejected.
DiscreteOperator assemble_fd(const Grid& grid, const Potential& q);

// entry(i,j) = (i pi)^2 delta_ij + 2 Int_0^1 q sin(i pi x) sin(j pi x) dx,
// composite trapezoid on >= 8M panels.  M < 4 is rejected.
DiscreteOperator assemble_spectral(int modes, const Potential& q);

// Composite-trapezoid L2 norm of interior grid values with implicit zero
// boundary values.
double l2_norm(const Grid& grid, std::span<const double> values);

// h-weighted inner product of interior grid vectors (same quadrature).
double l2_inner(const Grid& grid, std::span<const double> a, std::span<const double> b);

}  // namespace nodal
