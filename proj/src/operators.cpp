#include "nodal/operators.hpp"

#include <cmath>
#include <numbers>

namespace nodal {

namespace {
constexpr double kPi = std::numbers::pi;
}

DiscreteOperator assemble_fd(const Grid& grid, const Potential& q) {
    if (grid.n_interior < 8)
        throw ConfigError("assemble_fd: need at least 8 interior points");
    const int n = grid.n_interior;
    const double h = grid.h();
    DiscreteOperator op;
    op.scheme = Scheme::CenteredFD;
    op.grid = grid;
    op.tri.diag.resize(n);
    op.tri.off = -1.0 / (h * h);
    for (int i = 0; i < n; ++i)
        op.tri.diag[i] = 2.0 / (h * h) + q(grid.node(i));
    return op;
}

DiscreteOperator assemble_spectral(int modes, const Potential& q) {
    if (modes < 4) throw ConfigError("assemble_spectral: need at least 4 modes");
    // trapezoid error carries a non-vanishing h^4 term for the odd-frequency
    // components; 64M panels keeps every entry below 1e-10 absolute
    const int panels = std::max(1024, 64 * modes);
    const double dx = 1.0 / panels;

    // q and basis values at the interior quadrature points; the boundary
    // points contribute nothing since sin vanishes there.
    std::vector<double> qv(panels - 1);
    Eigen::MatrixXd basis(modes, panels - 1);
    for (int t = 1; t < panels; ++t) {
        double x = t * dx;
        qv[t - 1] = q(x);
        for (int j = 0; j < modes; ++j)
            basis(j, t - 1) = std::sin((j + 1) * kPi * x);
    }

    DiscreteOperator op;
    op.scheme = Scheme::SineSpectral;
    op.dense = Eigen::MatrixXd::Zero(modes, modes);
    for (int i = 0; i < modes; ++i) {
        for (int j = i; j < modes; ++j) {
            double sum = 0.0;
            for (int t = 0; t < panels - 1; ++t)
                sum += qv[t] * basis(i, t) * basis(j, t);
            double v = 2.0 * sum * dx;
            op.dense(i, j) = v;
            op.dense(j, i) = v;
        }
        op.dense(i, i) += ((i + 1) * kPi) * ((i + 1) * kPi);
    }
    return op;
}

double l2_norm(const Grid& grid, std::span<const double> values) {
    return std::sqrt(std::max(0.0, l2_inner(grid, values, values)));
}

double l2_inner(const Grid& grid, std::span<const double> a, std::span<const double> b) {
    if (static_cast<int>(a.size()) != grid.n_interior ||
        static_cast<int>(b.size()) != grid.n_interior)
        throw ConfigError("l2_inner: value count does not match grid");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
    return sum * grid.h();
}

}  // namespace nodal
