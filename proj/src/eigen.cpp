#include "nodal/eigen.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace nodal {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBisectTol = 1e-10;

// Gershgorin bracket [lo, hi] containing the whole spectrum.
std::pair<double, double> spectrum_bracket(const Tridiagonal& t) {
    double lo = t.diag[0], hi = t.diag[0];
    for (double d : t.diag) {
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    double r = 2.0 * std::abs(t.off);
    return {lo - r, hi + r};
}

double bisect_nth(const Tridiagonal& t, int n) {
    auto [lo, hi] = spectrum_bracket(t);
    while (hi - lo > kBisectTol) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (sturm_count_below(t, mid) >= n)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

// Inverse iteration for the eigenvector at converged shift sigma.
std::vector<double> inverse_iteration(const Tridiagonal& t, double sigma,
                                      const Grid& grid, int mode) {
    const int n = t.size();
    std::vector<double> v(n);
    // sin(mode pi xi) on the scaled interval: a good deterministic start with
    // the right nodal structure.
    for (int i = 0; i < n; ++i) {
        double xi = (grid.node(i) - grid.r) / (grid.s - grid.r);
        v[i] = std::sin(mode * kPi * xi);
    }
    double nrm = 0.0;
    for (double x : v) nrm += x * x;
    nrm = std::sqrt(nrm);
    for (double& x : v) x /= nrm;

    double best_res = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 50; ++it) {
        std::vector<double> w = tridiag_solve(t, sigma, v);
        double wn = 0.0;
        for (double x : w) wn += x * x;
        wn = std::sqrt(wn);
        if (!(wn > 0.0) || !std::isfinite(wn))
            throw NumericError("inverse iteration produced a degenerate vector", wn);
        for (double& x : w) x /= wn;
        v = std::move(w);
        // residual ||(T - sigma I) v|| with unit v
        double res = 0.0;
        for (int i = 0; i < n; ++i) {
            double r = (t.diag[i] - sigma) * v[i];
            if (i > 0) r += t.off * v[i - 1];
            if (i + 1 < n) r += t.off * v[i + 1];
            res += r * r;
        }
        res = std::sqrt(res);
        best_res = std::min(best_res, res);
        if (res <= 1e-8) return v;
    }
    throw NumericError("inverse iteration did not converge", best_res);
}

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> dense_solve(const DiscreteOperator& op,
                                                           bool with_vectors) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.compute(op.dense, with_vectors ? Eigen::ComputeEigenvectors
                                      : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw NumericError("dense eigen decomposition failed", 0.0);
    return es;
}

void check_index(const DiscreteOperator& op, int n) {
    if (n < 1 || n > op.dimension())
        throw IndexError("eigenvalue index out of range");
}

}  // namespace

int sturm_count_below(const Tridiagonal& t, double sigma) {
    const double off2 = t.off * t.off;
    int count = 0;
    double d = 1.0;
    for (int i = 0; i < t.size(); ++i) {
        d = (t.diag[i] - sigma) - (i > 0 ? off2 / d : 0.0);
        if (d == 0.0) d = -1e-300;
        if (d < 0.0) ++count;
    }
    return count;
}

int count_nodes(std::span<const double> v, double floor_rel) {
    double vmax = 0.0;
    for (double x : v) vmax = std::max(vmax, std::abs(x));
    const double floor = floor_rel * vmax;
    int changes = 0;
    double prev = 0.0;
    for (double x : v) {
        if (std::abs(x) <= floor) continue;
        if (prev != 0.0 && ((prev > 0) != (x > 0))) ++changes;
        prev = x;
    }
    return changes;
}

double nth_eigenvalue(const DiscreteOperator& op, int n) {
    check_index(op, n);
    if (op.scheme == Scheme::CenteredFD) return bisect_nth(op.tri, n);
    return dense_solve(op, false).eigenvalues()(n - 1);
}

std::vector<double> eigenvalues_up_to(const DiscreteOperator& op, int n_max) {
    check_index(op, n_max);
    std::vector<double> out(n_max);
    if (op.scheme == Scheme::CenteredFD) {
        for (int n = 1; n <= n_max; ++n) out[n - 1] = bisect_nth(op.tri, n);
    } else {
        auto ev = dense_solve(op, false).eigenvalues();
        for (int n = 1; n <= n_max; ++n) out[n - 1] = ev(n - 1);
    }
    return out;
}

EigenPair nth_eigenpair(const DiscreteOperator& op, int n, Normalization norm,
                        const Grid& output_grid) {
    check_index(op, n);
    EigenPair pair;
    pair.index = n;
    pair.normalization = norm;

    const Grid& grid = op.scheme == Scheme::CenteredFD ? op.grid : output_grid;
    if (op.scheme == Scheme::CenteredFD) {
        pair.value = bisect_nth(op.tri, n);
        pair.values = inverse_iteration(op.tri, pair.value, grid, n);
    } else {
        auto es = dense_solve(op, true);
        pair.value = es.eigenvalues()(n - 1);
        Eigen::VectorXd c = es.eigenvectors().col(n - 1);
        pair.values.assign(grid.n_interior, 0.0);
        const double sqrt2 = std::numbers::sqrt2;
        for (int i = 0; i < grid.n_interior; ++i) {
            double x = grid.node(i), sum = 0.0;
            for (int j = 0; j < c.size(); ++j)
                sum += c(j) * sqrt2 * std::sin((j + 1) * kPi * x);
            pair.values[i] = sum;
        }
    }

    double scale = l2_norm(grid, pair.values);
    if (!(scale > 0.0))
        throw NumericError("eigenfunction has vanishing norm", scale);
    double target = norm == Normalization::UnitL2 ? 1.0 : std::sqrt(0.5);
    for (double& x : pair.values) x *= target / scale;
    if (pair.values.front() < 0.0)
        for (double& x : pair.values) x = -x;

    pair.node_count = count_nodes(pair.values);
    if (pair.node_count != n - 1)
        throw ConsistencyError("eigenfunction node count " +
                               std::to_string(pair.node_count) + " != " +
                               std::to_string(n - 1) +
                               " (insufficient resolution?)");
    return pair;
}

EigenPair nth_eigenpair(const DiscreteOperator& op, int n, Normalization norm) {
    if (op.scheme == Scheme::CenteredFD) return nth_eigenpair(op, n, norm, op.grid);
    return nth_eigenpair(op, n, norm, Grid::unit(512));
}

bool monotonicity_check(const Potential& q, const Potential& q_tilde,
                        const Grid& outer, const Grid& inner, int n) {
    const bool same_interval = outer.r == inner.r && outer.s == inner.s;
    constexpr int probes = 257;
    if (same_interval) {
        bool strict_somewhere = false;
        for (int i = 1; i < probes; ++i) {
            double x = outer.r + (outer.s - outer.r) * i / probes;
            double a = q(x), b = q_tilde(x);
            if (a > b + 1e-14)
                throw PreconditionError("monotonicity_check: q > q_tilde at a probe point");
            if (b > a + 1e-14) strict_somewhere = true;
        }
        if (!strict_somewhere)
            throw PreconditionError("monotonicity_check: q == q_tilde everywhere on probes");
    } else {
        if (!(outer.r <= inner.r && inner.s <= outer.s &&
              (outer.r < inner.r || inner.s < outer.s)))
            throw PreconditionError("monotonicity_check: inner interval not contained in outer");
        for (int i = 1; i < probes; ++i) {
            double x = inner.r + (inner.s - inner.r) * i / probes;
            if (std::abs(q(x) - q_tilde(x)) > 1e-12)
                throw PreconditionError("monotonicity_check: potentials differ on the subinterval");
        }
    }
    double a = nth_eigenvalue(assemble_fd(outer, q), n);
    double b = nth_eigenvalue(assemble_fd(inner, q_tilde), n);
    return a < b;
}

}  // namespace nodal
