#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nodal/eigen.hpp"
#include "nodal/weights.hpp"

using namespace nodal;

namespace {
constexpr double pi = std::numbers::pi;

DiscreteOperator fd_op(int n_interior, const Potential& q) {
    return assemble_fd(Grid::unit(n_interior), q);
}
}  // namespace

TEST_CASE("fd eigenvalues match the discrete closed form") {
    const int N = 500;
    auto op = fd_op(N, [](double) { return 0.0; });
    const double h = 1.0 / (N + 1);
    for (int n = 1; n <= 5; ++n) {
        double exact = 2.0 / (h * h) * (1.0 - std::cos(n * pi * h));
        CHECK(std::abs(nth_eigenvalue(op, n) - exact) < 1e-8);
    }
}

TEST_CASE("spectral eigenvalues of the free operator") {
    auto op = assemble_spectral(16, [](double) { return 0.0; });
    CHECK(nth_eigenvalue(op, 1) == doctest::Approx(pi * pi).epsilon(1e-12));
    CHECK(nth_eigenvalue(op, 2) == doctest::Approx(4 * pi * pi).epsilon(1e-12));
    CHECK_THROWS_AS(nth_eigenvalue(op, 0), IndexError);
    CHECK_THROWS_AS(nth_eigenvalue(op, 17), IndexError);
}

TEST_CASE("constant shift moves every eigenvalue exactly") {
    auto op0 = fd_op(300, [](double) { return 0.0; });
    auto opc = fd_op(300, [](double) { return 13.25; });
    for (int n = 1; n <= 6; ++n)
        CHECK(nth_eigenvalue(opc, n) - nth_eigenvalue(op0, n) ==
              doctest::Approx(13.25).epsilon(1e-12));
}

TEST_CASE("eigenvalues strictly increase in n") {
    Weight m = Weight::sine(2);
    auto op = fd_op(400, [&](double x) { return -30.0 * m(x); });
    auto vals = eigenvalues_up_to(op, 8);
    for (std::size_t i = 1; i < vals.size(); ++i) CHECK(vals[i] > vals[i - 1]);
}

TEST_CASE("eigenpair: nodes, normalization, sign") {
    auto op = fd_op(800, [](double) { return 0.0; });
    auto p3 = nth_eigenpair(op, 3, Normalization::UnitL2);
    CHECK(p3.node_count == 2);
    CHECK(l2_norm(op.grid, p3.values) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(p3.values.front() > 0.0);
    // proportional to sin(3 pi x)
    double scale = p3.values[100] / std::sin(3 * pi * op.grid.node(100));
    for (int i = 0; i < 800; i += 37) {
        double expect = scale * std::sin(3 * pi * op.grid.node(i));
        CHECK(p3.values[i] == doctest::Approx(expect).epsilon(1e-6));
    }

    auto p1 = nth_eigenpair(op, 1, Normalization::HalfL2);
    CHECK(l2_norm(op.grid, p1.values) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-10));
    // HalfL2-normalized ground state is sin(pi x) itself
    for (int i = 0; i < 800; i += 61)
        CHECK(p1.values[i] == doctest::Approx(std::sin(pi * op.grid.node(i))).epsilon(1e-6));
}

TEST_CASE("eigenpair of a weighted operator keeps the sturm node count") {
    Weight m = Weight::sine(2);
    auto op = fd_op(2000, [&](double x) { return -50.0 * m(x); });
    auto p2 = nth_eigenpair(op, 2, Normalization::UnitL2);
    CHECK(p2.node_count == 1);
    auto p5 = nth_eigenpair(op, 5, Normalization::UnitL2);
    CHECK(p5.node_count == 4);
}

TEST_CASE("spectral eigenpair mapped onto a grid") {
    Weight m = Weight::sine(2);
    auto op = assemble_spectral(32, [&](double x) { return -20.0 * m(x); });
    auto pair = nth_eigenpair(op, 2, Normalization::UnitL2, Grid::unit(400));
    CHECK(pair.node_count == 1);
    CHECK(l2_norm(Grid::unit(400), pair.values) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("node counting ignores magnitude-floored entries") {
    std::vector<double> v{1.0, 1e-12, -1.0, 1e-13, 1.0};
    CHECK(count_nodes(v) == 2);
    std::vector<double> w{1.0, -1e-12, 1.0};
    CHECK(count_nodes(w) == 0);
    std::vector<double> z(5, 0.0);
    CHECK(count_nodes(z) == 0);
}

TEST_CASE("monotonicity in the potential and the interval") {
    auto zero = [](double) { return 0.0; };
    auto one = [](double) { return 1.0; };
    CHECK(monotonicity_check(zero, one, Grid::unit(200), Grid::unit(200), 1));
    CHECK(monotonicity_check(zero, zero, Grid::unit(200), Grid(0.25, 0.75, 200), 1));
    Weight m = Weight::sine(2);
    auto qm = [&](double x) { return -10.0 * m(x); };
    auto qp = [&](double x) { return 10.0 * m(x); };
    // q- <= q+ fails pointwise (they cross), so the hypothesis check fires
    CHECK_THROWS_AS(monotonicity_check(qp, qm, Grid::unit(200), Grid::unit(200), 2),
                    PreconditionError);
    // shifted version satisfies i): -10 m <= |10 m| pointwise is false too; use
    // q and q + positive bump instead
    auto qbump = [&](double x) { return -10.0 * m(x) + 2.0 * x; };
    CHECK(monotonicity_check(qm, qbump, Grid::unit(200), Grid::unit(200), 2));
}

TEST_CASE("sturm count below matches bisection output") {
    auto op = fd_op(300, [](double) { return 0.0; });
    double sig3 = nth_eigenvalue(op, 3);
    CHECK(sturm_count_below(op.tri, sig3 + 1e-6) == 3);
    CHECK(sturm_count_below(op.tri, sig3 - 1e-6) == 2);
}
