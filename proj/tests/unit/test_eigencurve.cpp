#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nodal/eigencurve.hpp"

using namespace nodal;

namespace {
constexpr double pi = std::numbers::pi;

const CurveSolver& spectral_solver_sine2() {
    static CurveSolver solver(Weight::sine(2), Scheme::SineSpectral, 8, 64);
    return solver;
}
}  // namespace

TEST_CASE("sigma at lambda = 0 is (n pi)^2") {
    const auto& s = spectral_solver_sine2();
    for (int n = 1; n <= 5; ++n)
        CHECK(s.sigma(0.0, n) == doctest::Approx(n * n * pi * pi).epsilon(1e-10));
    CHECK(s.sigma(0.0, 2) == doctest::Approx(39.4784176044).epsilon(1e-8));
}

TEST_CASE("evenness of the curves for sine(2k)") {
    const auto& s = spectral_solver_sine2();
    for (double lam : {10.0, 50.0, 100.0})
        for (int n = 1; n <= 3; ++n)
            CHECK(std::abs(s.sigma(lam, n) - s.sigma(-lam, n)) < 1e-6);
}

TEST_CASE("fd and spectral schemes agree") {
    CurveSolver fd(Weight::sine(2), Scheme::CenteredFD, 2000);
    const auto& sp = spectral_solver_sine2();
    CHECK(std::abs(fd.sigma(50.0, 1) - sp.sigma(50.0, 1)) < 1e-3);
}

TEST_CASE("sample_curve layout and derivative stencils") {
    const auto& s = spectral_solver_sine2();
    auto sample = sample_curve(s, 2, -10.0, 10.0, 0.5, 2);
    REQUIRE(sample.lambdas.size() == 41);
    CHECK(sample.lambdas.front() == doctest::Approx(-10.0));
    CHECK(sample.lambdas.back() == doctest::Approx(10.0));
    CHECK(std::isnan(sample.d1.front()));
    CHECK(std::isnan(sample.d2.back()));
    // slope at 0 vanishes by evenness
    std::size_t mid = 20;
    CHECK(sample.lambdas[mid] == doctest::Approx(0.0));
    CHECK(std::abs(sample.d1[mid]) < 1e-6);
    CHECK_THROWS_AS(sample_curve(s, 2, 0.0, 1.0, 0.5, 1), ConfigError);
}

TEST_CASE("roots at a four-root level") {
    const auto& s = spectral_solver_sine2();
    auto sample = sample_curve(s, 2, -120.0, 120.0, 0.5);
    auto roots = roots_at_level(s, sample, 45.0);
    REQUIRE(roots.size() == 4);
    CHECK(roots[0].label == RootLabel::MinusOuter);
    CHECK(roots[1].label == RootLabel::MinusInner);
    CHECK(roots[2].label == RootLabel::PlusInner);
    CHECK(roots[3].label == RootLabel::PlusOuter);
    CHECK(std::abs(roots[0].lambda + roots[3].lambda) < 1e-4);
    CHECK(std::abs(roots[1].lambda + roots[2].lambda) < 1e-4);
    // regression fixtures from the first computation
    CHECK(roots[3].lambda == doctest::Approx(85.1064).epsilon(2e-4));
    CHECK(roots[2].lambda == doctest::Approx(28.1196).epsilon(2e-4));
    for (const auto& r : roots) CHECK(std::abs(s.sigma(r.lambda, 2) - 45.0) <= 1e-8);
    // slopes alternate +,-,+,-
    CHECK(roots[0].slope > 0);
    CHECK(roots[1].slope < 0);
    CHECK(roots[2].slope > 0);
    CHECK(roots[3].slope < 0);
}

TEST_CASE("roots at a two-root level") {
    const auto& s = spectral_solver_sine2();
    auto sample = sample_curve(s, 1, -120.0, 120.0, 0.5);
    auto roots = roots_at_level(s, sample, 0.0);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0].label == RootLabel::Minus);
    CHECK(roots[1].label == RootLabel::Plus);
    CHECK(roots[0].lambda < 0.0);
    CHECK(roots[1].lambda > 0.0);
}

TEST_CASE("tangential level reports the collapsed inner pair near zero") {
    const auto& s = spectral_solver_sine2();
    auto sample = sample_curve(s, 2, -120.0, 120.0, 0.5);
    auto roots = roots_at_level(s, sample, 4 * pi * pi);
    REQUIRE(roots.size() == 4);
    CHECK(std::abs(roots[1].lambda) <= 1e-3);
    CHECK(std::abs(roots[2].lambda) <= 1e-3);
}

TEST_CASE("curve maximum for mode 2 sits in the documented bracket") {
    const auto& s = spectral_solver_sine2();
    auto sample = sample_curve(s, 2, -120.0, 120.0, 0.5);
    auto ext = curve_maximum(s, sample);
    CHECK(ext.mu_n > 45.0);
    CHECK(ext.mu_n < 54.0);
    CHECK(ext.mu_n == doctest::Approx(49.05614).epsilon(1e-4));  // regression
    REQUIRE(ext.argmax.size() == 2);
    CHECK(std::abs(ext.argmax[0] + ext.argmax[1]) < 1e-2);
    CHECK(ext.argmax[1] == doctest::Approx(56.098).epsilon(1e-2));
}

TEST_CASE("curve maximum for mode 1 is at lambda = 0") {
    const auto& s = spectral_solver_sine2();
    auto sample = sample_curve(s, 1, -60.0, 60.0, 0.5);
    auto ext = curve_maximum(s, sample);
    CHECK(ext.mu_n == doctest::Approx(pi * pi).epsilon(1e-8));
    REQUIRE(ext.argmax.size() == 1);
    CHECK(std::abs(ext.argmax[0]) < 1e-4);
}

TEST_CASE("maximum at the window edge is rejected") {
    const auto& s = spectral_solver_sine2();
    auto sample = sample_curve(s, 4, -100.0, 100.0, 1.0);  // mu_4 lives near 295
    CHECK_THROWS_AS(curve_maximum(s, sample), ConfigError);
}

TEST_CASE("concavity dichotomy for sine(2)") {
    CurveSolver fd(Weight::sine(2), Scheme::CenteredFD, 2000);
    auto c1 = sample_curve(fd, 1, -200.0, 200.0, 2.0, 2);
    auto rep1 = concavity_report(c1);
    CHECK(rep1.globally_concave);
    auto c2 = sample_curve(fd, 2, -200.0, 200.0, 2.0, 2);
    auto rep2 = concavity_report(c2);
    CHECK_FALSE(rep2.globally_concave);
    // resonant pair n = 2k: the honest second difference is 5/(24 pi^2)
    CHECK(rep2.second_diff_at_zero == doctest::Approx(5.0 / (24 * pi * pi)).epsilon(2e-2));
}

TEST_CASE("sine(4) keeps two concave curves on the window") {
    CurveSolver fd(Weight::sine(4), Scheme::CenteredFD, 2000);
    auto c2 = sample_curve(fd, 2, -200.0, 200.0, 2.0, 2);
    CHECK(concavity_report(c2).globally_concave);
    auto c3 = sample_curve(fd, 3, -200.0, 200.0, 2.0, 2);
    CHECK_FALSE(concavity_report(c3).globally_concave);
}

TEST_CASE("decay bound dominates the curve and decays linearly") {
    Weight m = Weight::sine(2);
    const auto& s = spectral_solver_sine2();
    // witness x+ = 0.25, largest admissible eps = 0.2, m_L = sin(0.1 pi)
    double expect = std::pow(2 * pi / 0.4, 2) - 500.0 * std::sin(0.1 * pi);
    CHECK(decay_bound(m, 2, 500.0) == doctest::Approx(expect).epsilon(1e-10));
    CHECK(s.sigma(500.0, 2) < decay_bound(m, 2, 500.0));
    for (double lam : {100.0, 200.0, 400.0})
        for (int n = 1; n <= 5; ++n)
            CHECK(s.sigma(lam, n) <= decay_bound(m, n, lam));
    // linear decay in lambda
    double b1 = decay_bound(m, 2, 1000.0), b2 = decay_bound(m, 2, 2000.0);
    CHECK(b2 - b1 == doctest::Approx(-1000.0 * std::sin(0.1 * pi)).epsilon(1e-10));
    CHECK_THROWS_AS(decay_bound(Weight::constant(-1.0), 1, 10.0), PreconditionError);
    // constant positive weight still admits the bound
    CHECK(decay_bound(Weight::constant(1.0), 1, 10.0) ==
          doctest::Approx(std::pow(pi / 0.4, 2) - 10.0).epsilon(1e-10));
}

TEST_CASE("spectral radius of the semigroup") {
    const auto& s = spectral_solver_sine2();
    auto sample = sample_curve(s, 1, -30.0, 30.0, 0.5);
    std::size_t mid = 60;
    REQUIRE(sample.lambdas[mid] == doctest::Approx(0.0));
    CHECK(spectral_radius(sample, mid) == doctest::Approx(std::exp(-pi * pi)).epsilon(1e-9));
    // logarithmic convexity: second differences of -Sigma_1 are >= -1e-8
    for (std::size_t i = 1; i + 1 < sample.values.size(); ++i)
        CHECK(-sample.d2[i] >= -1e-8);
    // symmetric in lambda
    for (std::size_t i = 0; i < sample.values.size(); ++i) {
        std::size_t j = sample.values.size() - 1 - i;
        CHECK(std::abs(spectral_radius(sample, i) - spectral_radius(sample, j)) <
              1e-6 * spectral_radius(sample, i));
    }
    auto s2 = sample_curve(s, 2, -10.0, 10.0, 0.5);
    CHECK_THROWS_AS(spectral_radius(s2, 0), PreconditionError);
}
