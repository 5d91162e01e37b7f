#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nodal/weights.hpp"

using namespace nodal;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("paper-a piecewise values") {
    Weight a = Weight::paper_a();
    CHECK(a(0.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a(0.1) == doctest::Approx(-0.2).epsilon(1e-12));
    CHECK(std::abs(a(0.0)) < 1e-15);
    CHECK(std::abs(a(1.0)) < 1e-15);
    CHECK(std::abs(a(0.2)) < 1e-12);
    CHECK(std::abs(a(0.8)) < 1e-12);
}

TEST_CASE("paper-a continuity at the breakpoints") {
    Weight a = Weight::paper_a();
    for (double x0 : {0.2, 0.8}) {
        double left = a(x0 - 1e-9), right = a(x0 + 1e-9);
        CHECK(std::abs(left - right) < 1e-7);  // slope ~ pi/0.2, 1e-9 offset
    }
    // strict limit check at machine-level offsets
    CHECK(std::abs(a(std::nextafter(0.2, 0.0)) - a(std::nextafter(0.2, 1.0))) < 1e-12);
    CHECK(std::abs(a(std::nextafter(0.8, 0.0)) - a(std::nextafter(0.8, 1.0))) < 1e-12);
}

TEST_CASE("paper-a sign pattern") {
    Weight a = Weight::paper_a();
    for (int i = 1; i < 2000; ++i) {
        double x = i / 2000.0;
        double v = a(x);
        if (x > 0.0005 && x < 0.1995) CHECK(v < 0.0);
        if (x > 0.2005 && x < 0.7995) CHECK(v > 0.0);
        if (x > 0.8005 && x < 0.9995) CHECK(v < 0.0);
    }
}

TEST_CASE("paper-a is even about 1/2") {
    Weight a = Weight::paper_a();
    for (int i = 0; i <= 1000; ++i) {
        double x = i / 1000.0;
        CHECK(std::abs(a(x) - a(1.0 - x)) < 1e-12);
    }
}

TEST_CASE("sine weights") {
    Weight m2 = Weight::sine(2);
    CHECK(m2(0.25) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m2(0.75) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK_THROWS_AS(m2(1.5), DomainError);
    CHECK_THROWS_AS(m2(-0.1), DomainError);
    CHECK_THROWS_AS(Weight::sine(0), ConfigError);
}

TEST_CASE("odd symmetry about 1/2") {
    CHECK(Weight::sine(2).is_odd_about_half(1e-12));
    CHECK(Weight::sine(4).is_odd_about_half(1e-12));
    CHECK(Weight::sine(6).is_odd_about_half(1e-12));
    CHECK_FALSE(Weight::sine(3).is_odd_about_half(1e-12));
    CHECK(Weight::constant(0.0).is_odd_about_half(1e-12));
    CHECK_FALSE(Weight::paper_a().is_odd_about_half(1e-12));
}

TEST_CASE("sign change witnesses") {
    auto w2 = Weight::sine(2).sign_change_witnesses();
    REQUIRE(w2.has_value());
    CHECK(w2->first == doctest::Approx(0.75).epsilon(1e-3));   // argmin
    CHECK(w2->second == doctest::Approx(0.25).epsilon(1e-3));  // argmax
    CHECK_FALSE(Weight::constant(1.0).sign_change_witnesses().has_value());
    auto wa = Weight::paper_a().sign_change_witnesses();
    REQUIRE(wa.has_value());
    CHECK(Weight::paper_a()(wa->first) < 0.0);
    CHECK(wa->second == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("tabulated weight interpolates linearly") {
    Weight t = Weight::tabulated({0.0, 1.0, 0.0});
    CHECK(t(0.25) == doctest::Approx(0.5));
    CHECK(t(0.5) == doctest::Approx(1.0));
    CHECK(t(1.0) == doctest::Approx(0.0));
    CHECK_THROWS_AS(Weight::tabulated({1.0}), ConfigError);
}

TEST_CASE("odd-symmetry probe property for sine(2k)") {
    for (int k : {1, 2, 3}) {
        Weight m = Weight::sine(2 * k);
        for (int i = 0; i <= 2000; ++i) {
            double x = i / 2000.0;
            CHECK(std::abs(m(x) + m(1.0 - x)) <= 1e-12);
        }
    }
}
