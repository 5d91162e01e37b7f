#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nodal/errors.hpp"

namespace nodal {

enum class WeightKind { SineM, PaperA, Constant, Tabulated };

// Number of equispaced probe points (endpoints included) used by the
// symmetry and sign diagnostics.
inline constexpr int kProbePoints = 2001;

// Coefficient function on [0,1].  Immutable after construction; cheap to copy.
//
// SineM(n)    : x -> sin(n*pi*x)
// PaperA      : the fixed three-piece sine profile, negative on (0,0.2) and
//               (0.8,1), positive on (0.2,0.8), zero at {0,0.2,0.8,1}
// Constant(v) : x -> v
// Tabulated   : linear interpolation of values given on a uniform grid
//               over [0,1] (endpoints included)
class Weight {
  public:
    static Weight sine(int frequency);
    static Weight paper_a();
    static Weight constant(double value);
    static Weight tabulated(std::vector<double> values);

    // Evaluate at x in [0,1]; throws DomainError outside.
    double operator()(double x) const;

    WeightKind kind() const { return kind_; }
    int frequency() const { return frequency_; }
    std::string describe() const;

    // max_x |w(1-x) + w(x)| <= tol over the probe grid.
    bool is_odd_about_half(double tol) const;

    // (x_minus, x_plus) with w(x_minus) < 0 < w(x_plus), taken as the probe
    // grid argmin/argmax; absent when w does not attain both signs.
    std::optional<std::pair<double, double>> sign_change_witnesses() const;

  private:
    Weight(WeightKind kind, int frequency, double value, std::vector<double> table)
        : kind_(kind), frequency_(frequency), value_(value), table_(std::move(table)) {}

    WeightKind kind_;
    int frequency_ = 0;
    double value_ = 0.0;
    std::vector<double> table_;
};

}  // namespace nodal
