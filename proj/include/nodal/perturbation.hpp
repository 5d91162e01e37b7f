#pragma once

#include <vector>

#include "nodal/grid.hpp"

namespace nodal {

// Ingredients of the second-order expansion of Sigma_n at lambda = 0 for the
// weight sin(2k pi x): particular solution p, coefficient B and the
// derivative eigenfunction B sin(n pi x) + p(x).
struct PerturbationProfile {
    int n = 2;
    int k = 1;
    std::vector<double> p;
    std::vector<double> phi_dot;
    double B = 0.0;
};

// (1/n pi) Int_0^x sin(2k pi s) sin(n pi s) sin(n pi (s-x)) ds, adaptive
// Simpson to ~1e-11 absolute.
double p_quadrature(int n, int k, double x);

// Closed form of the same integral; valid for every n != k.
double p_closed_form(int n, int k, double x);

PerturbationProfile phi_dot(int n, int k, const Grid& grid);

enum class SigmaDdotRoute { ClosedForm, Quadrature2_15, CurveFD };

// Second derivative of Sigma_n at lambda = 0 for m = sin(2k pi x).
//   ClosedForm     : 1 / (4 pi^2 (n^2 - k^2)), n >= k+1 only
//   Quadrature2_15 : -4 Int m phi_dot phi, cross-checked against -4 Int m phi p
//   CurveFD        : five-point stencil on the spectral eigencurve, spacing 0.25
double sigma_ddot_zero(int n, int k, SigmaDdotRoute route);

}  // namespace nodal
