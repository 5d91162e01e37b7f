#include "nodal/perturbation.hpp"

#include <cmath>
#include <functional>
#include <numbers>

#include "nodal/eigencurve.hpp"
#include "nodal/errors.hpp"

namespace nodal {

namespace {

constexpr double kPi = std::numbers::pi;

double simpson_rec(const std::function<double(double)>& f, double a, double b,
                   double fa, double fm, double fb, double whole, double tol,
                   int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

// Adaptive Simpson, pre-split into panels so oscillatory integrands are
// resolved before the error estimate is trusted.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol, int panels = 16) {
    if (a == b) return 0.0;
    double total = 0.0;
    double w = (b - a) / panels;
    for (int i = 0; i < panels; ++i) {
        double pa = a + i * w, pb = pa + w, pm = 0.5 * (pa + pb);
        double fa = f(pa), fm = f(pm), fb = f(pb);
        double whole = (pb - pa) / 6.0 * (fa + 4.0 * fm + fb);
        total += simpson_rec(f, pa, pb, fa, fm, fb, whole, tol / panels, 28);
    }
    return total;
}

void check_pair(int n, int k) {
    if (n < 1 || k < 1) throw DomainError("perturbation: modes must be >= 1");
    if (n == k) throw DomainError("perturbation: n = k is resonant");
}

}  // namespace

double p_quadrature(int n, int k, double x) {
    check_pair(n, k);
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("p_quadrature: x outside [0,1]");
    if (x == 0.0) return 0.0;
    auto f = [n, k, x](double s) {
        return std::sin(2 * k * kPi * s) * std::sin(n * kPi * s) *
               std::sin(n * kPi * (s - x));
    };
    int panels = std::max(16, 4 * (n + k));
    return integrate(f, 0.0, x, 1e-12, panels) / (n * kPi);
}

double p_closed_form(int n, int k, double x) {
    check_pair(n, k);
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("p_closed_form: x outside [0,1]");
    double c = 1.0 / (8.0 * kPi * kPi);
    return -c * (std::cos(kPi * x * (2 * k - n)) / (k * (n - k)) +
                 std::cos(kPi * x * (2 * k + n)) / (k * (n + k)) -
                 2.0 * n * std::cos(n * kPi * x) / (k * (n * n - k * k)));
}

PerturbationProfile phi_dot(int n, int k, const Grid& grid) {
    check_pair(n, k);
    if (n < k + 1) throw DomainError("phi_dot: requires n >= k+1");
    PerturbationProfile prof;
    prof.n = n;
    prof.k = k;
    auto p = [n, k](double x) { return p_closed_form(n, k, x); };
    auto integrand = [&](double s) { return std::sin(n * kPi * s) * p(s); };
    prof.B = -2.0 * integrate(integrand, 0.0, 1.0, 1e-12, std::max(16, 4 * (n + k)));
    prof.p.resize(grid.n_interior);
    prof.phi_dot.resize(grid.n_interior);
    for (int i = 0; i < grid.n_interior; ++i) {
        double x = grid.node(i);
        prof.p[i] = p(x);
        prof.phi_dot[i] = prof.B * std::sin(n * kPi * x) + prof.p[i];
    }
    return prof;
}

double sigma_ddot_zero(int n, int k, SigmaDdotRoute route) {
    check_pair(n, k);
    switch (route) {
        case SigmaDdotRoute::ClosedForm:
            if (n < k + 1) throw DomainError("sigma_ddot_zero: closed form needs n >= k+1");
            return 1.0 / (4.0 * kPi * kPi * (n * n - k * k));

        case SigmaDdotRoute::Quadrature2_15: {
            const int panels = std::max(32, 8 * (n + k));
            auto m = [k](double x) { return std::sin(2 * k * kPi * x); };
            auto phi = [n](double x) { return std::sin(n * kPi * x); };
            auto integrand_B = [&](double s) { return phi(s) * p_closed_form(n, k, s); };
            double B = -2.0 * integrate(integrand_B, 0.0, 1.0, 1e-12, panels);
            auto direct = [&](double x) {
                double pd = B * phi(x) + p_closed_form(n, k, x);
                return m(x) * pd * phi(x);
            };
            auto reduced = [&](double x) {
                return m(x) * phi(x) * p_closed_form(n, k, x);
            };
            double J_direct = -4.0 * integrate(direct, 0.0, 1.0, 1e-12, panels);
            double J_reduced = -4.0 * integrate(reduced, 0.0, 1.0, 1e-12, panels);
            if (std::abs(J_direct - J_reduced) > 1e-9)
                throw ConsistencyError("sigma_ddot_zero: B-term did not drop out");
            return J_direct;
        }

        case SigmaDdotRoute::CurveFD: {
            CurveSolver solver(Weight::sine(2 * k), Scheme::SineSpectral, 0,
                               std::max(64, n + 8));
            const double d = 0.25;
            double f0 = solver.sigma(0.0, n);
            double f1 = solver.sigma(d, n), f1m = solver.sigma(-d, n);
            double f2 = solver.sigma(2 * d, n), f2m = solver.sigma(-2 * d, n);
            return (-f2m + 16 * f1m - 30 * f0 + 16 * f1 - f2) / (12 * d * d);
        }
    }
    throw ConsistencyError("sigma_ddot_zero: unknown route");
}

}  // namespace nodal
