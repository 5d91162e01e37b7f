#include "nodal/eigencurve.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace nodal {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kRootTol = 1e-8;
constexpr double kArgmaxTol = 1e-6;

double nan() { return std::numeric_limits<double>::quiet_NaN(); }
}  // namespace

CurveSolver::CurveSolver(Weight m, Scheme scheme, int n_interior, int n_modes)
    : m_(std::move(m)), scheme_(scheme), grid_(Grid::unit(std::max(8, n_interior))) {
    if (scheme_ == Scheme::CenteredFD) {
        m_nodes_.resize(grid_.n_interior);
        for (int i = 0; i < grid_.n_interior; ++i) m_nodes_[i] = m_(grid_.node(i));
    } else {
        if (n_modes < 4) throw ConfigError("CurveSolver: need at least 4 modes");
        // weight_matrix_(i,j) = 2 Int m sin_i sin_j; same quadrature rule as
        // assemble_spectral, factored out of the lambda-dependent part.
        const int M = n_modes;
        const int panels = std::max(1024, 64 * M);
        const double dx = 1.0 / panels;
        std::vector<double> mv(panels - 1);
        Eigen::MatrixXd basis(M, panels - 1);
        for (int t = 1; t < panels; ++t) {
            double x = t * dx;
            mv[t - 1] = m_(x);
            for (int j = 0; j < M; ++j) basis(j, t - 1) = std::sin((j + 1) * kPi * x);
        }
        weight_matrix_ = Eigen::MatrixXd::Zero(M, M);
        for (int i = 0; i < M; ++i)
            for (int j = i; j < M; ++j) {
                double sum = 0.0;
                for (int t = 0; t < panels - 1; ++t)
                    sum += mv[t] * basis(i, t) * basis(j, t);
                weight_matrix_(i, j) = weight_matrix_(j, i) = 2.0 * sum * dx;
            }
        base_diag_.resize(M);
        for (int j = 0; j < M; ++j) base_diag_[j] = ((j + 1) * kPi) * ((j + 1) * kPi);
    }
}

std::vector<double> CurveSolver::sigmas(double lambda, int n_max) const {
    if (scheme_ == Scheme::CenteredFD) {
        const double h = grid_.h();
        Tridiagonal t;
        t.off = -1.0 / (h * h);
        t.diag.resize(grid_.n_interior);
        for (int i = 0; i < grid_.n_interior; ++i)
            t.diag[i] = 2.0 / (h * h) - lambda * m_nodes_[i];
        DiscreteOperator op;
        op.scheme = Scheme::CenteredFD;
        op.grid = grid_;
        op.tri = std::move(t);
        return eigenvalues_up_to(op, n_max);
    }
    const int M = static_cast<int>(base_diag_.size());
    if (n_max > M) throw IndexError("CurveSolver: mode exceeds spectral truncation");
    Eigen::MatrixXd H = -lambda * weight_matrix_;
    for (int j = 0; j < M; ++j) H(j, j) += base_diag_[j];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw NumericError("spectral eigen decomposition failed", 0.0);
    std::vector<double> out(n_max);
    for (int n = 0; n < n_max; ++n) out[n] = es.eigenvalues()(n);
    return out;
}

double CurveSolver::sigma(double lambda, int mode) const {
    return sigmas(lambda, mode).back();
}

double CurveSolver::slope(double lambda, int mode, double delta) const {
    return (sigma(lambda + delta, mode) - sigma(lambda - delta, mode)) / (2.0 * delta);
}

std::vector<EigencurveSample> sample_curves(const CurveSolver& solver, int n_max,
                                            double lo, double hi, double dl,
                                            int jobs) {
    if (!(dl > 0.0)) throw ConfigError("sample_curve: step must be positive");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / dl + 0.5)) + 1;
    if (count < 5) throw ConfigError("sample_curve: need at least 5 sample points");

    std::vector<EigencurveSample> out(n_max);
    for (int n = 0; n < n_max; ++n) {
        out[n].mode = n + 1;
        out[n].lambdas.resize(count);
        out[n].values.resize(count);
        out[n].d1.assign(count, nan());
        out[n].d2.assign(count, nan());
    }
    parallel_for_index(count, jobs, [&](std::size_t i) {
        double lambda = lo + static_cast<double>(i) * dl;
        auto sig = solver.sigmas(lambda, n_max);
        for (int n = 0; n < n_max; ++n) {
            out[n].lambdas[i] = lambda;
            out[n].values[i] = sig[n];
        }
    });
    for (int n = 0; n < n_max; ++n) {
        auto& s = out[n];
        for (std::size_t i = 1; i + 1 < count; ++i) {
            s.d1[i] = (s.values[i + 1] - s.values[i - 1]) / (2.0 * dl);
            s.d2[i] = (s.values[i + 1] - 2.0 * s.values[i] + s.values[i - 1]) / (dl * dl);
        }
    }
    return out;
}

EigencurveSample sample_curve(const CurveSolver& solver, int mode, double lo,
                              double hi, double dl, int jobs) {
    auto all = sample_curves(solver, mode, lo, hi, dl, jobs);
    return std::move(all.back());
}

namespace {

// Hybrid bisection/secant for Sigma(lambda) - mu = 0 on a bracketing interval.
double refine_root(const CurveSolver& solver, int mode, double mu, double a,
                   double fa, double b, double fb) {
    for (int it = 0; it < 120; ++it) {
        double mid;
        double denom = fb - fa;
        if (denom != 0.0) {
            mid = b - fb * (b - a) / denom;  // secant
            if (!(mid > std::min(a, b) && mid < std::max(a, b)))
                mid = 0.5 * (a + b);
        } else {
            mid = 0.5 * (a + b);
        }
        double fm = solver.sigma(mid, mode) - mu;
        if (std::abs(fm) <= kRootTol || mid == a || mid == b) return mid;
        if ((fa > 0) != (fm > 0)) {
            b = mid;
            fb = fm;
        } else {
            a = mid;
            fa = fm;
        }
    }
    return 0.5 * (a + b);
}

void assign_labels(std::vector<BifurcationPoint>& pts) {
    std::vector<std::size_t> neg, pos;
    for (std::size_t i = 0; i < pts.size(); ++i)
        (pts[i].lambda < 0 ? neg : pos).push_back(i);
    // neg sorted ascending: outermost first
    if (neg.size() == 2) {
        pts[neg[0]].label = RootLabel::MinusOuter;
        pts[neg[1]].label = RootLabel::MinusInner;
    } else {
        for (auto i : neg) pts[i].label = RootLabel::Minus;
    }
    if (pos.size() == 2) {
        pts[pos[0]].label = RootLabel::PlusInner;
        pts[pos[1]].label = RootLabel::PlusOuter;
    } else {
        for (auto i : pos) pts[i].label = RootLabel::Plus;
    }
}

}  // namespace

std::vector<BifurcationPoint> roots_at_level(const CurveSolver& solver,
                                             const EigencurveSample& sample,
                                             double mu) {
    const auto& L = sample.lambdas;
    const auto& V = sample.values;
    const int mode = sample.mode;
    const double dl = sample.step();
    std::vector<BifurcationPoint> roots;

    auto push = [&](double lambda, bool boundary) {
        BifurcationPoint bp;
        bp.mode = mode;
        bp.lambda = lambda;
        bp.mu = mu;
        bp.slope = solver.slope(lambda, mode, std::min(0.05, dl / 2));
        bp.at_boundary = boundary;
        roots.push_back(bp);
    };

    std::vector<double> f(V.size());
    for (std::size_t i = 0; i < V.size(); ++i) f[i] = V[i] - mu;

    // Exact hits / sign changes.
    for (std::size_t i = 0; i + 1 < f.size(); ++i) {
        if (f[i] == 0.0) {
            push(L[i], i == 0);
            continue;
        }
        if ((f[i] > 0) != (f[i + 1] > 0))
            push(refine_root(solver, mode, mu, L[i], f[i], L[i + 1], f[i + 1]), false);
    }
    if (f.back() == 0.0) push(L.back(), true);

    // Tangential touches: interior local minima of |f| that dip below the
    // touch tolerance without a sign change (collapsed root pairs).  Reported
    // twice, once per merged root.
    const double touch = 1e-6;
    for (std::size_t i = 1; i + 1 < f.size(); ++i) {
        bool min_of_abs = std::abs(f[i]) < std::abs(f[i - 1]) &&
                          std::abs(f[i]) <= std::abs(f[i + 1]);
        bool same_sign = (f[i - 1] > 0) == (f[i] > 0) && (f[i] > 0) == (f[i + 1] > 0);
        if (!min_of_abs || !same_sign || f[i] == 0.0) continue;
        if (std::abs(f[i]) > touch) continue;
        // parabolic vertex through the three points
        double denom = f[i - 1] - 2 * f[i] + f[i + 1];
        double t = denom != 0.0 ? 0.5 * (f[i - 1] - f[i + 1]) / denom : 0.0;
        double lam = L[i] + t * dl;
        push(lam, false);
        push(lam, false);
    }

    std::sort(roots.begin(), roots.end(),
              [](const BifurcationPoint& a, const BifurcationPoint& b) {
                  return a.lambda < b.lambda;
              });
    assign_labels(roots);
    return roots;
}

CurveExtremum curve_maximum(const CurveSolver& solver, const EigencurveSample& sample) {
    const auto& L = sample.lambdas;
    const auto& V = sample.values;
    const std::size_t n = V.size();
    std::size_t ibest = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (V[i] > V[ibest]) ibest = i;
    if (ibest == 0 || ibest + 1 == n)
        throw ConfigError("curve_maximum: maximum at range endpoint; widen the range");

    auto refine = [&](std::size_t i) -> std::pair<double, double> {
        // parabolic vertex, then one extra parabolic pass with fresh evaluations
        double dl = sample.step();
        double a = L[i - 1], b = L[i], c = L[i + 1];
        double fa = V[i - 1], fb = V[i], fc = V[i + 1];
        for (int pass = 0; pass < 2; ++pass) {
            double denom = fa - 2 * fb + fc;
            double t = denom != 0.0 ? 0.5 * (fa - fc) / denom : 0.0;
            double vertex = b + t * dl;
            if (pass == 1) {
                double fv = solver.sigma(vertex, sample.mode);
                return {vertex, std::max(fv, fb)};
            }
            dl *= 0.25;
            a = vertex - dl;
            b = vertex;
            c = vertex + dl;
            fa = solver.sigma(a, sample.mode);
            fb = solver.sigma(b, sample.mode);
            fc = solver.sigma(c, sample.mode);
        }
        return {b, fb};
    };

    auto [lam_best, mu_best] = refine(ibest);
    CurveExtremum ext;
    ext.mode = sample.mode;
    ext.mu_n = mu_best;

    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(V[i] >= V[i - 1] && V[i] >= V[i + 1])) continue;
        if (V[i] < mu_best - 10.0 * kArgmaxTol * std::max(1.0, std::abs(mu_best))) continue;
        auto [lam, mu] = refine(i);
        if (mu >= mu_best - kArgmaxTol) ext.argmax.push_back(lam);
    }
    std::sort(ext.argmax.begin(), ext.argmax.end());
    // merge refinements that landed on the same maximum
    std::vector<double> merged;
    for (double x : ext.argmax)
        if (merged.empty() || std::abs(x - merged.back()) > kArgmaxTol)
            merged.push_back(x);
    ext.argmax = std::move(merged);
    return ext;
}

ConcavityReport concavity_report(const EigencurveSample& sample) {
    ConcavityReport rep;
    rep.globally_concave = true;
    bool found_zero = false;
    for (std::size_t i = 1; i + 1 < sample.values.size(); ++i) {
        if (sample.d2[i] >= 1e-8) rep.globally_concave = false;
        if (sample.lambdas[i] == 0.0) {
            rep.second_diff_at_zero = sample.d2[i];
            found_zero = true;
        }
    }
    if (!found_zero)
        throw PreconditionError("concavity_report: lambda = 0 is not a sample point");
    return rep;
}

double decay_bound(const Weight& m, int mode, double lambda) {
    if (!(lambda > 0.0)) throw PreconditionError("decay_bound: lambda must be > 0");
    auto witnesses = m.sign_change_witnesses();
    double x_plus;
    if (witnesses) {
        x_plus = witnesses->second;
    } else {
        // positivity witness alone is enough for the bound; among near-maximal
        // probes prefer the one farthest from the boundary so that J_eps fits
        double best = 0.0, xb = -1.0;
        for (int i = 1; i + 1 < kProbePoints; ++i) {
            double x = static_cast<double>(i) / (kProbePoints - 1);
            double v = m(x);
            bool better = v > best + 1e-12 ||
                          (v > best - 1e-12 && xb >= 0.0 &&
                           std::min(x, 1.0 - x) > std::min(xb, 1.0 - xb));
            if (v > 0.0 && better) { best = std::max(best, v); xb = x; }
        }
        if (xb < 0.0)
            throw PreconditionError("decay_bound: weight has no positivity witness");
        x_plus = xb;
    }

    for (double eps : {0.2, 0.1, 0.05, 0.02}) {
        double a = x_plus - eps, b = x_plus + eps;
        if (!(a > 0.0 && b < 1.0)) continue;
        double m_low = std::numeric_limits<double>::infinity();
        for (int i = 0; i < kProbePoints; ++i) {
            double x = static_cast<double>(i) / (kProbePoints - 1);
            if (x < a || x > b) continue;
            m_low = std::min(m_low, m(x));
        }
        if (!(m_low > 0.0)) continue;
        double half_width = mode * kPi / (2.0 * eps);
        return half_width * half_width - lambda * m_low;
    }
    throw PreconditionError("decay_bound: no admissible interval around the witness");
}

double spectral_radius(const EigencurveSample& sample, std::size_t index) {
    if (sample.mode != 1)
        throw PreconditionError("spectral_radius: sample must be mode 1");
    if (index >= sample.values.size()) throw IndexError("spectral_radius: index");
    return std::exp(-sample.values[index]);
}

}  // namespace nodal
