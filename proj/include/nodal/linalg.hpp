#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <thread>
#include <vector>

#include "nodal/errors.hpp"

namespace nodal {

// Symmetric tridiagonal matrix with a constant off-diagonal entry, the shape
// produced by the centered second-difference stencil.
struct Tridiagonal {
    std::vector<double> diag;
    double off = 0.0;

    int size() const { return static_cast<int>(diag.size()); }
};

// Solve (T - shift*I) x = rhs by banded LU with partial pivoting (fill-in
// bandwidth 2).  Stays well-behaved near singularity, which inverse
// iteration relies on.
inline std::vector<double> tridiag_solve(const Tridiagonal& t, double shift,
                                         std::span<const double> rhs) {
    const int n = t.size();
    if (static_cast<int>(rhs.size()) != n)
        throw ConfigError("tridiag_solve: size mismatch");

    std::vector<double> d(n), e(n, 0.0), f(n, 0.0), b(rhs.begin(), rhs.end());
    for (int i = 0; i < n; ++i) {
        d[i] = t.diag[i] - shift;
        if (i + 1 < n) e[i] = t.off;
    }
    for (int i = 0; i + 1 < n; ++i) {
        double sub = t.off;  // entry (i+1, i)
        if (std::abs(sub) > std::abs(d[i])) {
            std::swap(d[i], sub);
            std::swap(e[i], d[i + 1]);
            std::swap(f[i], e[i + 1]);
            std::swap(b[i], b[i + 1]);
        }
        if (d[i] == 0.0) d[i] = 1e-300;
        double m = sub / d[i];
        d[i + 1] -= m * e[i];
        e[i + 1] -= m * f[i];
        b[i + 1] -= m * b[i];
    }
    if (d[n - 1] == 0.0) d[n - 1] = 1e-300;

    std::vector<double> x(n);
    x[n - 1] = b[n - 1] / d[n - 1];
    if (n >= 2) x[n - 2] = (b[n - 2] - e[n - 2] * x[n - 1]) / d[n - 2];
    for (int i = n - 3; i >= 0; --i)
        x[i] = (b[i] - e[i] * x[i + 1] - f[i] * x[i + 2]) / d[i];
    return x;
}

// Run fn(i) for i in [0, count) on up to `jobs` threads.  Callers write
// results into per-index slots, so output never depends on scheduling.  The
// first exception (by index) is rethrown after all workers join.
inline void parallel_for_index(std::size_t count, int jobs,
                               const std::function<void(std::size_t)>& fn) {
    if (jobs <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const int nt = static_cast<int>(std::min<std::size_t>(jobs, count));
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < count; i += nt) {
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace nodal
