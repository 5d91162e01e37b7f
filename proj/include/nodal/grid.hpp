#pragma once

#include <vector>

#include "nodal/errors.hpp"

namespace nodal {

// Uniform grid of interior points for a Dirichlet problem on (r,s).
// nodes are r+(i+1)h, i = 0..n_interior-1, h = (s-r)/(n_interior+1).
struct Grid {
    double r = 0.0;
    double s = 1.0;
    int n_interior = 0;

    Grid(double r_, double s_, int n) : r(r_), s(s_), n_interior(n) {
        if (!(r < s)) throw ConfigError("grid: require r < s");
        if (n < 2) throw ConfigError("grid: require at least 2 interior points");
    }

    static Grid unit(int n) { return Grid(0.0, 1.0, n); }

    double h() const { return (s - r) / (n_interior + 1); }
    double node(int i) const { return r + (i + 1) * h(); }

    std::vector<double> nodes() const {
        std::vector<double> xs(n_interior);
        for (int i = 0; i < n_interior; ++i) xs[i] = node(i);
        return xs;
    }
};

}  // namespace nodal
