#pragma once

#include <Eigen/Dense>

#include "swave/common.hpp"

namespace swave {

// Uniform radial grid for the reduced wavefunction on (0, r_max).  Only
// interior points are stored: r_j = (j+1) * spacing for j = 0..n_points-1,
// with u(0) = u(r_max) = 0 as Dirichlet ghosts, so spacing is
// r_max/(n_points+1) and the potential is never evaluated at r = 0.
struct RadialGrid {
    double r_max = 0.0;
    int n_points = 0;
    double spacing = 0.0;

    RadialGrid(double r_max_, int n_points_)
        : r_max(r_max_), n_points(n_points_) {
        if (!(r_max > 0.0))
            throw std::invalid_argument("RadialGrid: r_max must be > 0");
        if (n_points < 16)
            throw std::invalid_argument("RadialGrid: n_points must be >= 16");
        spacing = r_max / (n_points + 1);
    }

    double r(int j) const { return (j + 1) * spacing; }

    Eigen::VectorXd points() const {
        return Eigen::VectorXd::LinSpaced(n_points, spacing,
                                          n_points * spacing);
    }

    bool operator==(const RadialGrid& o) const {
        return r_max == o.r_max && n_points == o.n_points;
    }
};

// Reduced radial wavefunction u(r_j, t) with its grid and the dimension it
// lives in.  delta_r is the length scale of the packet the state came from;
// it converts between physical time t and the dimensionless tau = t/delta_r^2
// (natural units hbar = M = 1).
struct RadialState {
    RadialGrid grid;
    Eigen::VectorXcd u;
    double time = 0.0;
    int dimension = 0;
    double delta_r = 1.0;
};

}  // namespace swave
