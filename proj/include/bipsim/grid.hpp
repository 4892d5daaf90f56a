#pragma once

#include <Eigen/Dense>

#include "bipsim/errors.hpp"

namespace bipsim {

// Uniform 1D grid on [x_min, x_max], endpoints included.
// spacing = (x_max - x_min) / (n_points - 1).
//
// Walls are hard (Dirichlet): physical fields vanish at both endpoints, and
// operators built on this grid act on the interior points only.
class Grid1D {
 public:
  Grid1D(double x_min, double x_max, int n_points)
      : x_min_(x_min), x_max_(x_max), n_points_(n_points) {
    if (!(x_max > x_min)) {
      throw PreconditionError("Grid1D: x_max must exceed x_min");
    }
    if (n_points < 3) {
      throw PreconditionError("Grid1D: n_points must be at least 3");
    }
    spacing_ = (x_max - x_min) / static_cast<double>(n_points - 1);
  }

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  int n_points() const { return n_points_; }
  double spacing() const { return spacing_; }

  double x(int i) const { return x_min_ + spacing_ * static_cast<double>(i); }

  Eigen::VectorXd points() const {
    Eigen::VectorXd p(n_points_);
    for (int i = 0; i < n_points_; ++i) p[i] = x(i);
    return p;
  }

  friend bool operator==(const Grid1D& a, const Grid1D& b) {
    return a.x_min_ == b.x_min_ && a.x_max_ == b.x_max_ && a.n_points_ == b.n_points_;
  }
  friend bool operator!=(const Grid1D& a, const Grid1D& b) { return !(a == b); }

 private:
  double x_min_;
  double x_max_;
  int n_points_;
  double spacing_;
};

struct PhysicalConstants {
  double hbar = 1.0;
  double mass = 1.0;

  PhysicalConstants() = default;
  PhysicalConstants(double hbar_in, double mass_in) : hbar(hbar_in), mass(mass_in) {
    if (!(hbar > 0.0) || !(mass > 0.0)) {
      throw PreconditionError("PhysicalConstants: hbar and mass must be positive");
    }
  }
};

inline void require_same_grid(const Grid1D& a, const Grid1D& b, const char* where) {
  if (a != b) {
    throw DimensionError(std::string(where) + ": arguments live on different grids");
  }
}

}  // namespace bipsim
