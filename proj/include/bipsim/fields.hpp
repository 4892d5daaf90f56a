#pragma once

#include <complex>

#include <Eigen/Dense>

#include "bipsim/grid.hpp"
#include "bipsim/tolerances.hpp"

namespace bipsim {

using Complex = std::complex<double>;

// One-argument wave function sampled on a grid: values[i] = psi(x_i).
//
// The L2 norm uses the trapezoid-free rectangle rule
//   ||psi||^2 = sum_i |psi(x_i)|^2 * spacing,
// which is what "normalized" means everywhere in this library.
//
// Fields are immutable after construction. The constructor computes the
// squared norm once and records whether the field is normalized to within
// tol::kStructural; is_normalized() reports that verdict, it never rechecks.
class ScalarField {
 public:
  ScalarField(const Grid1D& grid, Eigen::VectorXcd values);

  const Grid1D& grid() const { return grid_; }
  const Eigen::VectorXcd& values() const { return values_; }

  double norm_sq() const { return norm_sq_; }
  bool is_normalized() const { return normalized_; }

  static ScalarField zero(const Grid1D& grid) {
    return ScalarField(grid, Eigen::VectorXcd::Zero(grid.n_points()));
  }

 private:
  Grid1D grid_;
  Eigen::VectorXcd values_;
  double norm_sq_;
  bool normalized_;
};

// Returns psi rescaled to unit norm. Throws PreconditionError on a zero field.
ScalarField normalized(const ScalarField& psi);

// Two-argument wave function Psi(x, y) on grid x grid:
// values(i, j) = Psi(x_i, y_j). Rows move along x, columns along y.
//
// Norm: ||Psi||^2 = sum_ij |Psi(x_i,y_j)|^2 * spacing^2.
//
// Convention used by every decomposition and trace in this library: the
// matrix form of Psi *as an operator* is M = values * spacing. With that
// single weighting, continuum formulas carry over verbatim - singular values
// of M are the expansion coefficients mu_n, plain matrix traces are operator
// traces, and M*M^H is the (already weighted) reduced density matrix.
//
// Like ScalarField, kernels are immutable; the constructor records the norm,
// the symmetry defect max_ij |Psi(x_i,y_j) - conj(Psi(x_j,y_i))|, and the
// normalized / hermitian verdicts at tol::kStructural.
class KernelField {
 public:
  KernelField(const Grid1D& grid, Eigen::MatrixXcd values);

  const Grid1D& grid() const { return grid_; }
  const Eigen::MatrixXcd& values() const { return values_; }

  double norm_sq() const { return norm_sq_; }
  bool is_normalized() const { return normalized_; }

  double hermiticity_defect() const { return hermiticity_defect_; }
  bool is_hermitian() const { return hermitian_; }

 private:
  Grid1D grid_;
  Eigen::MatrixXcd values_;
  double norm_sq_;
  double hermiticity_defect_;
  bool normalized_;
  bool hermitian_;
};

}  // namespace bipsim
