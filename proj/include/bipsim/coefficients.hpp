#pragma once

#include <Eigen/Dense>

#include "bipsim/errors.hpp"
#include "bipsim/tolerances.hpp"

namespace bipsim {

// Square matrix of expansion coefficients c(n, m) of a kernel over an
// orthonormal basis: Psi(x,y) = sum_nm c(n,m) psi_n(x) psi_m*(y).
//
// Hermiticity (c(n,m) = conj(c(m,n))) and normalization (sum |c|^2 = 1) are
// recorded verdicts, not requirements: non-Hermitian coefficient matrices are
// legal inputs and simply produce non-Hermitian kernels.
class CoefficientMatrix {
 public:
  explicit CoefficientMatrix(Eigen::MatrixXcd entries);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXcd& entries() const { return entries_; }

  double norm_sq() const { return norm_sq_; }
  bool is_normalized() const { return normalized_; }

  double hermiticity_defect() const { return hermiticity_defect_; }
  bool is_hermitian() const { return hermitian_; }

 private:
  Eigen::MatrixXcd entries_;
  double norm_sq_;
  double hermiticity_defect_;
  bool normalized_;
  bool hermitian_;
};

}  // namespace bipsim
