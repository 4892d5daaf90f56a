#include "bipsim/core_ops.hpp"

#include <cmath>
#include <string>

#include "bipsim/errors.hpp"

namespace bipsim {

CoefficientMatrix::CoefficientMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() < 1) {
    throw DimensionError("CoefficientMatrix: entries must be a nonempty square matrix");
  }
  norm_sq_ = entries_.squaredNorm();
  hermiticity_defect_ = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  normalized_ = std::abs(norm_sq_ - 1.0) <= tol::kStructural;
  hermitian_ = hermiticity_defect_ <= tol::kStructural;
}

Complex inner_product(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f.grid(), g.grid(), "inner_product");
  return (f.values().adjoint() * g.values())(0, 0) * f.grid().spacing();
}

Complex kernel_inner_product(const KernelField& a, const KernelField& b) {
  require_same_grid(a.grid(), b.grid(), "kernel_inner_product");
  const double h = a.grid().spacing();
  return (a.values().conjugate().cwiseProduct(b.values())).sum() * h * h;
}

KernelField kernel_from_product(const ScalarField& psi, const ScalarField& phi) {
  require_same_grid(psi.grid(), phi.grid(), "kernel_from_product");
  return KernelField(psi.grid(), psi.values() * phi.values().adjoint());
}

KernelField kernel_from_coefficients(const CoefficientMatrix& c,
                                     std::span<const ScalarField> basis) {
  const int k = c.dim();
  if (static_cast<int>(basis.size()) != k) {
    throw DimensionError("kernel_from_coefficients: basis size " +
                         std::to_string(basis.size()) + " does not match coefficient dim " +
                         std::to_string(k));
  }
  const Grid1D& grid = basis[0].grid();
  for (const ScalarField& b : basis) require_same_grid(grid, b.grid(), "kernel_from_coefficients");

  double worst = 0.0;
  int worst_i = 0;
  int worst_j = 0;
  for (int i = 0; i < k; ++i) {
    for (int j = i; j < k; ++j) {
      const Complex g = inner_product(basis[i], basis[j]);
      const double dev = std::abs(g - (i == j ? Complex(1.0) : Complex(0.0)));
      if (dev > worst) {
        worst = dev;
        worst_i = i;
        worst_j = j;
      }
    }
  }
  if (worst > tol::kAlgebraic) {
    throw PreconditionError("kernel_from_coefficients: basis is not orthonormal; worst pair (" +
                            std::to_string(worst_i) + ", " + std::to_string(worst_j) +
                            ") deviates by " + std::to_string(worst));
  }

  Eigen::MatrixXcd modes(grid.n_points(), k);
  for (int n = 0; n < k; ++n) modes.col(n) = basis[n].values();
  return KernelField(grid, modes * c.entries() * modes.adjoint());
}

}  // namespace bipsim
