#include "bipsim/fields.hpp"

#include <cmath>

#include "bipsim/errors.hpp"

namespace bipsim {

ScalarField::ScalarField(const Grid1D& grid, Eigen::VectorXcd values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.n_points()) {
    throw DimensionError("ScalarField: values length does not match grid");
  }
  norm_sq_ = values_.squaredNorm() * grid_.spacing();
  normalized_ = std::abs(norm_sq_ - 1.0) <= tol::kStructural;
}

ScalarField normalized(const ScalarField& psi) {
  const double n2 = psi.norm_sq();
  if (n2 <= 0.0) {
    throw PreconditionError("normalized: zero field has no unit rescaling");
  }
  return ScalarField(psi.grid(), psi.values() / std::sqrt(n2));
}

KernelField::KernelField(const Grid1D& grid, Eigen::MatrixXcd values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.rows() != grid_.n_points() || values_.cols() != grid_.n_points()) {
    throw DimensionError("KernelField: values shape does not match grid");
  }
  const double h = grid_.spacing();
  norm_sq_ = values_.squaredNorm() * h * h;
  hermiticity_defect_ = (values_ - values_.adjoint()).cwiseAbs().maxCoeff();
  normalized_ = std::abs(norm_sq_ - 1.0) <= tol::kStructural;
  hermitian_ = hermiticity_defect_ <= tol::kStructural;
}

}  // namespace bipsim
