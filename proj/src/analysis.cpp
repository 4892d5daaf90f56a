#include "bipsim/analysis.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "bipsim/errors.hpp"
#include "bipsim/tolerances.hpp"

namespace bipsim {

SchmidtDecomposition schmidt_decompose(const KernelField& psi) {
  if (!psi.is_normalized()) {
    throw PreconditionError("schmidt_decompose: kernel must be normalized");
  }
  const Grid1D& grid = psi.grid();
  const double h = grid.spacing();

  // SVD of the weighted operator matrix: singular values are the expansion
  // coefficients, singular vectors are the modes up to the 1/sqrt(h)
  // quadrature factor.
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(psi.values() * h,
                                         Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();

  const double cutoff = tol::kSchmidtCutoff * sigma[0];
  int rank = 0;
  while (rank < sigma.size() && sigma[rank] > cutoff) ++rank;
  if (rank == 0) throw NumericError("schmidt_decompose: kernel is numerically zero");

  SchmidtDecomposition result;
  result.coefficients = sigma.head(rank);
  result.left_modes.reserve(rank);
  result.right_modes.reserve(rank);
  const double root_h = std::sqrt(h);
  for (int n = 0; n < rank; ++n) {
    result.left_modes.emplace_back(grid, Eigen::VectorXcd(svd.matrixU().col(n) / root_h));
    result.right_modes.emplace_back(grid, Eigen::VectorXcd(svd.matrixV().col(n) / root_h));
  }
  return result;
}

double entropy_from_weights(const Eigen::VectorXd& weights) {
  double s = 0.0;
  const double scale = weights.size() ? weights.cwiseAbs().maxCoeff() : 0.0;
  const double cutoff = tol::kSchmidtCutoff * tol::kSchmidtCutoff * scale;
  for (double p : weights) {
    if (p > cutoff) s -= p * std::log(p);
  }
  return s;
}

double entropy(const KernelField& psi) {
  const SchmidtDecomposition schmidt = schmidt_decompose(psi);
  return entropy_from_weights(schmidt.coefficients.cwiseAbs2());
}

ReducedDensity reduced_density(const KernelField& psi, Side side) {
  if (!psi.is_normalized()) {
    throw PreconditionError("reduced_density: kernel must be normalized");
  }
  const double h = psi.grid().spacing();
  const Eigen::MatrixXcd m = psi.values() * h;
  Eigen::MatrixXcd rho;
  if (side == Side::X) {
    rho = m * m.adjoint();
  } else {
    rho = (m.adjoint() * m).conjugate();
  }
  // The product is Hermitian in exact arithmetic; pin it down to roundoff.
  rho = 0.5 * (rho + rho.adjoint()).eval();
  const double trace = rho.trace().real();
  return ReducedDensity{psi.grid(), side, std::move(rho), trace};
}

GridOperator::GridOperator(const Grid1D& grid, Eigen::MatrixXcd matrix)
    : grid_(grid), matrix_(std::move(matrix)) {
  if (matrix_.rows() != grid_.n_points() || matrix_.cols() != grid_.n_points()) {
    throw DimensionError("GridOperator: matrix shape does not match grid");
  }
  hermiticity_defect_ = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
}

GridOperator GridOperator::diagonal(const Grid1D& grid, const Eigen::VectorXd& values) {
  if (values.size() != grid.n_points()) {
    throw DimensionError("GridOperator::diagonal: values length does not match grid");
  }
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(grid.n_points(), grid.n_points());
  m.diagonal() = values.cast<Complex>();
  return GridOperator(grid, std::move(m));
}

GridOperator GridOperator::position(const Grid1D& grid) {
  return diagonal(grid, grid.points());
}

GridOperator GridOperator::from_hamiltonian(const DiscreteHamiltonian& h) {
  const int n = h.grid().n_points();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n - 1; ++i) {
    m(i, i) = h.diagonal()[i];
    if (i > 1) m(i, i - 1) = h.off_diagonal();
    if (i < n - 2) m(i, i + 1) = h.off_diagonal();
  }
  return GridOperator(h.grid(), std::move(m));
}

double expectation(const KernelField& psi, const GridOperator& observable) {
  require_same_grid(psi.grid(), observable.grid(), "expectation");
  if (observable.hermiticity_defect() > tol::kStructural) {
    throw PreconditionError("expectation: observable is not Hermitian (defect " +
                            std::to_string(observable.hermiticity_defect()) + ")");
  }
  const double h = psi.grid().spacing();
  const Eigen::MatrixXcd m = psi.values() * h;
  return (m.adjoint() * (observable.matrix() * m)).trace().real();
}

Eigen::VectorXd position_density(const KernelField& psi) {
  return psi.values().cwiseAbs2().rowwise().sum() * psi.grid().spacing();
}

CoefficientExpansion eigenbasis_coefficients(const KernelField& psi, const Spectrum& spectrum,
                                             int k) {
  require_same_grid(psi.grid(), spectrum.grid, "eigenbasis_coefficients");
  if (k < 1 || k > spectrum.count()) {
    throw DimensionError("eigenbasis_coefficients: k must lie in [1, spectrum count]");
  }
  const int n = psi.grid().n_points();
  const double h = psi.grid().spacing();

  Eigen::MatrixXcd modes(n, k);
  for (int j = 0; j < k; ++j) modes.col(j) = spectrum.states[j].values();

  Eigen::MatrixXcd c = modes.adjoint() * psi.values() * modes * (h * h);
  CoefficientMatrix coefficients(std::move(c));

  const double total = psi.norm_sq();
  const double captured = total > 0.0 ? coefficients.norm_sq() / total : 0.0;
  return CoefficientExpansion{std::move(coefficients), captured, captured < 0.999};
}

TransitionReport transition_probabilities(const CoefficientMatrix& c, const Spectrum& spectrum) {
  const int k = c.dim();
  if (k > spectrum.count()) {
    throw DimensionError("transition_probabilities: coefficient dim exceeds spectrum count");
  }
  if (std::abs(c.norm_sq() - 1.0) > tol::kAlgebraic) {
    throw PreconditionError("transition_probabilities: coefficients must be normalized (got |c|^2 = " +
                            std::to_string(c.norm_sq()) + ")");
  }

  TransitionReport report;
  report.probabilities = c.entries().cwiseAbs2().colwise().sum().real().transpose();
  report.energy_shifts = Eigen::VectorXd::Zero(k);
  double expected = 0.0;
  for (int m = 0; m < k; ++m) {
    double weighted = 0.0;
    for (int n = 0; n < k; ++n) {
      weighted += std::norm(c.entries()(n, m)) * (spectrum.energies[n] - spectrum.energies[m]);
    }
    expected += weighted;
    report.energy_shifts[m] =
        report.probabilities[m] > tol::kZeroProbability ? weighted / report.probabilities[m] : 0.0;
  }
  report.expected_shift = expected;
  return report;
}

CollapseResult collapse(const KernelField& psi, const Spectrum& spectrum, int level) {
  if (level < 0 || level >= spectrum.count()) {
    throw PreconditionError("collapse: level index out of range");
  }
  const CoefficientExpansion expansion =
      eigenbasis_coefficients(psi, spectrum, spectrum.count());
  const TransitionReport report = transition_probabilities(expansion.coefficients, spectrum);

  const double p = report.probabilities[level];
  if (p <= tol::kZeroProbability) {
    throw ZeroProbabilityError("collapse: level " + std::to_string(level) +
                               " has numerically zero probability");
  }
  const ScalarField& mode = spectrum.states[level];
  return CollapseResult{kernel_from_product(mode, mode), p, report.energy_shifts[level]};
}

double hermiticity_defect(const KernelField& psi) { return psi.hermiticity_defect(); }

}  // namespace bipsim
