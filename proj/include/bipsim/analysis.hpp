#pragma once

#include <vector>

#include <Eigen/Dense>

#include "bipsim/coefficients.hpp"
#include "bipsim/core_ops.hpp"
#include "bipsim/fields.hpp"
#include "bipsim/hamiltonian.hpp"

namespace bipsim {

// Psi(x,y) = sum_n mu_n left_n(x) conj(right_n(y)), mu_1 >= mu_2 >= ... > 0.
// Modes are L2-normalized fields; coefficients below
// tol::kSchmidtCutoff * mu_1 are dropped. For normalized Psi,
// sum mu_n^2 = 1 and rank 1 means a product state.
struct SchmidtDecomposition {
  Eigen::VectorXd coefficients;
  std::vector<ScalarField> left_modes;
  std::vector<ScalarField> right_modes;

  int rank() const { return static_cast<int>(coefficients.size()); }
};

SchmidtDecomposition schmidt_decompose(const KernelField& psi);

// S = -sum_n mu_n^2 ln mu_n^2 over the retained Schmidt coefficients
// (0 ln 0 = 0). Zero exactly when the kernel factorizes.
double entropy(const KernelField& psi);

// -sum_k p_k ln p_k over entries above cutoff; shared by the Schmidt route
// and the reduced-density eigenvalue route.
double entropy_from_weights(const Eigen::VectorXd& weights);

enum class Side { X, Y };

// Partial trace of |Psi><Psi| over the other argument. `matrix` is the
// quadrature-weighted operator form (see KernelField), i.e. for Side::X it
// equals M M^H with M = values * spacing: Hermitian, positive semidefinite,
// plain trace() = ||Psi||^2, eigenvalues = squared Schmidt coefficients.
// The pointwise kernel is matrix(i,j) / spacing.
struct ReducedDensity {
  Grid1D grid;
  Side side;
  Eigen::MatrixXcd matrix;
  double trace;
};

ReducedDensity reduced_density(const KernelField& psi, Side side);

// Hermitian observable as its plain action matrix on grid values:
// (O f)_i = sum_j matrix(i,j) f_j. Diagonal for functions of position;
// a banded stencil for the Hamiltonian.
class GridOperator {
 public:
  GridOperator(const Grid1D& grid, Eigen::MatrixXcd matrix);

  static GridOperator diagonal(const Grid1D& grid, const Eigen::VectorXd& values);
  static GridOperator position(const Grid1D& grid);
  static GridOperator from_hamiltonian(const DiscreteHamiltonian& h);

  const Grid1D& grid() const { return grid_; }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  double hermiticity_defect() const { return hermiticity_defect_; }

 private:
  Grid1D grid_;
  Eigen::MatrixXcd matrix_;
  double hermiticity_defect_;
};

// <O>_Psi = Tr[rho^H O rho] with rho the weighted kernel operator M.
// For product kernels psi psi* this reduces to <psi|O|psi>. The observable
// must be Hermitian to tol::kStructural; the result is its real part.
double expectation(const KernelField& psi, const GridOperator& observable);

// d(x_i) = sum_j |Psi(x_i, y_j)|^2 * spacing. Integrates to ||Psi||^2;
// the diagonal marginal the apparatus actually records.
Eigen::VectorXd position_density(const KernelField& psi);

// Expansion over the k lowest eigenstates: c(n,m) = <psi_n psi_m*, Psi>.
// captured_weight = sum |c|^2 / ||Psi||^2; truncated flags captured weight
// below 0.999 (the expansion is still returned).
struct CoefficientExpansion {
  CoefficientMatrix coefficients;
  double captured_weight;
  bool truncated;
};

CoefficientExpansion eigenbasis_coefficients(const KernelField& psi,
                                             const Spectrum& spectrum, int k);

// p_m = sum_n |c(n,m)|^2: probability that a measurement of the second
// argument's energy returns level m. energy_shifts[m] is the mean energy
// change conditioned on that outcome,
//   sum_n |c(n,m)|^2 (E_n - E_m) / p_m   (zero when p_m is zero),
// so expected_shift = sum_m p_m * energy_shifts[m] collapses to a plain
// double sum and vanishes for Hermitian c.
struct TransitionReport {
  Eigen::VectorXd probabilities;
  Eigen::VectorXd energy_shifts;
  double expected_shift;
};

TransitionReport transition_probabilities(const CoefficientMatrix& c,
                                          const Spectrum& spectrum);

// Projective collapse onto level m: the post-measurement kernel is the
// stationary product psi_m psi_m*, reached with probability p_m and mean
// energy shift energy_shifts[m]. Throws ZeroProbabilityError when p_m is
// numerically zero.
struct CollapseResult {
  KernelField state;
  double probability;
  double energy_shift;
};

CollapseResult collapse(const KernelField& psi, const Spectrum& spectrum, int level);

// max_ij |Psi(x_i,y_j) - conj(Psi(x_j,y_i))| (cached at construction).
double hermiticity_defect(const KernelField& psi);

}  // namespace bipsim
