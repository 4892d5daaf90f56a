#pragma once

#include <vector>

#include <Eigen/Dense>

#include "bipsim/fields.hpp"
#include "bipsim/grid.hpp"

namespace bipsim {

// Supported one-body potentials U(x).
struct PotentialSpec {
  enum class Kind { InfiniteWell, Harmonic, DoubleWell, Tabulated };

  Kind kind = Kind::InfiniteWell;
  double omega = 1.0;               // Harmonic
  double barrier_height = 0.0;      // DoubleWell
  double barrier_half_width = 0.0;  // DoubleWell
  Eigen::VectorXd values;           // Tabulated, one entry per grid point

  static PotentialSpec infinite_well();
  static PotentialSpec harmonic(double omega);
  static PotentialSpec double_well(double barrier_height, double barrier_half_width);
  static PotentialSpec tabulated(Eigen::VectorXd values);

  // U at every grid point. Validates parameters against the grid.
  Eigen::VectorXd evaluate(const Grid1D& grid, const PhysicalConstants& constants) const;
};

// H = -(hbar^2 / 2m) d^2/dx^2 + U(x), second-order central differences:
// real symmetric tridiagonal with
//   diagonal(i)  = hbar^2 / (m spacing^2) + U(x_i)
//   off_diagonal = -hbar^2 / (2 m spacing^2)
//
// Dirichlet walls: the operator acts on interior points only. Boundary rows
// and columns are zero, so fields in the domain vanish at both endpoints and
// the matrix stays symmetric as written.
class DiscreteHamiltonian {
 public:
  DiscreteHamiltonian(const Grid1D& grid, const PhysicalConstants& constants,
                      Eigen::VectorXd diagonal, double off_diagonal)
      : grid_(grid),
        constants_(constants),
        diagonal_(std::move(diagonal)),
        off_diagonal_(off_diagonal) {}

  const Grid1D& grid() const { return grid_; }
  const PhysicalConstants& constants() const { return constants_; }
  const Eigen::VectorXd& diagonal() const { return diagonal_; }
  double off_diagonal() const { return off_diagonal_; }

 private:
  Grid1D grid_;
  PhysicalConstants constants_;
  Eigen::VectorXd diagonal_;
  double off_diagonal_;
};

DiscreteHamiltonian build_hamiltonian(const Grid1D& grid, const PotentialSpec& potential,
                                      const PhysicalConstants& constants);

// (H psi) with boundary entries forced to zero.
ScalarField apply_hamiltonian(const DiscreteHamiltonian& h, const ScalarField& psi);

// Lowest levels of a DiscreteHamiltonian, energies ascending.
// states[n] is L2-normalized with its first nonzero component (scanning from
// x_min) real and positive.
struct Spectrum {
  Grid1D grid;
  PhysicalConstants constants;
  Eigen::VectorXd energies;
  std::vector<ScalarField> states;

  int count() const { return static_cast<int>(energies.size()); }
};

// k lowest eigenpairs. The interior-point operator has n_points-2 of them,
// so 1 <= k <= n_points-2.
Spectrum solve_spectrum(const DiscreteHamiltonian& h, int k);

}  // namespace bipsim
