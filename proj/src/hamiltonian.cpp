#include "bipsim/hamiltonian.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "bipsim/errors.hpp"
#include "bipsim/tolerances.hpp"

namespace bipsim {

PotentialSpec PotentialSpec::infinite_well() { return PotentialSpec{}; }

PotentialSpec PotentialSpec::harmonic(double omega) {
  PotentialSpec p;
  p.kind = Kind::Harmonic;
  p.omega = omega;
  return p;
}

PotentialSpec PotentialSpec::double_well(double barrier_height, double barrier_half_width) {
  PotentialSpec p;
  p.kind = Kind::DoubleWell;
  p.barrier_height = barrier_height;
  p.barrier_half_width = barrier_half_width;
  return p;
}

PotentialSpec PotentialSpec::tabulated(Eigen::VectorXd values) {
  PotentialSpec p;
  p.kind = Kind::Tabulated;
  p.values = std::move(values);
  return p;
}

Eigen::VectorXd PotentialSpec::evaluate(const Grid1D& grid,
                                        const PhysicalConstants& constants) const {
  const int n = grid.n_points();
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  switch (kind) {
    case Kind::InfiniteWell:
      break;  // the walls are the grid boundary
    case Kind::Harmonic: {
      if (!(omega > 0.0)) throw PreconditionError("harmonic potential: omega must be positive");
      const double mid = 0.5 * (grid.x_min() + grid.x_max());
      for (int i = 0; i < n; ++i) {
        const double d = grid.x(i) - mid;
        u[i] = 0.5 * constants.mass * omega * omega * d * d;
      }
      break;
    }
    case Kind::DoubleWell: {
      const double half_extent = 0.5 * (grid.x_max() - grid.x_min());
      if (!(barrier_half_width > 0.0) || !(barrier_half_width < half_extent)) {
        throw PreconditionError(
            "double_well potential: barrier_half_width must lie in (0, extent/2)");
      }
      if (!(barrier_height > 0.0)) {
        throw PreconditionError("double_well potential: barrier_height must be positive");
      }
      const double mid = 0.5 * (grid.x_min() + grid.x_max());
      for (int i = 0; i < n; ++i) {
        if (std::abs(grid.x(i) - mid) <= barrier_half_width) u[i] = barrier_height;
      }
      break;
    }
    case Kind::Tabulated: {
      if (values.size() != n) {
        throw DimensionError("tabulated potential: " + std::to_string(values.size()) +
                             " values for a grid of " + std::to_string(n) + " points");
      }
      u = values;
      break;
    }
  }
  return u;
}

DiscreteHamiltonian build_hamiltonian(const Grid1D& grid, const PotentialSpec& potential,
                                      const PhysicalConstants& constants) {
  const double h = grid.spacing();
  const double kinetic = constants.hbar * constants.hbar / (2.0 * constants.mass * h * h);
  Eigen::VectorXd diagonal = potential.evaluate(grid, constants).array() + 2.0 * kinetic;
  return DiscreteHamiltonian(grid, constants, std::move(diagonal), -kinetic);
}

ScalarField apply_hamiltonian(const DiscreteHamiltonian& h, const ScalarField& psi) {
  require_same_grid(h.grid(), psi.grid(), "apply_hamiltonian");
  const int n = h.grid().n_points();
  const Eigen::VectorXcd& v = psi.values();
  const Eigen::VectorXd& d = h.diagonal();
  const double off = h.off_diagonal();

  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
  for (int i = 1; i < n - 1; ++i) {
    Complex acc = d[i] * v[i];
    if (i > 1) acc += off * v[i - 1];
    if (i < n - 2) acc += off * v[i + 1];
    out[i] = acc;
  }
  return ScalarField(psi.grid(), std::move(out));
}

Spectrum solve_spectrum(const DiscreteHamiltonian& h, int k) {
  const int n = h.grid().n_points();
  const int interior = n - 2;
  if (k < 1 || k > interior) {
    throw PreconditionError("solve_spectrum: k must lie in [1, n_points-2] (the operator has " +
                            std::to_string(interior) + " interior eigenpairs); got " +
                            std::to_string(k));
  }

  Eigen::VectorXd diag = h.diagonal().segment(1, interior);
  Eigen::VectorXd subdiag = Eigen::VectorXd::Constant(interior - 1, h.off_diagonal());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, subdiag, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw NumericError("solve_spectrum: tridiagonal eigensolver did not converge (status " +
                       std::to_string(static_cast<int>(solver.info())) + ")");
  }

  const Eigen::VectorXd& all_energies = solver.eigenvalues();  // ascending
  const Eigen::MatrixXd& vectors = solver.eigenvectors();

  const double degeneracy_tol = 1e-9 * std::max(1.0, all_energies.cwiseAbs().maxCoeff());
  for (int i = 1; i < k; ++i) {
    if (all_energies[i] < all_energies[i - 1] - degeneracy_tol) {
      throw NumericError("solve_spectrum: eigenvalues came back out of order");
    }
  }

  const double root_h = std::sqrt(h.grid().spacing());
  Spectrum spectrum{h.grid(), h.constants(), all_energies.head(k), {}};
  spectrum.states.reserve(k);
  for (int m = 0; m < k; ++m) {
    Eigen::VectorXd v = vectors.col(m);
    // Fix the sign so the first component that is clearly nonzero, scanning
    // from x_min, is positive.
    const double scale = v.cwiseAbs().maxCoeff();
    for (int i = 0; i < interior; ++i) {
      if (std::abs(v[i]) > 1e-12 * scale) {
        if (v[i] < 0.0) v = -v;
        break;
      }
    }
    Eigen::VectorXcd full = Eigen::VectorXcd::Zero(n);
    full.segment(1, interior) = (v / root_h).cast<Complex>();
    spectrum.states.emplace_back(h.grid(), std::move(full));
  }
  return spectrum;
}

}  // namespace bipsim
