#pragma once

#include <functional>
#include <vector>

#include "bipsim/coefficients.hpp"
#include "bipsim/fields.hpp"
#include "bipsim/hamiltonian.hpp"

namespace bipsim {

struct EvolutionParams {
  double dt = 1e-3;
  long n_steps = 1;
  long record_every = 1;

  void validate() const;
};

struct ScalarTrajectory {
  std::vector<double> times;
  std::vector<ScalarField> snapshots;
};

struct KernelTrajectory {
  std::vector<double> times;
  std::vector<KernelField> snapshots;
};

// Cayley (Crank-Nicolson) propagation of i hbar dpsi/dt = H psi:
//   (1 + i dt H / 2 hbar) psi_{k+1} = (1 - i dt H / 2 hbar) psi_k,
// one tridiagonal solve per step. Unitary for every dt, phase error O(dt^3)
// per step. psi0 must be normalized and vanish at the walls.
//
// The observer form invokes record(t, values) at t = 0, every record_every-th
// step, and the final step; the trajectory form stores those snapshots.
void evolve_schrodinger(const ScalarField& psi0, const DiscreteHamiltonian& h,
                        const EvolutionParams& p,
                        const std::function<void(double, const Eigen::VectorXcd&)>& record);
ScalarTrajectory evolve_schrodinger(const ScalarField& psi0, const DiscreteHamiltonian& h,
                                    const EvolutionParams& p);

// Propagation of the two-argument equation
//   i hbar dPsi/dt = (H(x) - H(y)) Psi,
// whose exact step is Psi -> U Psi U^H with the same Cayley U as above:
// one tridiagonal-solve sweep over columns (x side) and one over rows
// (y side) per step. Norm, symmetry defect, and expansion coefficients'
// moduli are conserved up to roundoff.
void evolve_bipartite_grid(const KernelField& psi0, const DiscreteHamiltonian& h,
                           const EvolutionParams& p,
                           const std::function<void(double, const Eigen::MatrixXcd&)>& record);
KernelTrajectory evolve_bipartite_grid(const KernelField& psi0, const DiscreteHamiltonian& h,
                                       const EvolutionParams& p);

// Exact evolution in the energy eigenbasis:
//   c(n,m; t) = c(n,m; 0) * exp(-i (E_n - E_m) t / hbar).
// c0 must be square with dim <= spectrum.count().
CoefficientMatrix evolve_bipartite_spectral(const CoefficientMatrix& c0,
                                            const Spectrum& spectrum, double t);

}  // namespace bipsim
