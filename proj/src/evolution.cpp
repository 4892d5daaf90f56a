#include "bipsim/evolution.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "bipsim/errors.hpp"
#include "bipsim/tolerances.hpp"

namespace bipsim {

void EvolutionParams::validate() const {
  if (!(dt > 0.0)) throw PreconditionError("EvolutionParams: dt must be positive");
  if (n_steps < 1) throw PreconditionError("EvolutionParams: n_steps must be at least 1");
  if (record_every < 1 || record_every > n_steps) {
    throw PreconditionError("EvolutionParams: record_every must lie in [1, n_steps]");
  }
}

namespace {

// One Cayley step psi -> (1 + i dt H / 2hbar)^{-1} (1 - i dt H / 2hbar) psi
// on the interior points, with the forward-elimination pivots of the
// tridiagonal solve computed once and reused for every column and step.
class CayleyPropagator {
 public:
  CayleyPropagator(const DiscreteHamiltonian& h, double dt) {
    const int interior = h.grid().n_points() - 2;
    const Complex ia(0.0, dt / (2.0 * h.constants().hbar));
    off_a_ = ia * h.off_diagonal();
    diag_a_.resize(interior);
    for (int i = 0; i < interior; ++i) diag_a_[i] = 1.0 + ia * h.diagonal()[i + 1];

    pivot_.resize(interior);
    mult_.resize(interior);
    pivot_[0] = diag_a_[0];
    for (int i = 1; i < interior; ++i) {
      if (std::abs(pivot_[i - 1]) < 1e-300) {
        throw NumericError("evolve: tridiagonal solve hit a vanishing pivot");
      }
      mult_[i] = off_a_ / pivot_[i - 1];
      pivot_[i] = diag_a_[i] - mult_[i] * off_a_;
    }
    if (std::abs(pivot_[interior - 1]) < 1e-300) {
      throw NumericError("evolve: tridiagonal solve hit a vanishing pivot");
    }
    scratch_.resize(interior);
  }

  // Advances the interior segment of a full-grid column in place.
  void step(Eigen::Ref<Eigen::VectorXcd> full) {
    const int m = static_cast<int>(pivot_.size());
    auto v = full.segment(1, m);

    // r = (1 - i dt H / 2hbar) v: the mirror tridiagonal multiply. The
    // matrix entries are the conjugates of A's (H is real, the prefactor
    // purely imaginary).
    const Complex off_b = std::conj(off_a_);
    scratch_[0] = std::conj(diag_a_[0]) * v[0] + (m > 1 ? off_b * v[1] : Complex(0.0));
    for (int i = 1; i < m - 1; ++i) {
      scratch_[i] = std::conj(diag_a_[i]) * v[i] + off_b * (v[i - 1] + v[i + 1]);
    }
    if (m > 1) scratch_[m - 1] = std::conj(diag_a_[m - 1]) * v[m - 1] + off_b * v[m - 2];

    // Solve A v = r by forward elimination / back substitution.
    for (int i = 1; i < m; ++i) scratch_[i] -= mult_[i] * scratch_[i - 1];
    v[m - 1] = scratch_[m - 1] / pivot_[m - 1];
    for (int i = m - 2; i >= 0; --i) v[i] = (scratch_[i] - off_a_ * v[i + 1]) / pivot_[i];

    full[0] = Complex(0.0);
    full[full.size() - 1] = Complex(0.0);
  }

 private:
  Eigen::VectorXcd diag_a_;
  Complex off_a_;
  Eigen::VectorXcd pivot_;
  Eigen::VectorXcd mult_;
  Eigen::VectorXcd scratch_;
};

// Walls are hard: the state may not carry weight on the boundary points.
// Tiny tails (a packet's far wings) are zeroed; anything larger is an error.
void clamp_boundary(Eigen::VectorXcd& v, double norm_scale) {
  const int n = static_cast<int>(v.size());
  const double worst = std::max(std::abs(v[0]), std::abs(v[n - 1]));
  if (worst * worst > tol::kStructural * norm_scale) {
    throw PreconditionError("evolve: initial state must vanish at the grid boundary");
  }
  v[0] = Complex(0.0);
  v[n - 1] = Complex(0.0);
}

bool should_record(long step, long n_steps, long record_every) {
  return step == n_steps || step % record_every == 0;
}

}  // namespace

void evolve_schrodinger(const ScalarField& psi0, const DiscreteHamiltonian& h,
                        const EvolutionParams& p,
                        const std::function<void(double, const Eigen::VectorXcd&)>& record) {
  p.validate();
  require_same_grid(psi0.grid(), h.grid(), "evolve_schrodinger");
  if (!psi0.is_normalized()) {
    throw PreconditionError("evolve_schrodinger: psi0 must be normalized");
  }

  Eigen::VectorXcd v = psi0.values();
  clamp_boundary(v, 1.0);
  CayleyPropagator u(h, p.dt);

  record(0.0, v);
  for (long step = 1; step <= p.n_steps; ++step) {
    u.step(v);
    if (should_record(step, p.n_steps, p.record_every)) {
      record(static_cast<double>(step) * p.dt, v);
    }
  }
}

ScalarTrajectory evolve_schrodinger(const ScalarField& psi0, const DiscreteHamiltonian& h,
                                    const EvolutionParams& p) {
  ScalarTrajectory trajectory;
  evolve_schrodinger(psi0, h, p, [&](double t, const Eigen::VectorXcd& v) {
    trajectory.times.push_back(t);
    trajectory.snapshots.emplace_back(psi0.grid(), v);
  });
  return trajectory;
}

void evolve_bipartite_grid(const KernelField& psi0, const DiscreteHamiltonian& h,
                           const EvolutionParams& p,
                           const std::function<void(double, const Eigen::MatrixXcd&)>& record) {
  p.validate();
  require_same_grid(psi0.grid(), h.grid(), "evolve_bipartite_grid");
  if (!psi0.is_normalized()) {
    throw PreconditionError("evolve_bipartite_grid: psi0 must be normalized");
  }

  const int n = psi0.grid().n_points();
  Eigen::MatrixXcd k = psi0.values();

  // Boundary rows/columns must be empty, as for scalar evolution.
  const double edge = std::max({k.row(0).cwiseAbs().maxCoeff(), k.row(n - 1).cwiseAbs().maxCoeff(),
                                k.col(0).cwiseAbs().maxCoeff(), k.col(n - 1).cwiseAbs().maxCoeff()});
  if (edge * edge > tol::kStructural) {
    throw PreconditionError("evolve_bipartite_grid: initial kernel must vanish at the boundary");
  }
  k.row(0).setZero();
  k.row(n - 1).setZero();
  k.col(0).setZero();
  k.col(n - 1).setZero();

  CayleyPropagator u(h, p.dt);
  auto step_kernel = [&]() {
    for (int j = 0; j < n; ++j) u.step(k.col(j));  // Psi <- U Psi
    k.adjointInPlace();
    for (int j = 0; j < n; ++j) u.step(k.col(j));  // Psi <- U (U Psi)^H
    k.adjointInPlace();                            // Psi <- U Psi U^H
  };

  record(0.0, k);
  for (long step = 1; step <= p.n_steps; ++step) {
    step_kernel();
    if (should_record(step, p.n_steps, p.record_every)) {
      record(static_cast<double>(step) * p.dt, k);
    }
  }
}

KernelTrajectory evolve_bipartite_grid(const KernelField& psi0, const DiscreteHamiltonian& h,
                                       const EvolutionParams& p) {
  KernelTrajectory trajectory;
  evolve_bipartite_grid(psi0, h, p, [&](double t, const Eigen::MatrixXcd& k) {
    trajectory.times.push_back(t);
    trajectory.snapshots.emplace_back(psi0.grid(), k);
  });
  return trajectory;
}

CoefficientMatrix evolve_bipartite_spectral(const CoefficientMatrix& c0,
                                            const Spectrum& spectrum, double t) {
  const int k = c0.dim();
  if (k > spectrum.count()) {
    throw DimensionError("evolve_bipartite_spectral: coefficient dim " + std::to_string(k) +
                         " exceeds spectrum count " + std::to_string(spectrum.count()));
  }
  const double hbar = spectrum.constants.hbar;
  Eigen::MatrixXcd c(k, k);
  for (int n = 0; n < k; ++n) {
    for (int m = 0; m < k; ++m) {
      const double phase = -(spectrum.energies[n] - spectrum.energies[m]) * t / hbar;
      c(n, m) = c0.entries()(n, m) * std::polar(1.0, phase);
    }
  }
  return CoefficientMatrix(std::move(c));
}

}  // namespace bipsim
