#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "bipsim/analysis.hpp"
#include "bipsim/core_ops.hpp"
#include "bipsim/errors.hpp"
#include "bipsim/evolution.hpp"
#include "testutil.hpp"

using namespace bipsim;
using testutil::max_abs_diff;

namespace {

EvolutionParams params(double dt, long n_steps, long record_every) {
  EvolutionParams p;
  p.dt = dt;
  p.n_steps = n_steps;
  p.record_every = record_every;
  return p;
}

// Exact per-step Cayley phase for an eigenstate of energy e:
// (1 - i e dt/2) / (1 + i e dt/2) = exp(-i * 2 atan(e dt / 2)).
double cayley_phase(double e, double dt, double hbar = 1.0) {
  return 2.0 * std::atan(0.5 * e * dt / hbar);
}

}  // namespace

TEST_SUITE("evolution") {

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(params(1e-3, 10, 5).validate());
  CHECK_THROWS_AS(params(0.0, 10, 1).validate(), PreconditionError);
  CHECK_THROWS_AS(params(-1e-3, 10, 1).validate(), PreconditionError);
  CHECK_THROWS_AS(params(1e-3, 0, 1).validate(), PreconditionError);
  CHECK_THROWS_AS(params(1e-3, 10, 0).validate(), PreconditionError);
  CHECK_THROWS_AS(params(1e-3, 10, 11).validate(), PreconditionError);
}

TEST_CASE("preconditions: normalization and hard walls") {
  const Grid1D grid(0.0, 1.0, 33);
  const DiscreteHamiltonian h =
      build_hamiltonian(grid, PotentialSpec::infinite_well(), PhysicalConstants{});

  auto gen = testutil::rng(2);
  const ScalarField psi = testutil::random_field(grid, gen);
  const ScalarField unnormalized(grid, 2.0 * psi.values());
  CHECK_THROWS_AS(evolve_schrodinger(unnormalized, h, params(1e-3, 1, 1)),
                  PreconditionError);

  Eigen::VectorXcd leaky = psi.values();
  leaky[0] = 0.5;
  const ScalarField at_wall = normalized(ScalarField(grid, std::move(leaky)));
  CHECK_THROWS_AS(evolve_schrodinger(at_wall, h, params(1e-3, 1, 1)), PreconditionError);
}

TEST_CASE("snapshot schedule includes t = 0 and the final step") {
  const Spectrum spectrum = testutil::well_spectrum(1.0, 33, 1);
  const DiscreteHamiltonian h =
      build_hamiltonian(spectrum.grid, PotentialSpec::infinite_well(), spectrum.constants);
  const ScalarTrajectory traj =
      evolve_schrodinger(spectrum.states[0], h, params(1e-3, 12, 5));
  REQUIRE(traj.times.size() == 4);
  CHECK(traj.times[0] == doctest::Approx(0.0));
  CHECK(traj.times[1] == doctest::Approx(5e-3));
  CHECK(traj.times[2] == doctest::Approx(1e-2));
  CHECK(traj.times[3] == doctest::Approx(1.2e-2));
  CHECK(traj.snapshots.size() == 4);
}

TEST_CASE("eigenstate evolves by a pure phase") {
  const Spectrum spectrum = testutil::well_spectrum(1.0, 65, 2);
  const DiscreteHamiltonian h =
      build_hamiltonian(spectrum.grid, PotentialSpec::infinite_well(), spectrum.constants);
  const double dt = 1e-3;
  const ScalarField& psi1 = spectrum.states[1];
  const double e = spectrum.energies[1];

  std::vector<Complex> overlaps;
  evolve_schrodinger(psi1, h, params(dt, 10, 1), [&](double, const Eigen::VectorXcd& v) {
    overlaps.push_back((psi1.values().adjoint() * v)(0, 0) * spectrum.grid.spacing());
  });
  REQUIRE(overlaps.size() == 11);

  const double exact_step = cayley_phase(e, dt);
  for (std::size_t k = 0; k + 1 < overlaps.size(); ++k) {
    CHECK(std::abs(std::abs(overlaps[k]) - 1.0) <= 1e-8);
    const double step_phase = std::arg(overlaps[k + 1] / overlaps[k]);
    CHECK(std::abs(step_phase + exact_step) <= 1e-12);
    // and the Cayley phase itself is within O(dt^3) of the true -E dt
    const double cubic = std::pow(e * dt, 3) / 12.0;
    CHECK(std::abs(step_phase + e * dt) <= 1.5 * cubic + 1e-12);
  }
}

TEST_CASE("two-mode superposition revives with the analytic period") {
  const Spectrum spectrum = testutil::well_spectrum(1.0, 257, 2);
  const DiscreteHamiltonian h =
      build_hamiltonian(spectrum.grid, PotentialSpec::infinite_well(), spectrum.constants);
  const ScalarField psi0 = normalized(ScalarField(
      spectrum.grid, spectrum.states[0].values() + spectrum.states[1].values()));

  const Eigen::VectorXd xs = spectrum.grid.points();
  std::vector<double> times;
  std::vector<double> x_mean;
  evolve_schrodinger(psi0, h, params(1e-4, 6000, 5),
                     [&](double t, const Eigen::VectorXcd& v) {
                       times.push_back(t);
                       x_mean.push_back((xs.array() * v.cwiseAbs2().array()).sum() *
                                        spectrum.grid.spacing());
                     });

  // <x>(t) oscillates about the box center; interpolate its crossings.
  std::vector<double> crossings;
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    const double a = x_mean[k] - 0.5;
    const double b = x_mean[k + 1] - 0.5;
    if (a == 0.0 || a * b >= 0.0) continue;
    crossings.push_back(times[k] + (times[k + 1] - times[k]) * a / (a - b));
  }
  REQUIRE(crossings.size() >= 3);
  const double period = crossings[2] - crossings[0];
  const double analytic =
      2.0 * std::numbers::pi / (testutil::well_energy(2, 1.0) - testutil::well_energy(1, 1.0));
  CHECK(std::abs(period - analytic) / analytic <= 0.005);
}

TEST_CASE("halving dt cuts the terminal error about fourfold") {
  const Spectrum spectrum = testutil::well_spectrum(1.0, 65, 2);
  const DiscreteHamiltonian h =
      build_hamiltonian(spectrum.grid, PotentialSpec::infinite_well(), spectrum.constants);
  const ScalarField psi0 = normalized(ScalarField(
      spectrum.grid, spectrum.states[0].values() + spectrum.states[1].values()));
  const double t_final = 0.2;

  // Spectral reference: same discrete modes, exact phases.
  const Complex c0 = inner_product(spectrum.states[0], psi0);
  const Complex c1 = inner_product(spectrum.states[1], psi0);
  const Eigen::VectorXcd reference =
      c0 * std::polar(1.0, -spectrum.energies[0] * t_final) * spectrum.states[0].values() +
      c1 * std::polar(1.0, -spectrum.energies[1] * t_final) * spectrum.states[1].values();

  auto terminal_error = [&](double dt, long n_steps) {
    const ScalarTrajectory traj = evolve_schrodinger(psi0, h, params(dt, n_steps, n_steps));
    const Eigen::VectorXcd diff = traj.snapshots.back().values() - reference;
    return std::sqrt(diff.squaredNorm() * spectrum.grid.spacing());
  };

  const double coarse = terminal_error(2e-3, 100);
  const double fine = terminal_error(1e-3, 200);
  CHECK(coarse / fine >= 3.0);
  CHECK(coarse / fine <= 5.0);
}

TEST_CASE("norm drift stays below 1e-10 over 1000 steps") {
  const Grid1D grid(0.0, 1.0, 49);
  const DiscreteHamiltonian h =
      build_hamiltonian(grid, PotentialSpec::infinite_well(), PhysicalConstants{});
  auto gen = testutil::rng(31);
  const ScalarField psi0 = testutil::random_field(grid, gen);

  double worst = 0.0;
  evolve_schrodinger(psi0, h, params(1e-3, 1000, 100),
                     [&](double, const Eigen::VectorXcd& v) {
                       worst = std::max(worst,
                                        std::abs(v.squaredNorm() * grid.spacing() - 1.0));
                     });
  CHECK(worst <= 1e-10);
}

TEST_CASE("bipartite grid evolution tracks the product of scalar evolutions") {
  const Grid1D grid(0.0, 1.0, 49);
  const DiscreteHamiltonian h =
      build_hamiltonian(grid, PotentialSpec::infinite_well(), PhysicalConstants{});
  auto gen = testutil::rng(13);
  const ScalarField psi0 = testutil::random_field(grid, gen);
  const long n_steps = 40;
  const EvolutionParams p = params(1e-3, n_steps, 10);

  const ScalarTrajectory scalar = evolve_schrodinger(psi0, h, p);
  const KernelTrajectory kernel = evolve_bipartite_grid(kernel_from_product(psi0, psi0), h, p);
  REQUIRE(scalar.snapshots.size() == kernel.snapshots.size());

  for (std::size_t k = 0; k < scalar.snapshots.size(); ++k) {
    const Eigen::VectorXcd& v = scalar.snapshots[k].values();
    const double dev = max_abs_diff(kernel.snapshots[k].values(),
                                    Eigen::MatrixXcd(v * v.adjoint()));
    CHECK(dev <= 1e-9 * static_cast<double>(n_steps));
  }
}

TEST_CASE("balanced-mixture kernel of eigenstates is stationary") {
  const Spectrum spectrum = testutil::well_spectrum(1.0, 49, 2);
  const DiscreteHamiltonian h =
      build_hamiltonian(spectrum.grid, PotentialSpec::infinite_well(), spectrum.constants);
  const Eigen::MatrixXcd m0 =
      (spectrum.states[0].values() * spectrum.states[0].values().adjoint() +
       spectrum.states[1].values() * spectrum.states[1].values().adjoint()) /
      std::sqrt(2.0);
  const KernelField psi_p(spectrum.grid, m0);

  double worst = 0.0;
  evolve_bipartite_grid(psi_p, h, params(1e-3, 50, 10),
                        [&](double, const Eigen::MatrixXcd& m) {
                          worst = std::max(worst, (m - m0).cwiseAbs().maxCoeff());
                        });
  CHECK(worst <= 1e-9);
}

TEST_CASE("stationary pair beats at its energy gap") {
  const Spectrum spectrum = testutil::well_spectrum(1.0, 49, 3);
  const DiscreteHamiltonian h =
      build_hamiltonian(spectrum.grid, PotentialSpec::infinite_well(), spectrum.constants);
  const KernelField psi0 = kernel_from_product(spectrum.states[0], spectrum.states[2]);
  const double dt = 2e-4;
  const double h2 = spectrum.grid.spacing() * spectrum.grid.spacing();

  std::vector<Complex> overlaps;
  evolve_bipartite_grid(psi0, h, params(dt, 8, 1), [&](double, const Eigen::MatrixXcd& m) {
    overlaps.push_back((psi0.values().conjugate().cwiseProduct(m)).sum() * h2);
  });

  // Psi0 is an eigenkernel of the Cayley conjugation: exactly linear phase
  // with the two one-sided Cayley phases subtracting.
  const double exact_step =
      cayley_phase(spectrum.energies[0], dt) - cayley_phase(spectrum.energies[2], dt);
  const double gap_step = (spectrum.energies[0] - spectrum.energies[2]) * dt;
  for (std::size_t k = 0; k + 1 < overlaps.size(); ++k) {
    const double step_phase = std::arg(overlaps[k + 1] / overlaps[k]);
    CHECK(std::abs(step_phase + exact_step) <= 1e-12);
    CHECK(std::abs(step_phase + gap_step) <= 1e-6);
  }
}

TEST_CASE("hermiticity and norm are conserved over 1000 bipartite steps") {
  const Grid1D grid(0.0, 1.0, 33);
  const DiscreteHamiltonian h =
      build_hamiltonian(grid, PotentialSpec::infinite_well(), PhysicalConstants{});
  const Spectrum spectrum = solve_spectrum(h, 3);
  auto gen = testutil::rng(47);
  const CoefficientMatrix c0 = testutil::random_coefficients(3, gen);
  const KernelField psi0 = kernel_from_coefficients(
      c0, std::vector<ScalarField>{spectrum.states[0], spectrum.states[1],
                                   spectrum.states[2]});
  REQUIRE(psi0.is_hermitian());

  double norm_drift = 0.0;
  double defect = 0.0;
  const double h2 = grid.spacing() * grid.spacing();
  evolve_bipartite_grid(psi0, h, params(1e-3, 1000, 100),
                        [&](double, const Eigen::MatrixXcd& m) {
                          norm_drift = std::max(
                              norm_drift, std::abs(m.squaredNorm() * h2 - 1.0));
                          defect = std::max(
                              defect, (m - m.adjoint()).cwiseAbs().maxCoeff());
                        });
  CHECK(norm_drift <= 1e-10);
  CHECK(defect <= 1e-9);
}

TEST_CASE("entropy is constant along bipartite evolution") {
  const Grid1D grid(0.0, 1.0, 33);
  const DiscreteHamiltonian h =
      build_hamiltonian(grid, PotentialSpec::infinite_well(), PhysicalConstants{});
  const Spectrum spectrum = solve_spectrum(h, 3);
  auto gen = testutil::rng(53);
  const KernelField psi0 = kernel_from_coefficients(
      testutil::random_coefficients(3, gen),
      std::vector<ScalarField>{spectrum.states[0], spectrum.states[1], spectrum.states[2]});
  const double s0 = entropy(psi0);

  double drift = 0.0;
  evolve_bipartite_grid(psi0, h, params(1e-3, 200, 50),
                        [&](double, const Eigen::MatrixXcd& m) {
                          drift = std::max(drift,
                                           std::abs(entropy(KernelField(grid, m)) - s0));
                        });
  CHECK(drift <= 1e-8);
}

TEST_CASE("spectral propagator basics") {
  const Spectrum spectrum = testutil::well_spectrum(1.0, 33, 4);
  auto gen = testutil::rng(59);
  const CoefficientMatrix c0 = testutil::random_coefficients(4, gen);

  SUBCASE("t = 0 is the identity") {
    const CoefficientMatrix c = evolve_bipartite_spectral(c0, spectrum, 0.0);
    CHECK(max_abs_diff(c.entries(), c0.entries()) == 0.0);
  }

  SUBCASE("diagonal matrices never move") {
    const CoefficientMatrix diag(
        Eigen::MatrixXcd(Eigen::Vector4cd(0.5, 0.5, 0.5, 0.5).asDiagonal()));
    const CoefficientMatrix c = evolve_bipartite_spectral(diag, spectrum, 7.3);
    CHECK(max_abs_diff(c.entries(), diag.entries()) <= 1e-15);
  }

  SUBCASE("norm and hermiticity are preserved exactly") {
    const CoefficientMatrix c = evolve_bipartite_spectral(c0, spectrum, 2.1);
    CHECK(std::abs(c.norm_sq() - c0.norm_sq()) <= 1e-14);
    CHECK(c.is_hermitian());
    // moduli are untouched, only phases move
    CHECK((c.entries().cwiseAbs() - c0.entries().cwiseAbs()).cwiseAbs().maxCoeff() <= 1e-15);
  }

  SUBCASE("dimension above the retained spectrum is rejected") {
    const CoefficientMatrix big(Eigen::MatrixXcd::Identity(5, 5) / std::sqrt(5.0));
    CHECK_THROWS_AS(evolve_bipartite_spectral(big, spectrum, 1.0), DimensionError);
  }
}

TEST_CASE("grid and spectral propagators agree on a three-level kernel") {
  const Grid1D grid(0.0, 4.0, 128);
  const DiscreteHamiltonian h =
      build_hamiltonian(grid, PotentialSpec::infinite_well(), PhysicalConstants{});
  const Spectrum spectrum = solve_spectrum(h, 3);
  const std::vector<ScalarField> basis = {spectrum.states[0], spectrum.states[1],
                                          spectrum.states[2]};
  auto gen = testutil::rng(61);
  const CoefficientMatrix c0 = testutil::random_coefficients(3, gen);
  const KernelField psi0 = kernel_from_coefficients(c0, basis);

  const double t_final = 1.0;
  const long n_steps = 2000;
  Eigen::MatrixXcd final_grid;
  evolve_bipartite_grid(psi0, h, params(t_final / n_steps, n_steps, n_steps),
                        [&](double, const Eigen::MatrixXcd& m) { final_grid = m; });

  const KernelField reference =
      kernel_from_coefficients(evolve_bipartite_spectral(c0, spectrum, t_final), basis);
  CHECK(max_abs_diff(final_grid, reference.values()) <= 1e-6);
}

}  // TEST_SUITE
