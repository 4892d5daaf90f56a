#include "bipsim/experiments.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "bipsim/errors.hpp"
#include "bipsim/tolerances.hpp"

namespace bipsim {

namespace {

// Amplitude-width convention: g ~ exp(-(x-c)^2 / 2 width^2), so two packets
// a distance s apart overlap by exp(-s^2 / 4 width^2).
ScalarField gaussian_packet(const Grid1D& grid, double center, double width, double tilt) {
  Eigen::VectorXcd v(grid.n_points());
  for (int i = 0; i < grid.n_points(); ++i) {
    const double d = grid.x(i) - center;
    v[i] = std::polar(std::exp(-d * d / (2.0 * width * width)), tilt * grid.x(i));
  }
  return normalized(ScalarField(grid, std::move(v)));
}

// Symmetric (Loewdin) orthonormalization of two normalized fields: the
// closest orthonormal pair in the least-squares sense, preserving the
// mirror symmetry of the inputs.
std::pair<ScalarField, ScalarField> orthonormalize_pair(const ScalarField& a,
                                                        const ScalarField& b,
                                                        const char* where) {
  const Complex overlap = inner_product(a, b);
  if (std::abs(overlap) > 0.99) {
    throw PreconditionError(std::string(where) +
                            ": modes overlap too strongly to orthonormalize (|<1,2>| = " +
                            std::to_string(std::abs(overlap)) + ")");
  }
  Eigen::Matrix2cd s;
  s << 1.0, overlap, std::conj(overlap), 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> eig(s);
  const Eigen::Matrix2cd inv_sqrt = eig.operatorInverseSqrt();

  Eigen::VectorXcd v1 = a.values() * inv_sqrt(0, 0) + b.values() * inv_sqrt(1, 0);
  Eigen::VectorXcd v2 = a.values() * inv_sqrt(0, 1) + b.values() * inv_sqrt(1, 1);
  return {normalized(ScalarField(a.grid(), std::move(v1))),
          normalized(ScalarField(a.grid(), std::move(v2)))};
}

double mass_within(const ScalarField& f, double center, double radius) {
  double inside = 0.0;
  for (int i = 0; i < f.grid().n_points(); ++i) {
    if (std::abs(f.grid().x(i) - center) <= radius) inside += std::norm(f.values()[i]);
  }
  return inside * f.grid().spacing() / f.norm_sq();
}

}  // namespace

std::pair<ScalarField, ScalarField> make_two_slit_modes(const Grid1D& grid, double separation,
                                                        double width) {
  if (!(width > 0.0)) throw PreconditionError("make_two_slit_modes: width must be positive");
  if (!(separation > 4.0 * width)) {
    throw PreconditionError("make_two_slit_modes: separation must exceed 4 * width");
  }
  const double mid = 0.5 * (grid.x_min() + grid.x_max());
  const double c1 = mid - 0.5 * separation;
  const double c2 = mid + 0.5 * separation;
  if (c1 < grid.x_min() || c2 > grid.x_max()) {
    throw PreconditionError("make_two_slit_modes: slit centers fall outside the grid");
  }

  auto [m1, m2] = orthonormalize_pair(gaussian_packet(grid, c1, width, 0.0),
                                      gaussian_packet(grid, c2, width, 0.0),
                                      "make_two_slit_modes");

  // Each orthonormalized mode must still be a localized packet.
  if (mass_within(m1, c1, 3.0 * width) < 0.99 || mass_within(m2, c2, 3.0 * width) < 0.99) {
    throw PreconditionError(
        "make_two_slit_modes: orthonormalization delocalized the modes; "
        "increase separation or shrink width");
  }
  return {std::move(m1), std::move(m2)};
}

std::pair<ScalarField, ScalarField> make_screen_modes(const Grid1D& grid, double tilt,
                                                      double envelope_width) {
  if (!(tilt > 0.0) || !(envelope_width > 0.0)) {
    throw PreconditionError("make_screen_modes: tilt and envelope_width must be positive");
  }
  if (tilt * grid.spacing() > 0.5) {
    throw PreconditionError("make_screen_modes: tilt * spacing > 0.5, fringes would alias");
  }
  if (tilt * envelope_width < 4.0) {
    throw PreconditionError("make_screen_modes: tilt * envelope_width < 4, beams barely "
                            "distinguishable");
  }
  const double mid = 0.5 * (grid.x_min() + grid.x_max());
  return orthonormalize_pair(gaussian_packet(grid, mid, envelope_width, tilt),
                             gaussian_packet(grid, mid, envelope_width, -tilt),
                             "make_screen_modes");
}

TwoSlitFamily::TwoSlitFamily(ScalarField mode_1_in, ScalarField mode_2_in, CoefficientMatrix a_in)
    : mode_1(std::move(mode_1_in)), mode_2(std::move(mode_2_in)), a(std::move(a_in)) {
  require_same_grid(mode_1.grid(), mode_2.grid(), "TwoSlitFamily");
  if (!mode_1.is_normalized() || !mode_2.is_normalized()) {
    throw PreconditionError("TwoSlitFamily: modes must be normalized");
  }
  if (std::abs(inner_product(mode_1, mode_2)) > tol::kAlgebraic) {
    throw PreconditionError("TwoSlitFamily: modes must be orthogonal");
  }
  if (a.dim() != 2) throw DimensionError("TwoSlitFamily: coefficient matrix must be 2x2");
  if (!a.is_hermitian()) throw PreconditionError("TwoSlitFamily: coefficients must be Hermitian");
  if (!a.is_normalized()) throw PreconditionError("TwoSlitFamily: coefficients must be normalized");
}

CoefficientMatrix wave_coefficients() {
  Eigen::Matrix2cd w;
  w << 0.5, 0.5, 0.5, 0.5;
  return CoefficientMatrix(w);
}

CoefficientMatrix particle_coefficients() {
  const double r = 1.0 / std::numbers::sqrt2;
  Eigen::Matrix2cd p;
  p << r, 0.0, 0.0, r;
  return CoefficientMatrix(p);
}

CoefficientMatrix duality_coefficients(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw PreconditionError("duality_coefficients: lambda must lie in [0, 1]");
  }
  Eigen::Matrix2cd blend = (1.0 - lambda) * wave_coefficients().entries() +
                           lambda * particle_coefficients().entries();
  return CoefficientMatrix(blend / blend.norm());
}

KernelField two_slit_kernel(const TwoSlitFamily& family) {
  const std::array<ScalarField, 2> basis = {family.mode_1, family.mode_2};
  return kernel_from_coefficients(family.a, basis);
}

std::vector<DualityPoint> duality_scan(const ScalarField& mode_1, const ScalarField& mode_2,
                                       std::span<const double> lambdas) {
  const int n = mode_1.grid().n_points();
  const int lo = n / 4;
  const int hi = n - lo;  // central half of the grid

  std::vector<DualityPoint> points;
  points.reserve(lambdas.size());
  for (double lambda : lambdas) {
    const TwoSlitFamily family(mode_1, mode_2, duality_coefficients(lambda));
    const KernelField kernel = two_slit_kernel(family);
    const Eigen::VectorXd density = position_density(kernel);

    const double d_max = density.segment(lo, hi - lo).maxCoeff();
    const double d_min = density.segment(lo, hi - lo).minCoeff();
    if (!(d_max > 0.0)) {
      throw NumericError("duality_scan: position density vanishes across the fringe window");
    }
    points.push_back(DualityPoint{lambda, entropy(kernel), (d_max - d_min) / (d_max + d_min)});
  }
  return points;
}

std::vector<GapMeasurement> gap_spectroscopy(const Spectrum& spectrum,
                                             std::span<const std::pair<int, int>> pairs,
                                             const DiscreteHamiltonian& h,
                                             const EvolutionParams& p) {
  p.validate();
  require_same_grid(spectrum.grid, h.grid(), "gap_spectroscopy");

  double max_gap = 0.0;
  for (const auto& [a, b] : pairs) {
    if (a < 0 || a >= spectrum.count() || b < 0 || b >= spectrum.count()) {
      throw PreconditionError("gap_spectroscopy: pair (" + std::to_string(a) + ", " +
                              std::to_string(b) + ") outside the computed spectrum");
    }
    max_gap = std::max(max_gap, std::abs(spectrum.energies[a] - spectrum.energies[b]));
  }
  const double hbar = spectrum.constants.hbar;
  const double sample_dt = p.dt * static_cast<double>(p.record_every);
  if (max_gap > 0.0 && sample_dt > 0.05 * hbar / max_gap) {
    throw PreconditionError(
        "gap_spectroscopy: dt * record_every too coarse for the fastest gap (need <= " +
        std::to_string(0.05 * hbar / max_gap) + ")");
  }

  std::vector<GapMeasurement> results;
  results.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    const KernelField psi0 = kernel_from_product(spectrum.states[a], spectrum.states[b]);

    std::vector<double> times;
    std::vector<Complex> overlaps;
    const double h2 = h.grid().spacing() * h.grid().spacing();
    evolve_bipartite_grid(psi0, h, p, [&](double t, const Eigen::MatrixXcd& k) {
      times.push_back(t);
      overlaps.push_back((psi0.values().conjugate().cwiseProduct(k)).sum() * h2);
    });

    // Unwrapped overlap phase, then an ordinary linear fit.
    const auto n_samples = times.size();
    Eigen::VectorXd phase(n_samples);
    double raw_prev = std::arg(overlaps[0]);
    double accumulated = raw_prev;
    phase[0] = accumulated;
    for (std::size_t i = 1; i < n_samples; ++i) {
      const double raw = std::arg(overlaps[i]);
      accumulated += std::remainder(raw - raw_prev, 2.0 * std::numbers::pi);
      raw_prev = raw;
      phase[i] = accumulated;
    }

    Eigen::Map<const Eigen::VectorXd> t(times.data(), static_cast<Eigen::Index>(n_samples));
    const double t_mean = t.mean();
    const double p_mean = phase.mean();
    const Eigen::VectorXd dt_c = t.array() - t_mean;
    const Eigen::VectorXd dp_c = phase.array() - p_mean;
    const double slope = dt_c.dot(dp_c) / dt_c.squaredNorm();
    const double residual =
        std::sqrt((dp_c - slope * dt_c).squaredNorm() / static_cast<double>(n_samples));
    if (residual > 1e-2) {
      throw NumericError("gap_spectroscopy: phase fit residual " + std::to_string(residual) +
                         " rad exceeds 1e-2; overlap phase is not linear in time");
    }

    GapMeasurement gm;
    gm.level_a = a;
    gm.level_b = b;
    gm.measured_gap = -slope * hbar;
    gm.spectral_gap = spectrum.energies[a] - spectrum.energies[b];
    gm.abs_error = std::abs(gm.measured_gap - gm.spectral_gap);
    gm.rel_error =
        std::abs(gm.spectral_gap) > 1e-12 ? gm.abs_error / std::abs(gm.spectral_gap) : gm.abs_error;
    gm.fit_residual = residual;
    results.push_back(gm);
  }
  return results;
}

}  // namespace bipsim
