#pragma once

#include <span>
#include <utility>
#include <vector>

#include "bipsim/analysis.hpp"
#include "bipsim/core_ops.hpp"
#include "bipsim/evolution.hpp"

namespace bipsim {

// Slit-plane modes: two normalized Gaussian packets (std deviation `width`)
// centered at -separation/2 and +separation/2 around the grid midpoint,
// symmetrically orthonormalized. Requires separation > 4 * width; each mode
// must keep >= 99% of its norm within 3 widths of its center, otherwise the
// overlap was too large and a PreconditionError is thrown. The raw overlap
// scales as exp(-separation^2 / 4 width^2).
std::pair<ScalarField, ScalarField> make_two_slit_modes(const Grid1D& grid,
                                                        double separation, double width);

// Observation-plane modes: the same two beams where they cross - one common
// Gaussian envelope (std deviation envelope_width, centered on the grid) with
// opposite phase tilts exp(+-i tilt x), symmetrically orthonormalized.
// Superpositions show fringes of period pi / tilt; the incoherent mixture
// shows the bare envelope. Requires tilt * spacing <= 0.5 (sampling) and
// tilt * envelope_width >= 4 (orthogonality).
std::pair<ScalarField, ScalarField> make_screen_modes(const Grid1D& grid, double tilt,
                                                      double envelope_width);

// Two orthonormal modes plus a 2x2 Hermitian normalized coefficient matrix.
struct TwoSlitFamily {
  TwoSlitFamily(ScalarField mode_1_in, ScalarField mode_2_in, CoefficientMatrix a_in);

  ScalarField mode_1;
  ScalarField mode_2;
  CoefficientMatrix a;
};

// c = [[1,1],[1,1]] / 2: the coherent superposition (psi_1+psi_2)(...)^* / 2.
CoefficientMatrix wave_coefficients();

// c = I / sqrt(2): the balanced mixture (psi_1 psi_1* + psi_2 psi_2*)/sqrt(2).
CoefficientMatrix particle_coefficients();

// Normalized blend (1-lambda) * wave + lambda * particle, lambda in [0, 1].
CoefficientMatrix duality_coefficients(double lambda);

KernelField two_slit_kernel(const TwoSlitFamily& family);

struct DualityPoint {
  double lambda;
  double entropy;
  double visibility;
};

// For each lambda: build the interpolated kernel over (mode_1, mode_2),
// record its entropy and the fringe visibility
//   V = (max d - min d) / (max d + min d)
// of position_density over the central half of the grid. Entropy rises from
// 0 to ln 2 along the family while visibility falls: the duality tradeoff.
std::vector<DualityPoint> duality_scan(const ScalarField& mode_1, const ScalarField& mode_2,
                                       std::span<const double> lambdas);

struct GapMeasurement {
  int level_a = 0;
  int level_b = 0;
  double measured_gap = 0.0;  // from the fitted overlap phase, times hbar
  double spectral_gap = 0.0;  // E_a - E_b from the spectrum
  double abs_error = 0.0;
  double rel_error = 0.0;  // abs_error / |spectral_gap| (abs_error if gap ~ 0)
  double fit_residual = 0.0;  // rms phase residual of the linear fit, radians
};

// For each index pair (a, b): evolve the stationary product psi_a psi_b*
// with the grid propagator, track the overlap <Psi_0, Psi(t)>, unwrap its
// phase, and fit phase = phi0 - (gap/hbar) t. A two-argument state beats
// like its energy gap, so the fitted slope measures E_a - E_b directly.
// Requires dt * record_every <= 0.05 hbar / max|gap| so the fastest pair is
// well resolved; a fit residual above 1e-2 rad raises NumericError.
std::vector<GapMeasurement> gap_spectroscopy(const Spectrum& spectrum,
                                             std::span<const std::pair<int, int>> pairs,
                                             const DiscreteHamiltonian& h,
                                             const EvolutionParams& p);

}  // namespace bipsim
