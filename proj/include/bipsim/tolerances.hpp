#pragma once

// Central numeric tolerances. Every module references these two constants
// instead of redefining its own magic numbers:
//   kStructural - identities that hold by construction (norms, symmetry,
//                 round trips through exact arithmetic): 1e-10
//   kAlgebraic  - quantities limited by quadrature or solver accuracy
//                 (orthonormality of computed bases, fit residuals): 1e-8
namespace bipsim::tol {

inline constexpr double kStructural = 1e-10;
inline constexpr double kAlgebraic = 1e-8;

// Schmidt coefficients below kSchmidtCutoff * (largest coefficient) are
// treated as numerical zeros and dropped from rank and entropy sums.
inline constexpr double kSchmidtCutoff = 1e-12;

// Probabilities at or below this are "never happens" for collapse purposes.
inline constexpr double kZeroProbability = 1e-14;

}  // namespace bipsim::tol
