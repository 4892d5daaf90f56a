#pragma once

#include <complex>
#include <span>

#include "bipsim/coefficients.hpp"
#include "bipsim/fields.hpp"

namespace bipsim {

// <f, g> = sum_i conj(f_i) g_i * spacing. Conjugate-linear in f.
Complex inner_product(const ScalarField& f, const ScalarField& g);

// <A, B> = sum_ij conj(A_ij) B_ij * spacing^2 (Hilbert-Schmidt pairing with
// the same quadrature weight as kernel norms).
Complex kernel_inner_product(const KernelField& a, const KernelField& b);

// Psi(x, y) = psi(x) * conj(phi(y)).
KernelField kernel_from_product(const ScalarField& psi, const ScalarField& phi);

// Psi(x, y) = sum_nm c(n,m) basis_n(x) conj(basis_m(y)).
//
// The basis must be pairwise orthonormal to within tol::kAlgebraic; the error
// message names the worst offending pair. All basis fields must share a grid.
KernelField kernel_from_coefficients(const CoefficientMatrix& c,
                                     std::span<const ScalarField> basis);

}  // namespace bipsim
