// SPDX-License-Identifier: Apache-2.0
//
// beamsim — spatial-lobes hybrid precoding and diversity combining simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Minimal complex dense linear-algebra kernel. Everything here is a thin,
// contract-checked wrapper around Armadillo; all other modules go through
// these entry points so that tolerances and conventions live in one place.

#ifndef BEAMSIM_LINALG_HPP
#define BEAMSIM_LINALG_HPP

#include <armadillo>
#include <complex>

#include "beamsim/errors.hpp"

namespace beamsim {

using CMatrix = arma::cx_mat;
using CVector = arma::cx_vec;

// Economy-size SVD: a = u * diag(s) * v^H with s descending.
struct SvdResult {
    CMatrix u;    // columns orthonormal, left singular vectors
    arma::vec s;  // nonnegative, sorted descending
    CMatrix v;    // columns orthonormal, right singular vectors
};

// Economy SVD with a deterministic phase convention: for each column of u,
// the first entry with modulus > 1e-12 is rotated to the nonnegative real
// axis and the matching column of v receives the same rotation, so the
// product u * diag(s) * v^H is unchanged. Throws NumericalError on
// non-convergence (message includes the matrix dimensions).
SvdResult svd(const CMatrix &a);

// sqrt of the sum of squared entry moduli.
double frobenius_norm(const CMatrix &a);

// Base-2 log-determinant of a Hermitian positive semidefinite matrix,
// computed from a real eigendecomposition with eigenvalues clamped below
// at 1e-15. Input must be Hermitian within 1e-9 (relative to its largest
// entry) and PSD up to a -1e-9 eigenvalue tolerance, else ContractViolation.
double log_det_hermitian_psd(const CMatrix &a);

// Solve a * x = b for Hermitian positive definite a (Cholesky, with a
// one-shot fallback to an eigendecomposition solve if the factorization
// fails marginally). Throws NumericalError if a is singular/indefinite.
CMatrix solve_hermitian(const CMatrix &a, const CMatrix &b);

// Inverse principal square root of a Hermitian PSD matrix, with eigenvalues
// clamped below at (1e-12 * largest eigenvalue) before inversion. Used to
// orthonormalize combiner blocks; throws NumericalError on a zero matrix.
CMatrix inv_sqrt_hermitian_psd(const CMatrix &a);

} // namespace beamsim

#endif // BEAMSIM_LINALG_HPP
