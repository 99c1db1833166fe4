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

#include "beamsim/linalg.hpp"

#include <cmath>
#include <string>

namespace beamsim {

namespace {

void require_finite(const CMatrix &a, const char *who) {
    if (a.n_rows == 0 || a.n_cols == 0) {
        throw ContractViolation(std::string(who) + ": empty matrix");
    }
    if (!a.is_finite()) {
        throw ContractViolation(std::string(who) + ": non-finite entries");
    }
}

} // namespace

SvdResult svd(const CMatrix &a) {
    require_finite(a, "svd");
    SvdResult r;
    if (!arma::svd_econ(r.u, r.s, r.v, a)) {
        throw NumericalError("svd: decomposition failed for " + std::to_string(a.n_rows) + "x" +
                             std::to_string(a.n_cols) + " matrix");
    }
    // Deterministic phase: first non-negligible entry of each left column is
    // rotated onto the nonnegative real axis; the paired right column gets
    // the same rotation so u * diag(s) * v^H is preserved.
    for (arma::uword j = 0; j < r.u.n_cols; ++j) {
        for (arma::uword i = 0; i < r.u.n_rows; ++i) {
            const std::complex<double> e = r.u(i, j);
            const double m = std::abs(e);
            if (m > 1e-12) {
                const std::complex<double> rot = std::conj(e) / m;
                r.u.col(j) *= rot;
                r.v.col(j) *= rot;
                break;
            }
        }
    }
    return r;
}

double frobenius_norm(const CMatrix &a) {
    require_finite(a, "frobenius_norm");
    return arma::norm(a, "fro");
}

double log_det_hermitian_psd(const CMatrix &a) {
    require_finite(a, "log_det_hermitian_psd");
    if (!a.is_square()) {
        throw ContractViolation("log_det_hermitian_psd: matrix is not square");
    }
    const double scale = std::max(1.0, arma::abs(a).max());
    if (arma::abs(a - a.t()).max() > 1e-9 * scale) {
        throw ContractViolation("log_det_hermitian_psd: matrix is not Hermitian");
    }
    arma::vec ew;
    if (!arma::eig_sym(ew, (a + a.t()) / 2.0)) {
        throw NumericalError("log_det_hermitian_psd: eigendecomposition failed");
    }
    if (ew.min() < -1e-9 * std::max(1.0, ew.max())) {
        throw ContractViolation("log_det_hermitian_psd: matrix is not positive semidefinite");
    }
    double acc = 0.0;
    for (const double w : ew) {
        acc += std::log2(std::max(w, 1e-15));
    }
    return acc;
}

CMatrix solve_hermitian(const CMatrix &a, const CMatrix &b) {
    require_finite(a, "solve_hermitian");
    require_finite(b, "solve_hermitian");
    if (!a.is_square() || a.n_rows != b.n_rows) {
        throw ContractViolation("solve_hermitian: dimension mismatch");
    }
    const CMatrix ah = (a + a.t()) / 2.0;
    CMatrix chol_l;
    if (arma::chol(chol_l, ah, "lower")) {
        const CMatrix y = arma::solve(arma::trimatl(chol_l), b);
        return arma::solve(arma::trimatu(chol_l.t()), y);
    }
    // Marginal positive definiteness: fall back to an eigensolve so nearly
    // singular systems still report a usable answer or a clear error.
    arma::vec ew;
    CMatrix ev;
    if (!arma::eig_sym(ew, ev, ah)) {
        throw NumericalError("solve_hermitian: factorization failed");
    }
    if (ew.min() <= 1e-14 * std::max(1.0, ew.max())) {
        throw NumericalError("solve_hermitian: matrix is singular or indefinite");
    }
    return ev * arma::diagmat(1.0 / ew) * ev.t() * b;
}

CMatrix inv_sqrt_hermitian_psd(const CMatrix &a) {
    require_finite(a, "inv_sqrt_hermitian_psd");
    if (!a.is_square()) {
        throw ContractViolation("inv_sqrt_hermitian_psd: matrix is not square");
    }
    arma::vec ew;
    CMatrix ev;
    if (!arma::eig_sym(ew, ev, (a + a.t()) / 2.0)) {
        throw NumericalError("inv_sqrt_hermitian_psd: eigendecomposition failed");
    }
    const double top = ew.max();
    if (top <= 0.0) {
        throw NumericalError("inv_sqrt_hermitian_psd: matrix is zero or negative");
    }
    arma::vec inv_root(ew.n_elem);
    for (arma::uword i = 0; i < ew.n_elem; ++i) {
        inv_root(i) = 1.0 / std::sqrt(std::max(ew(i), 1e-12 * top));
    }
    return ev * arma::diagmat(inv_root) * ev.t();
}

} // namespace beamsim
