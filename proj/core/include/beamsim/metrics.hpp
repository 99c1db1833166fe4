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
// Scalar figures of merit: log-det spectral efficiency under a linear
// combiner with colored post-combining noise, transmit-side mutual
// information, the sparse-reconstruction Euclidean objective, chordal
// distance, and normalized operation-count complexity estimates.

#ifndef BEAMSIM_METRICS_HPP
#define BEAMSIM_METRICS_HPP

#include <armadillo>
#include <string>
#include <utility>
#include <vector>

#include "beamsim/channel.hpp"
#include "beamsim/linalg.hpp"
#include "beamsim/precoder.hpp"

namespace beamsim {

struct LinkBudget {
    double rho = 1.0;      // average received power, linear
    double sigma_n2 = 1.0; // noise variance, linear

    double snr_db() const;
    static LinkBudget from_snr_db(double snr_db, double sigma_n2 = 1.0);
};

// R = log2 det(I + rho/N_s * R_n^{-1} W_T^H H F_T F_T^H H^H W_T) with
// R_n = sigma_n2 * W_T^H W_T, evaluated through a Hermitian whitening of
// R_n (eigenvalues clamped at 1e-12 relative). Errors if the combiner is
// identically zero (message names the combiner).
double spectral_efficiency(const CMatrix &h, const CMatrix &f_t, const CMatrix &w_t,
                           const LinkBudget &budget, arma::uword n_s);
double spectral_efficiency(const CMatrix &h, const HybridSolution &sol, const LinkBudget &budget,
                           arma::uword n_s);
double spectral_efficiency(const CMatrix &h, const FullDigitalSolution &sol,
                           const LinkBudget &budget, arma::uword n_s);

// I_t = log2 det(I + rho/(N_s*sigma^2) * H F_T F_T^H H^H), combiner-free.
double mutual_information(const CMatrix &h, const CMatrix &f_rf, const CMatrix &f_bb,
                          const LinkBudget &budget, arma::uword n_s);

// || f_opt - f_rf * f_bb ||_F
double euclidean_objective(const CMatrix &f_opt, const CMatrix &f_rf, const CMatrix &f_bb);

// sqrt(1 - |a^H b|^2) for unit vectors (ContractViolation otherwise).
double chordal_distance(const CVector &a, const CVector &b);

struct ComplexityReport {
    std::string scheme;
    std::vector<std::pair<std::string, double>> phases; // name -> op count
    double total = 0.0;
    double reduction_vs_baseline = 0.0; // 1 - total/total(omp), clamped to [0,1]
};

// Normalized operation counts (all hidden constants 1). The omp baseline
// counts the reference-precoder SVD (N_t^2*N_r + N_r^3), the full-codebook
// correlation search (2^b*N_t*N_rf_t*N_s), and the least-squares refits
// ((N_rf_t)^2*N_t*(N_rf_t + N_s)). The hyp_sld scheme searches only each
// lobe's partition slice, so its analog term is sum_i |partition_i|*N_t*Q_i
// (the partition sizes of the default lobe layout at these p, b), plus the
// per-lobe SVD term p*q^3. Scheme must be "omp" or "hyp_sld".
ComplexityReport flop_estimate(const std::string &scheme, const SystemDims &dims, arma::uword p,
                               arma::uword q, arma::uword b);

} // namespace beamsim

#endif // BEAMSIM_METRICS_HPP
