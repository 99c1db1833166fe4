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
// Precoder designers: the spatial-lobes-division hybrid designer (per-lobe
// codeword selection against the true path steering vectors, then per-block
// SVD of the effective sub-channels), the orthogonal-matching-pursuit
// baseline, and the fully digital SVD reference.

#ifndef BEAMSIM_PRECODER_HPP
#define BEAMSIM_PRECODER_HPP

#include <armadillo>
#include <utility>
#include <vector>

#include "beamsim/channel.hpp"
#include "beamsim/codebook.hpp"
#include "beamsim/linalg.hpp"

namespace beamsim {

// One lobe's slice of the hybrid solution: which analog columns (RF chains)
// and which baseband stream rows/columns belong to it.
struct LobeBlock {
    arma::uword lobe_index = 0;   // 1-based
    arma::uword col_begin = 0;    // first analog column of this lobe
    arma::uword col_count = 0;    // = Q_i selected codewords
    arma::uword stream_begin = 0; // first stream of this lobe
    arma::uword stream_count = 0; // <= col_count (streams kept after selection)
};

struct HybridSolution {
    CMatrix f_rf; // N_t x L_sel, codebook columns
    CMatrix f_bb; // L_sel x N_s, block-diagonal per blocks
    CMatrix w_rf; // N_r x L_sel
    CMatrix w_bb; // L_sel x N_s, block-diagonal per blocks
    std::vector<LobeBlock> blocks;
    std::vector<arma::uword> selected_tx; // codebook column per analog column
    std::vector<arma::uword> selected_rx;

    CMatrix precoder() const { return f_rf * f_bb; } // F_T
    CMatrix combiner() const { return w_rf * w_bb; } // W_T
};

struct FullDigitalSolution {
    CMatrix f_opt; // N_t x N_s, orthonormal columns
    CMatrix w_opt; // N_r x N_s, orthonormal columns
};

// First n_s singular vectors of h; equal power across streams.
FullDigitalSolution svd_precoder(const CMatrix &h, arma::uword n_s);

// Spatial-lobes-division hybrid designer. Per lobe i: project the lobe's
// partition columns onto the true steering vectors A_ti, pick the Q_i
// largest-row-power codewords (ties to the lowest index; after each pick the
// selected row and any rows with bit-identical sin, i.e. aliased duplicates,
// are zeroed so the same physical beam is never taken twice); same on the
// receive side. Then per-lobe SVD of the diagonal effective blocks gives the
// baseband blocks, assembled block-diagonally and power-normalized.
// n_s = 0 means n_s = sum Q_i; with n_s < sum Q_i the streams with globally
// smallest per-block singular values are dropped first. RF chains beyond
// sum Q_i stay idle. Throws ConfigError if a lobe's feasible set is smaller
// than Q_i or a lobe is empty.
HybridSolution hyp_sld(const ChannelRealization &ch, const QuantizedCodebook &cb_t,
                       const QuantizedCodebook &cb_r, arma::uword n_s = 0);

// Residual orthogonal matching pursuit against the full codebook: n_rf
// iterations of pick-max-projected-energy, least-squares baseband refit,
// residual renormalization; final power normalization to ||f_rf*f_bb||_F^2
// = n_s. A rank-deficient Gram matrix (repeated column) is regularized with
// 1e-12*I and counted in *repeat_diagnostic if provided. The channel h is
// part of the call signature for parity with the other designers; the
// algorithm itself only consumes f_opt and the codebook.
std::pair<CMatrix, CMatrix> omp_precoder(const CMatrix &h, const CMatrix &f_opt,
                                         const QuantizedCodebook &cb, arma::uword n_rf,
                                         arma::uword *repeat_diagnostic = nullptr);

// f_bb scaled so ||f_rf * f_bb||_F^2 = n_s (within 1e-12). Zero product is
// an error.
CMatrix normalize_power(const CMatrix &f_rf, const CMatrix &f_bb, arma::uword n_s);

struct EffectiveChannel {
    CMatrix h_eq;                       // w_rf^H * h * f_rf
    std::vector<CMatrix> diag_blocks;   // per-lobe square blocks
    double offdiag_energy = 0.0;        // ||h_eq - blkdiag||_F^2 / ||h_eq||_F^2
};

EffectiveChannel effective_channel(const CMatrix &w_rf, const CMatrix &h, const CMatrix &f_rf,
                                   const std::vector<LobeBlock> &blocks);

} // namespace beamsim

#endif // BEAMSIM_PRECODER_HPP
