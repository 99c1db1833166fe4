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
// End-to-end link chain: QPSK, per-lobe signal replication for the
// diversity-combining mode, transmission through channel + AWGN, LMMSE
// demodulation, per-lobe maximum-ratio combining, and Monte Carlo BER
// counting.

#ifndef BEAMSIM_LINK_HPP
#define BEAMSIM_LINK_HPP

#include <armadillo>
#include <cstdint>
#include <string>
#include <vector>

#include "beamsim/channel.hpp"
#include "beamsim/linalg.hpp"
#include "beamsim/metrics.hpp"
#include "beamsim/precoder.hpp"
#include "beamsim/rng.hpp"

namespace beamsim {

enum class StreamMode { multiplex, mrc };

// How symbols map to stream slots. In multiplex mode every slot carries an
// independent symbol. In mrc mode lobe i's stream slots all carry the same
// symbol (P distinct symbols per use), and power_scale re-equalizes the
// transmit power so the total matches the multiplex convention.
struct StreamPlan {
    StreamMode mode = StreamMode::multiplex;
    std::vector<LobeBlock> blocks; // stream slot ranges per lobe
    arma::uword n_s = 0;
    double power_scale = 1.0; // kappa, applied in mrc mode only

    arma::uword distinct_symbols() const;
};

// Plan for a hybrid solution (stream ranges straight from its blocks); in
// mrc mode power_scale is computed from the solution's composite precoder.
StreamPlan make_stream_plan(const HybridSolution &sol, StreamMode mode);

// Gray QPSK, 2 bits/symbol: 00 -> (+1+j)/sqrt(2), 01 -> (-1+j)/sqrt(2),
// 11 -> (-1-j)/sqrt(2), 10 -> (+1-j)/sqrt(2). Bit count must be even.
CVector qpsk_modulate(const std::vector<int> &bits);

// Hard decision by quadrant, inverse of qpsk_modulate's mapping.
std::vector<int> qpsk_demap(const CVector &symbols);

// Expands P distinct symbols into the N_s slot vector of the plan (mrc
// mode): lobe i's slots all equal symbols[i], scaled by
// power_scale/sqrt(N_s) so the transmit power matches the multiplex
// convention E[s s^H] = I/N_s.
CVector replicate_for_mrc(const CVector &symbols, const StreamPlan &plan);

// y = sqrt(rho) * W_T^H * H * F_T * s + W_T^H * n with n drawn CN(0,
// sigma_n2 I) at the receive antennas.
CVector transmit(const CMatrix &h, const CMatrix &f_t, const CMatrix &w_t, const CVector &s,
                 const LinkBudget &budget, Rng &rng);

// s_hat = (H_hat^H H_hat + (sigma2*N_s/rho) I)^{-1} H_hat^H (y/sqrt(rho)).
// The sqrt(rho) division keeps H_hat SNR-free; sigma2*N_s/rho is the noise
// variance in those normalized units given the 1/N_s symbol power.
CVector lmmse_demodulate(const CVector &y, const CMatrix &h_hat, double sigma2, double rho);

struct MrcWeights {
    arma::vec w; // length N_s, nonneg, each lobe group sums to 1
};

// Ensemble per-slot SNR weights: slot k of lobe i gets ||row k of h_hat||^2
// / sigma2, normalized within the lobe. A zero row gets weight 0; a lobe
// whose slots are all zero is a degenerate-lobe error.
MrcWeights mrc_weights(const CMatrix &h_hat, double sigma2, const StreamPlan &plan);

// Literal instantaneous variant (oracle/debug only): weights from the
// actual per-slot signal and noise samples of one channel use,
// |s_tilde_k|^2 / |n_tilde_k|^2, normalized per lobe. Not a realizable
// receiver; exposed for comparison against mrc_weights.
MrcWeights mrc_weights_instantaneous(const CVector &s_tilde, const CVector &n_tilde,
                                     const StreamPlan &plan);

// Per lobe i: output_i = sum_j w_ij * s_hat_ij.
CVector mrc_combine(const CVector &s_hat, const MrcWeights &weights, const StreamPlan &plan);

struct BerConfig {
    SystemDims dims;
    arma::uword p = 4;
    std::vector<arma::uword> q_per_lobe = {2};
    arma::uword bits = 7;
    double snr_db = 0.0;
    // "svd" | "omp" | "hyp_sld" | "hyp_sld_mrc" | "identity" (AWGN
    // calibration: square identity channel and precoders, no fading).
    std::string scheme = "svd";
    arma::uword n_vectors = 500;
    bool random_lobe_means = false;
};

struct BerCount {
    std::uint64_t errors = 0;
    std::uint64_t bits = 0;
};

// One channel realization, one precoder design, n_vectors channel uses.
// The channel is drawn from the rng's substream as constructed; payload
// bits and noise come from a second substream so schemes compared at the
// same (seed, cell, trial) share both the realization and the noise.
// In mrc mode only the P combined streams are counted.
BerCount ber_trial(const BerConfig &cfg, std::uint64_t master_seed, std::uint64_t cell_index,
                   std::uint64_t trial_index);

// Receive combiner actually used by the link layer for hybrid solutions:
// each baseband block is re-orthonormalized as G_i^{-1/2} * W_bb_i with
// G_i = W_rf_i^H W_rf_i, making (W_T_i)^H W_T_i = I exactly per block.
// Right-multiplying the combiner by an invertible block-diagonal matrix
// leaves spectral efficiency unchanged; this is numeric conditioning only.
CMatrix orthonormalized_combiner(const HybridSolution &sol);

// Composite precoder/combiner pair for one channel realization under a named
// scheme, plus the stream plan the link layer should run it with. For the
// hybrid schemes the codebooks must already be partitioned for ch's lobes;
// "svd" ignores them and "omp" uses only their columns.
struct LinkDesign {
    CMatrix f_t;
    CMatrix w_t;
    StreamPlan plan;
};

LinkDesign design_link(const ChannelRealization &ch, const QuantizedCodebook &cb_t,
                       const QuantizedCodebook &cb_r, const std::string &scheme, arma::uword n_s);

} // namespace beamsim

#endif // BEAMSIM_LINK_HPP
