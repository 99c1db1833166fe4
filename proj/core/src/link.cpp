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

#include "beamsim/link.hpp"

#include <cmath>
#include <complex>
#include <cstddef>

#include "beamsim/codebook.hpp"
#include "beamsim/errors.hpp"

namespace beamsim {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;

// Blocks that actually carry streams (stream_count can be zero when the
// stream budget is smaller than the total ray count).
std::vector<const LobeBlock *> active_blocks(const StreamPlan &plan) {
    std::vector<const LobeBlock *> out;
    out.reserve(plan.blocks.size());
    for (const auto &b : plan.blocks) {
        if (b.stream_count > 0) {
            out.push_back(&b);
        }
    }
    return out;
}

void check_plan_slots(const StreamPlan &plan) {
    arma::uword total = 0;
    for (const auto &b : plan.blocks) {
        total += b.stream_count;
    }
    if (total != plan.n_s) {
        throw ContractViolation("stream plan slots do not sum to n_s");
    }
}

} // namespace

arma::uword StreamPlan::distinct_symbols() const {
    if (mode == StreamMode::multiplex) {
        return n_s;
    }
    arma::uword count = 0;
    for (const auto &b : blocks) {
        if (b.stream_count > 0) {
            ++count;
        }
    }
    return count;
}

StreamPlan make_stream_plan(const HybridSolution &sol, StreamMode mode) {
    StreamPlan plan;
    plan.mode = mode;
    plan.blocks = sol.blocks;
    plan.n_s = sol.f_bb.n_cols;
    plan.power_scale = 1.0;
    if (mode == StreamMode::mrc) {
        check_plan_slots(plan);
        // With every slot of lobe i carrying the same symbol the per-use
        // transmit energy is (kappa^2/N_s) * sum_i ||sum of lobe i's
        // composite precoder columns||^2; kappa restores the multiplex
        // convention E||F_T s||^2 = 1.
        const CMatrix f_t = sol.precoder();
        double energy = 0.0;
        for (const auto *b : active_blocks(plan)) {
            CVector col_sum(f_t.n_rows, arma::fill::zeros);
            for (arma::uword k = 0; k < b->stream_count; ++k) {
                col_sum += f_t.col(b->stream_begin + k);
            }
            const double nrm = arma::norm(col_sum, 2);
            energy += nrm * nrm;
        }
        if (!(energy > 0.0)) {
            throw NumericalError("mrc power scale: replicated precoder has zero energy");
        }
        plan.power_scale = std::sqrt(static_cast<double>(plan.n_s) / energy);
    }
    return plan;
}

CVector qpsk_modulate(const std::vector<int> &bits) {
    if (bits.size() % 2 != 0) {
        throw ContractViolation("qpsk_modulate: bit count must be even");
    }
    CVector symbols(bits.size() / 2);
    for (std::size_t i = 0; i < symbols.n_elem; ++i) {
        const int b0 = bits[2 * i];
        const int b1 = bits[2 * i + 1];
        if ((b0 != 0 && b0 != 1) || (b1 != 0 && b1 != 1)) {
            throw ContractViolation("qpsk_modulate: bits must be 0 or 1");
        }
        const double re = (b1 == 0 ? kInvSqrt2 : -kInvSqrt2);
        const double im = (b0 == 0 ? kInvSqrt2 : -kInvSqrt2);
        symbols(i) = std::complex<double>(re, im);
    }
    return symbols;
}

std::vector<int> qpsk_demap(const CVector &symbols) {
    std::vector<int> bits(2 * symbols.n_elem);
    for (arma::uword i = 0; i < symbols.n_elem; ++i) {
        bits[2 * i] = symbols(i).imag() < 0.0 ? 1 : 0;
        bits[2 * i + 1] = symbols(i).real() < 0.0 ? 1 : 0;
    }
    return bits;
}

CVector replicate_for_mrc(const CVector &symbols, const StreamPlan &plan) {
    if (plan.mode != StreamMode::mrc) {
        throw ContractViolation("replicate_for_mrc: plan is not in mrc mode");
    }
    check_plan_slots(plan);
    const auto blocks = active_blocks(plan);
    if (symbols.n_elem != blocks.size()) {
        throw ContractViolation("replicate_for_mrc: symbol count must match lobe count");
    }
    CVector s(plan.n_s, arma::fill::zeros);
    const double scale = plan.power_scale / std::sqrt(static_cast<double>(plan.n_s));
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const auto *b = blocks[i];
        for (arma::uword k = 0; k < b->stream_count; ++k) {
            s(b->stream_begin + k) = symbols(i) * scale;
        }
    }
    return s;
}

CVector transmit(const CMatrix &h, const CMatrix &f_t, const CMatrix &w_t, const CVector &s,
                 const LinkBudget &budget, Rng &rng) {
    if (f_t.n_rows != h.n_cols || w_t.n_rows != h.n_rows) {
        throw ContractViolation("transmit: precoder/combiner dimensions do not match channel");
    }
    if (s.n_elem != f_t.n_cols) {
        throw ContractViolation("transmit: symbol vector length must equal precoder columns");
    }
    const double noise_sd = std::sqrt(budget.sigma_n2);
    CVector n(h.n_rows);
    for (arma::uword i = 0; i < n.n_elem; ++i) {
        n(i) = noise_sd * rng.cgaussian();
    }
    return std::sqrt(budget.rho) * (w_t.t() * (h * (f_t * s))) + w_t.t() * n;
}

CVector lmmse_demodulate(const CVector &y, const CMatrix &h_hat, double sigma2, double rho) {
    if (y.n_elem != h_hat.n_rows) {
        throw ContractViolation("lmmse_demodulate: observation length must match h_hat rows");
    }
    if (!(rho > 0.0) || sigma2 < 0.0) {
        throw ContractViolation("lmmse_demodulate: need rho > 0 and sigma2 >= 0");
    }
    const double reg = sigma2 * static_cast<double>(h_hat.n_cols) / rho;
    CMatrix gram = h_hat.t() * h_hat;
    gram.diag() += reg;
    const CVector rhs = h_hat.t() * (y / std::sqrt(rho));
    return solve_hermitian(gram, rhs);
}

MrcWeights mrc_weights(const CMatrix &h_hat, double sigma2, const StreamPlan &plan) {
    if (plan.mode != StreamMode::mrc) {
        throw ContractViolation("mrc_weights: plan is not in mrc mode");
    }
    if (h_hat.n_rows != plan.n_s) {
        throw ContractViolation("mrc_weights: h_hat rows must equal n_s");
    }
    if (!(sigma2 > 0.0)) {
        throw ContractViolation("mrc_weights: sigma2 must be positive");
    }
    check_plan_slots(plan);
    MrcWeights out;
    out.w.zeros(plan.n_s);
    for (const auto *b : active_blocks(plan)) {
        double lobe_sum = 0.0;
        for (arma::uword k = 0; k < b->stream_count; ++k) {
            const double rn = arma::norm(h_hat.row(b->stream_begin + k), 2);
            const double snr = rn * rn / sigma2;
            out.w(b->stream_begin + k) = snr;
            lobe_sum += snr;
        }
        if (!(lobe_sum > 0.0)) {
            throw NumericalError("mrc_weights: degenerate lobe with zero effective gain");
        }
        for (arma::uword k = 0; k < b->stream_count; ++k) {
            out.w(b->stream_begin + k) /= lobe_sum;
        }
    }
    return out;
}

MrcWeights mrc_weights_instantaneous(const CVector &s_tilde, const CVector &n_tilde,
                                     const StreamPlan &plan) {
    if (plan.mode != StreamMode::mrc) {
        throw ContractViolation("mrc_weights_instantaneous: plan is not in mrc mode");
    }
    if (s_tilde.n_elem != plan.n_s || n_tilde.n_elem != plan.n_s) {
        throw ContractViolation("mrc_weights_instantaneous: sample vectors must have n_s slots");
    }
    check_plan_slots(plan);
    MrcWeights out;
    out.w.zeros(plan.n_s);
    for (const auto *b : active_blocks(plan)) {
        double lobe_sum = 0.0;
        for (arma::uword k = 0; k < b->stream_count; ++k) {
            const arma::uword slot = b->stream_begin + k;
            const double sig = std::norm(s_tilde(slot));
            const double nse = std::norm(n_tilde(slot));
            if (!(nse > 0.0)) {
                throw NumericalError("mrc_weights_instantaneous: zero noise sample");
            }
            out.w(slot) = sig / nse;
            lobe_sum += out.w(slot);
        }
        if (!(lobe_sum > 0.0)) {
            throw NumericalError("mrc_weights_instantaneous: degenerate lobe");
        }
        for (arma::uword k = 0; k < b->stream_count; ++k) {
            out.w(b->stream_begin + k) /= lobe_sum;
        }
    }
    return out;
}

CVector mrc_combine(const CVector &s_hat, const MrcWeights &weights, const StreamPlan &plan) {
    if (plan.mode != StreamMode::mrc) {
        throw ContractViolation("mrc_combine: plan is not in mrc mode");
    }
    if (s_hat.n_elem != plan.n_s || weights.w.n_elem != plan.n_s) {
        throw ContractViolation("mrc_combine: inputs must have n_s slots");
    }
    const auto blocks = active_blocks(plan);
    CVector out(blocks.size(), arma::fill::zeros);
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const auto *b = blocks[i];
        for (arma::uword k = 0; k < b->stream_count; ++k) {
            const arma::uword slot = b->stream_begin + k;
            out(i) += weights.w(slot) * s_hat(slot);
        }
    }
    return out;
}

CMatrix orthonormalized_combiner(const HybridSolution &sol) {
    if (sol.w_rf.n_elem == 0 || sol.w_bb.n_elem == 0) {
        throw ContractViolation("orthonormalized_combiner: solution has no combiner");
    }
    CMatrix w_bb = sol.w_bb;
    for (const auto &b : sol.blocks) {
        if (b.stream_count == 0) {
            continue;
        }
        const CMatrix w_rf_i = sol.w_rf.cols(b.col_begin, b.col_begin + b.col_count - 1);
        const CMatrix g = w_rf_i.t() * w_rf_i;
        const CMatrix g_isqrt = inv_sqrt_hermitian_psd(g);
        w_bb.submat(b.col_begin, b.stream_begin, b.col_begin + b.col_count - 1,
                    b.stream_begin + b.stream_count - 1) =
            g_isqrt * w_bb.submat(b.col_begin, b.stream_begin, b.col_begin + b.col_count - 1,
                                  b.stream_begin + b.stream_count - 1);
    }
    return sol.w_rf * w_bb;
}

LinkDesign design_link(const ChannelRealization &ch, const QuantizedCodebook &cb_t,
                       const QuantizedCodebook &cb_r, const std::string &scheme, arma::uword n_s) {
    LinkDesign out;
    if (scheme == "svd") {
        const FullDigitalSolution sol = svd_precoder(ch.h, n_s);
        out.f_t = sol.f_opt;
        out.w_t = sol.w_opt;
        out.plan.mode = StreamMode::multiplex;
        out.plan.n_s = n_s;
    } else if (scheme == "omp") {
        const FullDigitalSolution ref = svd_precoder(ch.h, n_s);
        const auto [f_rf, f_bb] = omp_precoder(ch.h, ref.f_opt, cb_t, ch.dims.n_rf_t);
        const auto [w_rf, w_bb] = omp_precoder(ch.h, ref.w_opt, cb_r, ch.dims.n_rf_r);
        out.f_t = f_rf * f_bb;
        out.w_t = w_rf * w_bb;
        out.plan.mode = StreamMode::multiplex;
        out.plan.n_s = n_s;
    } else if (scheme == "hyp_sld" || scheme == "hyp_sld_mrc") {
        const HybridSolution sol = hyp_sld(ch, cb_t, cb_r, n_s);
        out.f_t = sol.precoder();
        out.w_t = orthonormalized_combiner(sol);
        out.plan = make_stream_plan(
            sol, scheme == "hyp_sld_mrc" ? StreamMode::mrc : StreamMode::multiplex);
    } else {
        throw ConfigError("design_link: unknown scheme '" + scheme + "'");
    }
    return out;
}

BerCount ber_trial(const BerConfig &cfg, std::uint64_t master_seed, std::uint64_t cell_index,
                   std::uint64_t trial_index) {
    if (cfg.n_vectors == 0) {
        throw ContractViolation("ber_trial: n_vectors must be positive");
    }
    const LinkBudget budget = LinkBudget::from_snr_db(cfg.snr_db);

    Rng rng_channel(master_seed, cell_index, trial_index, 0);
    Rng rng_payload(master_seed, cell_index, trial_index, 1);

    CMatrix h;
    LinkDesign design;

    if (cfg.scheme == "identity") {
        // AWGN calibration leg: square identity channel, identity
        // precoder/combiner, so each slot is an independent AWGN branch.
        if (cfg.dims.n_t != cfg.dims.n_r) {
            throw ConfigError("ber_trial: identity scheme needs n_t == n_r");
        }
        const arma::uword n_s = cfg.dims.n_s > 0 ? cfg.dims.n_s : cfg.dims.n_t;
        if (n_s > cfg.dims.n_t) {
            throw ConfigError("ber_trial: identity scheme needs n_s <= n_t");
        }
        h.eye(cfg.dims.n_r, cfg.dims.n_t);
        design.f_t = CMatrix(arma::eye<arma::mat>(cfg.dims.n_t, n_s),
                             arma::zeros<arma::mat>(cfg.dims.n_t, n_s));
        design.w_t = design.f_t;
        design.plan.mode = StreamMode::multiplex;
        design.plan.n_s = n_s;
    } else {
        std::vector<SpatialLobeSpec> lobes = default_lobe_layout(cfg.p, cfg.q_per_lobe);
        if (cfg.random_lobe_means) {
            randomize_lobe_means(lobes, rng_channel);
        }
        arma::uword total_rays = 0;
        for (const auto &l : lobes) {
            total_rays += l.num_subpaths;
        }
        SystemDims dims = cfg.dims;
        if (dims.n_s == 0) {
            dims.n_s = total_rays;
        }
        dims.validate();

        const std::vector<PathComponent> paths = draw_paths(lobes, rng_channel);
        const ChannelRealization ch = assemble_channel(dims, lobes, paths, false, 1.0, trial_index);
        h = ch.h;

        QuantizedCodebook cb_t = build_codebook(UlaGeometry{dims.n_t}, cfg.bits);
        QuantizedCodebook cb_r = build_codebook(UlaGeometry{dims.n_r}, cfg.bits);
        if (cfg.scheme == "hyp_sld" || cfg.scheme == "hyp_sld_mrc") {
            partition_by_lobes(cb_t, lobes);
            partition_by_lobes(cb_r, lobes);
        }
        design = design_link(ch, cb_t, cb_r, cfg.scheme, dims.n_s);
    }

    const StreamPlan &plan = design.plan;
    const arma::uword n_sym = plan.distinct_symbols();

    // Everything SNR-independent of the per-use loop is hoisted: effective
    // channel, LMMSE filter, combiner projection for the noise, weights.
    const CMatrix h_hat = design.w_t.t() * (h * design.f_t);
    const double reg = budget.sigma_n2 * static_cast<double>(h_hat.n_cols) / budget.rho;
    CMatrix gram = h_hat.t() * h_hat;
    gram.diag() += reg;
    const CMatrix lmmse_filter = solve_hermitian(gram, CMatrix(h_hat.t()));
    const CMatrix w_noise = design.w_t.t();

    MrcWeights weights;
    if (plan.mode == StreamMode::mrc) {
        weights = mrc_weights(h_hat, budget.sigma_n2, plan);
    }

    const double noise_sd = std::sqrt(budget.sigma_n2);
    const double sqrt_rho = std::sqrt(budget.rho);
    const double mux_scale = 1.0 / std::sqrt(static_cast<double>(plan.n_s));

    BerCount count;
    std::vector<int> tx_bits(2 * n_sym);
    CVector noise(h.n_rows);
    for (arma::uword use = 0; use < cfg.n_vectors; ++use) {
        for (auto &b : tx_bits) {
            b = static_cast<int>(rng_payload.uniform_int(2));
        }
        const CVector symbols = qpsk_modulate(tx_bits);
        const CVector s =
            plan.mode == StreamMode::mrc ? replicate_for_mrc(symbols, plan) : CVector(symbols * mux_scale);
        for (arma::uword i = 0; i < noise.n_elem; ++i) {
            noise(i) = noise_sd * rng_payload.cgaussian();
        }
        const CVector y = sqrt_rho * (h_hat * s) + w_noise * noise;
        CVector s_hat = lmmse_filter * (y / sqrt_rho);
        if (plan.mode == StreamMode::mrc) {
            s_hat = mrc_combine(s_hat, weights, plan);
        }
        const std::vector<int> rx_bits = qpsk_demap(s_hat);
        for (std::size_t i = 0; i < tx_bits.size(); ++i) {
            count.errors += static_cast<std::uint64_t>(rx_bits[i] != tx_bits[i]);
        }
        count.bits += tx_bits.size();
    }
    return count;
}

} // namespace beamsim
