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

#include "beamsim/precoder.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "beamsim/errors.hpp"

namespace beamsim {

namespace {

// Greedy per-lobe codeword selection: repeatedly take the partition row with
// the largest projected energy onto the reference steering vectors, then
// retire that row together with every aliased row (identical sin means an
// identical physical beam; selecting it again would add a duplicate RF
// column with no diversity value). Ties go to the lowest index. If aliasing
// retires the whole partition before q picks are done, the remaining picks
// fall back to the lowest-index unselected columns so a feasible (if
// degenerate) solution is still returned.
std::vector<arma::uword> select_lobe_codewords(const CMatrix &reference, const QuantizedCodebook &cb,
                                               const std::vector<arma::uword> &partition,
                                               arma::uword q) {
    const arma::uword m = partition.size();
    CMatrix part(cb.vectors.n_rows, m);
    for (arma::uword r = 0; r < m; ++r) {
        part.col(r) = cb.vectors.col(partition[r]);
    }
    const CMatrix psi = part.t() * reference;
    arma::vec row_power = arma::sum(arma::square(arma::abs(psi)), 1);

    std::vector<bool> taken(m, false);
    std::vector<arma::uword> selected;
    selected.reserve(q);
    for (arma::uword pick = 0; pick < q; ++pick) {
        arma::uword best = m;
        double best_power = 0.0;
        for (arma::uword r = 0; r < m; ++r) {
            if (!taken[r] && row_power(r) > best_power) {
                best_power = row_power(r);
                best = r;
            }
        }
        if (best == m) {
            // Everything live was retired by aliasing; take the first
            // untaken column to keep the RF chain count intact.
            for (arma::uword r = 0; r < m; ++r) {
                if (!taken[r]) {
                    best = r;
                    break;
                }
            }
        }
        if (best == m) {
            throw ConfigError("hyp_sld: lobe partition exhausted before q selections");
        }
        selected.push_back(partition[best]);
        taken[best] = true;
        row_power(best) = 0.0;
        const double sin_best = std::sin(cb.angles[partition[best]]);
        for (arma::uword r = 0; r < m; ++r) {
            if (!taken[r] && std::abs(std::sin(cb.angles[partition[r]]) - sin_best) < 1e-12) {
                row_power(r) = 0.0;
            }
        }
    }
    return selected;
}

} // namespace

FullDigitalSolution svd_precoder(const CMatrix &h, arma::uword n_s) {
    if (n_s == 0 || n_s > std::min(h.n_rows, h.n_cols)) {
        throw ContractViolation("svd_precoder: n_s exceeds the channel dimensions");
    }
    const SvdResult r = svd(h);
    FullDigitalSolution sol;
    sol.f_opt = r.v.cols(0, n_s - 1);
    sol.w_opt = r.u.cols(0, n_s - 1);
    return sol;
}

HybridSolution hyp_sld(const ChannelRealization &ch, const QuantizedCodebook &cb_t,
                       const QuantizedCodebook &cb_r, arma::uword n_s) {
    const arma::uword p = ch.lobes.size();
    if (p == 0) {
        throw ContractViolation("hyp_sld: channel has no lobes");
    }
    if (cb_t.lobe_partition.empty() || cb_r.lobe_partition.empty()) {
        throw ConfigError("hyp_sld: codebooks are not partitioned for these lobes");
    }

    arma::uword total_paths = 0;
    for (const auto &lobe : ch.lobes) {
        total_paths += lobe.num_subpaths;
    }
    if (n_s == 0) {
        n_s = total_paths;
    }
    if (n_s > total_paths) {
        throw ContractViolation("hyp_sld: n_s exceeds the total subpath count");
    }
    if (ch.dims.n_rf_t < total_paths || ch.dims.n_rf_r < total_paths) {
        throw ConfigError("hyp_sld: needs at least sum(Q_i) RF chains per side");
    }

    HybridSolution sol;
    sol.f_rf.set_size(ch.dims.n_t, total_paths);
    sol.w_rf.set_size(ch.dims.n_r, total_paths);
    sol.blocks.resize(p);

    // Analog stage: per-lobe selection on both sides.
    arma::uword col = 0;
    for (arma::uword i = 0; i < p; ++i) {
        const auto &lobe = ch.lobes[i];
        const arma::uword q_i = lobe.num_subpaths;

        std::vector<arma::uword> path_ids;
        for (arma::uword l = 0; l < ch.paths.size(); ++l) {
            if (ch.paths[l].lobe_index == lobe.index) {
                path_ids.push_back(l);
            }
        }
        if (path_ids.empty()) {
            throw ConfigError("hyp_sld: lobe " + std::to_string(lobe.index) + " has no paths");
        }

        const auto tx_part = cb_t.lobe_partition.find(lobe.index);
        const auto rx_part = cb_r.lobe_partition.find(lobe.index);
        if (tx_part == cb_t.lobe_partition.end() || rx_part == cb_r.lobe_partition.end()) {
            throw ConfigError("hyp_sld: missing partition for lobe " + std::to_string(lobe.index));
        }
        if (tx_part->second.size() < q_i || rx_part->second.size() < q_i) {
            throw ConfigError("hyp_sld: lobe " + std::to_string(lobe.index) +
                              " feasible set smaller than its subpath count");
        }

        CMatrix a_ti(ch.dims.n_t, path_ids.size());
        CMatrix a_ri(ch.dims.n_r, path_ids.size());
        for (arma::uword k = 0; k < path_ids.size(); ++k) {
            a_ti.col(k) = ch.a_t.col(path_ids[k]);
            a_ri.col(k) = ch.a_r.col(path_ids[k]);
        }

        const auto tx_sel = select_lobe_codewords(a_ti, cb_t, tx_part->second, q_i);
        const auto rx_sel = select_lobe_codewords(a_ri, cb_r, rx_part->second, q_i);
        sol.blocks[i].lobe_index = lobe.index;
        sol.blocks[i].col_begin = col;
        sol.blocks[i].col_count = q_i;
        for (arma::uword k = 0; k < q_i; ++k) {
            sol.f_rf.col(col + k) = cb_t.vectors.col(tx_sel[k]);
            sol.w_rf.col(col + k) = cb_r.vectors.col(rx_sel[k]);
            sol.selected_tx.push_back(tx_sel[k]);
            sol.selected_rx.push_back(rx_sel[k]);
        }
        col += q_i;
    }

    // Digital stage: SVD of each diagonal effective block, optionally
    // dropping the globally weakest streams when n_s < sum(Q_i).
    std::vector<SvdResult> block_svd(p);
    std::vector<std::pair<double, arma::uword>> stream_pool; // (sigma, block)
    for (arma::uword i = 0; i < p; ++i) {
        const auto &blk = sol.blocks[i];
        const CMatrix w_i = sol.w_rf.cols(blk.col_begin, blk.col_begin + blk.col_count - 1);
        const CMatrix f_i = sol.f_rf.cols(blk.col_begin, blk.col_begin + blk.col_count - 1);
        block_svd[i] = svd(CMatrix(w_i.t() * ch.h * f_i));
        for (arma::uword k = 0; k < block_svd[i].s.n_elem; ++k) {
            stream_pool.emplace_back(block_svd[i].s(k), i);
        }
    }
    std::stable_sort(stream_pool.begin(), stream_pool.end(),
                     [](const auto &a, const auto &b) { return a.first > b.first; });
    std::vector<arma::uword> keep(p, 0);
    for (arma::uword s = 0; s < n_s; ++s) {
        ++keep[stream_pool[s].second];
    }

    sol.f_bb.zeros(total_paths, n_s);
    sol.w_bb.zeros(total_paths, n_s);
    arma::uword stream = 0;
    for (arma::uword i = 0; i < p; ++i) {
        auto &blk = sol.blocks[i];
        blk.stream_begin = stream;
        blk.stream_count = keep[i];
        if (keep[i] > 0) {
            sol.f_bb.submat(blk.col_begin, stream, blk.col_begin + blk.col_count - 1,
                            stream + keep[i] - 1) = block_svd[i].v.cols(0, keep[i] - 1);
            sol.w_bb.submat(blk.col_begin, stream, blk.col_begin + blk.col_count - 1,
                            stream + keep[i] - 1) = block_svd[i].u.cols(0, keep[i] - 1);
        }
        stream += keep[i];
    }

    sol.f_bb = normalize_power(sol.f_rf, sol.f_bb, n_s);
    return sol;
}

std::pair<CMatrix, CMatrix> omp_precoder(const CMatrix &h, const CMatrix &f_opt,
                                         const QuantizedCodebook &cb, arma::uword n_rf,
                                         arma::uword *repeat_diagnostic) {
    (void)h; // designer consumes f_opt and the codebook only
    if (n_rf == 0 || n_rf > cb.vectors.n_cols) {
        throw ContractViolation("omp_precoder: n_rf must be in [1, 2^b]");
    }
    const arma::uword n_s = f_opt.n_cols;
    CMatrix res = f_opt;
    CMatrix f_rf(f_opt.n_rows, 0);
    CMatrix f_bb;
    arma::uword repeats = 0;

    for (arma::uword it = 0; it < n_rf; ++it) {
        const CMatrix psi = cb.vectors.t() * res;
        const arma::vec row_power = arma::sum(arma::square(arma::abs(psi)), 1);
        arma::uword best = 0;
        double best_power = -1.0;
        for (arma::uword r = 0; r < row_power.n_elem; ++r) {
            if (row_power(r) > best_power) {
                best_power = row_power(r);
                best = r;
            }
        }
        f_rf = arma::join_rows(f_rf, cb.vectors.col(best));

        CMatrix gram = f_rf.t() * f_rf;
        const CMatrix rhs = f_rf.t() * f_opt;
        try {
            f_bb = solve_hermitian(gram, rhs);
        } catch (const NumericalError &) {
            // Repeated (or aliased) column: regularize and record it.
            gram += 1e-12 * arma::eye<CMatrix>(gram.n_rows, gram.n_cols);
            f_bb = solve_hermitian(gram, rhs);
            ++repeats;
        }
        res = f_opt - f_rf * f_bb;
        const double rn = frobenius_norm(res);
        res /= std::max(rn, 1e-300);
    }
    if (repeat_diagnostic != nullptr) {
        *repeat_diagnostic = repeats;
    }
    f_bb = normalize_power(f_rf, f_bb, n_s);
    return {f_rf, f_bb};
}

CMatrix normalize_power(const CMatrix &f_rf, const CMatrix &f_bb, arma::uword n_s) {
    const double norm = frobenius_norm(f_rf * f_bb);
    if (norm <= 0.0 || !std::isfinite(norm)) {
        throw ContractViolation("normalize_power: zero composite precoder");
    }
    return f_bb * (std::sqrt(static_cast<double>(n_s)) / norm);
}

EffectiveChannel effective_channel(const CMatrix &w_rf, const CMatrix &h, const CMatrix &f_rf,
                                   const std::vector<LobeBlock> &blocks) {
    EffectiveChannel eff;
    eff.h_eq = w_rf.t() * h * f_rf;
    CMatrix blkdiag(eff.h_eq.n_rows, eff.h_eq.n_cols, arma::fill::zeros);
    for (const auto &blk : blocks) {
        const arma::uword lo = blk.col_begin;
        const arma::uword hi = blk.col_begin + blk.col_count - 1;
        eff.diag_blocks.push_back(eff.h_eq.submat(lo, lo, hi, hi));
        blkdiag.submat(lo, lo, hi, hi) = eff.diag_blocks.back();
    }
    const double total = frobenius_norm(eff.h_eq);
    if (total > 0.0) {
        const double off = frobenius_norm(eff.h_eq - blkdiag);
        eff.offdiag_energy = (off * off) / (total * total);
    }
    return eff;
}

} // namespace beamsim
