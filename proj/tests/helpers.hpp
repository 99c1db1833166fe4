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
// Shared fixtures for the unit suites: deterministic random matrices, the
// headline system configuration used across modules, and small numeric
// helpers.

#ifndef BEAMSIM_TESTS_HELPERS_HPP
#define BEAMSIM_TESTS_HELPERS_HPP

#include <beamsim/beamsim.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

namespace testutil {

// Deterministic complex Gaussian matrix from a dedicated stream.
inline beamsim::CMatrix random_cmatrix(arma::uword rows, arma::uword cols,
                                       std::uint64_t seed = 9001) {
    beamsim::Rng rng(seed, 0, 0, 0);
    beamsim::CMatrix a(rows, cols);
    for (arma::uword c = 0; c < cols; ++c) {
        for (arma::uword r = 0; r < rows; ++r) {
            a(r, c) = rng.cgaussian();
        }
    }
    return a;
}

// Headline configuration exercised throughout: 64x32 array, 16/8 RF chains.
inline beamsim::SystemDims headline_dims(arma::uword n_s = 8) {
    return beamsim::SystemDims{64, 32, 16, 8, n_s};
}

inline double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

inline double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// One full channel draw at the given configuration (grid lobe means).
inline beamsim::ChannelRealization draw_channel(const beamsim::SystemDims &dims, arma::uword p,
                                                arma::uword q, std::uint64_t seed,
                                                std::uint64_t trial = 0) {
    beamsim::Rng rng(seed, 0, trial, 0);
    auto lobes = beamsim::default_lobe_layout(p, {q});
    auto paths = beamsim::draw_paths(lobes, rng);
    return beamsim::assemble_channel(dims, lobes, paths, false, 1.0, seed);
}

// Transmit/receive codebooks partitioned for the given lobe layout.
struct CodebookPair {
    beamsim::QuantizedCodebook tx;
    beamsim::QuantizedCodebook rx;
};

inline CodebookPair partitioned_codebooks(const beamsim::ChannelRealization &ch,
                                          arma::uword bits) {
    CodebookPair pair;
    pair.tx = beamsim::build_codebook(beamsim::UlaGeometry{ch.dims.n_t, 0.5}, bits);
    pair.rx = beamsim::build_codebook(beamsim::UlaGeometry{ch.dims.n_r, 0.5}, bits);
    beamsim::partition_by_lobes(pair.tx, ch.lobes);
    beamsim::partition_by_lobes(pair.rx, ch.lobes);
    return pair;
}

} // namespace testutil

#endif // BEAMSIM_TESTS_HELPERS_HPP
