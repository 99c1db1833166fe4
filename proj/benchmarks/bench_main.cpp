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
// Microbenchmarks at the headline system size: channel assembly, the two
// hybrid designers, spectral-efficiency evaluation, and one BER trial.

#include <benchmark/benchmark.h>

#include <cmath>

#include "beamsim/beamsim.hpp"

namespace {

using namespace beamsim;

const SystemDims kDims{64, 32, 16, 8, 8};
constexpr arma::uword kP = 4;
constexpr arma::uword kQ = 2;
constexpr arma::uword kBits = 7;

struct Fixture {
    std::vector<SpatialLobeSpec> lobes;
    ChannelRealization ch;
    QuantizedCodebook cb_t;
    QuantizedCodebook cb_r;

    Fixture() {
        Rng rng(42, 0, 0, 0);
        lobes = default_lobe_layout(kP, {kQ});
        const auto paths = draw_paths(lobes, rng);
        ch = assemble_channel(kDims, lobes, paths);
        cb_t = build_codebook(UlaGeometry{kDims.n_t}, kBits);
        cb_r = build_codebook(UlaGeometry{kDims.n_r}, kBits);
        partition_by_lobes(cb_t, lobes);
        partition_by_lobes(cb_r, lobes);
    }
};

const Fixture &fixture() {
    static Fixture f;
    return f;
}

void BM_ChannelAssembly(benchmark::State &state) {
    const auto &f = fixture();
    std::uint64_t t = 0;
    for (auto _ : state) {
        Rng rng(42, 0, t++, 0);
        const auto paths = draw_paths(f.lobes, rng);
        auto ch = assemble_channel(kDims, f.lobes, paths);
        double anchor = std::abs(ch.h(0, 0));
        benchmark::DoNotOptimize(anchor);
    }
}
BENCHMARK(BM_ChannelAssembly);

void BM_HypSldDesign(benchmark::State &state) {
    const auto &f = fixture();
    for (auto _ : state) {
        auto sol = hyp_sld(f.ch, f.cb_t, f.cb_r);
        double anchor = std::abs(sol.f_bb(0, 0));
        benchmark::DoNotOptimize(anchor);
    }
}
BENCHMARK(BM_HypSldDesign);

void BM_OmpDesign(benchmark::State &state) {
    const auto &f = fixture();
    const auto ref = svd_precoder(f.ch.h, kDims.n_s);
    for (auto _ : state) {
        auto fp = omp_precoder(f.ch.h, ref.f_opt, f.cb_t, kDims.n_rf_t);
        double anchor = std::abs(fp.second(0, 0));
        benchmark::DoNotOptimize(anchor);
    }
}
BENCHMARK(BM_OmpDesign);

void BM_SvdDesign(benchmark::State &state) {
    const auto &f = fixture();
    for (auto _ : state) {
        auto sol = svd_precoder(f.ch.h, kDims.n_s);
        double anchor = std::abs(sol.f_opt(0, 0));
        benchmark::DoNotOptimize(anchor);
    }
}
BENCHMARK(BM_SvdDesign);

void BM_SpectralEfficiency(benchmark::State &state) {
    const auto &f = fixture();
    const auto sol = hyp_sld(f.ch, f.cb_t, f.cb_r);
    const CMatrix f_t = sol.precoder();
    const CMatrix w_t = orthonormalized_combiner(sol);
    const LinkBudget budget = LinkBudget::from_snr_db(0.0);
    for (auto _ : state) {
        double se = spectral_efficiency(f.ch.h, f_t, w_t, budget, kDims.n_s);
        benchmark::DoNotOptimize(se);
    }
}
BENCHMARK(BM_SpectralEfficiency);

void BM_BerTrial(benchmark::State &state) {
    BerConfig cfg;
    cfg.dims = kDims;
    cfg.dims.n_s = 0;
    cfg.p = kP;
    cfg.q_per_lobe = {kQ};
    cfg.bits = kBits;
    cfg.snr_db = 0.0;
    cfg.scheme = "hyp_sld_mrc";
    cfg.n_vectors = 100;
    std::uint64_t t = 0;
    for (auto _ : state) {
        auto count = ber_trial(cfg, 42, 0, t++);
        benchmark::DoNotOptimize(count.errors);
    }
}
BENCHMARK(BM_BerTrial);

} // namespace

BENCHMARK_MAIN();
