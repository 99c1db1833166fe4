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
// Seeded Monte Carlo sweep driver and CLI. Every (cell, trial) draws from
// the stream (master_seed, cell_index, trial_index), results accumulate
// into preallocated per-trial slots, and the final reduction runs in fixed
// trial order — so output is bit-identical for any worker count.

#ifndef BEAMSIM_HARNESS_HPP
#define BEAMSIM_HARNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "beamsim/channel.hpp"

namespace beamsim {

struct SweepConfig {
    SystemDims dims{64, 32, 16, 8, 0}; // n_s = 0 means sum of Q_i
    arma::uword p = 4;
    std::vector<arma::uword> q_per_lobe = {2}; // size 1 = same Q for all lobes
    arma::uword bits = 7;
    std::vector<double> snr_grid_db = {0.0};
    // One of: snr | p | q | n_rf | n_antennas | n_s. For sweeps other than
    // snr, sweep_values lists the swept variable's values and the snr grid
    // is crossed with them.
    std::string sweep_var = "snr";
    std::vector<double> sweep_values;
    // Subset of {svd, omp, hyp_sld, hyp_sld_mrc}.
    std::vector<std::string> schemes = {"svd", "omp", "hyp_sld"};
    // "spectral_efficiency" | "ber".
    std::string metric = "spectral_efficiency";
    arma::uword trials = 100;
    arma::uword vectors_per_trial = 500; // BER only
    std::uint64_t master_seed = 1;
    std::string out_path = "results.csv";
    bool random_lobe_means = false;
    arma::uword workers = 0; // 0 = hardware concurrency

    void validate() const;
};

struct SweepResult {
    std::string config_hash;
    std::string sweep_var;
    double cell_value = 0.0;
    double snr_db = 0.0;
    std::string scheme;
    std::string metric;
    double mean = 0.0;
    double std_error = 0.0;
    arma::uword trials = 0;
    std::uint64_t seed = 0;
    bool failed = false;
    std::string fail_reason;
};

// FNV-1a 64-bit hash of the canonical config serialization, as 16 hex chars.
std::string config_hash(const SweepConfig &cfg);

// Flat key = value file (# comments, comma-separated lists). Unknown keys
// are a ConfigError.
SweepConfig parse_config_file(const std::string &path);

// Runs trials for every (cell, scheme), aggregates means and standard
// errors. Infeasible cells are marked failed (NaN mean) and the sweep
// continues. Deterministic for a given master seed at any worker count.
std::vector<SweepResult> run_sweep(const SweepConfig &cfg);

// Exact header:
// config_hash,sweep_var,cell_value,snr_db,scheme,metric,mean,stderr,trials,seed
void emit_csv(const std::vector<SweepResult> &results, const std::string &path);

// Subcommands: se-sweep, ber-sweep, complexity, channel-dump,
// codebook-dump, selftest. Exit 0 on success, 1 on configuration errors,
// 2 when a sweep ran but every cell failed.
int cli_main(int argc, char **argv);

} // namespace beamsim

#endif // BEAMSIM_HARNESS_HPP
