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

#include "beamsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>

#include "beamsim/codebook.hpp"
#include "beamsim/errors.hpp"
#include "beamsim/link.hpp"
#include "beamsim/metrics.hpp"
#include "beamsim/precoder.hpp"

namespace beamsim {

namespace {

const std::set<std::string> kSchemes = {"svd", "omp", "hyp_sld", "hyp_sld_mrc"};
const std::set<std::string> kSweepVars = {"snr", "p", "q", "n_rf", "n_antennas", "n_s"};

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_short(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string join_doubles(const std::vector<double> &v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) {
            out += ",";
        }
        out += fmt_double(v[i]);
    }
    return out;
}

std::string join_uwords(const std::vector<arma::uword> &v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) {
            out += ",";
        }
        out += std::to_string(v[i]);
    }
    return out;
}

std::string join_strings(const std::vector<std::string> &v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) {
            out += ",";
        }
        out += v[i];
    }
    return out;
}

std::string trim(const std::string &s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) {
        return "";
    }
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string &s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

double parse_double(const std::string &key, const std::string &s) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) {
            throw std::invalid_argument("trailing characters");
        }
        return v;
    } catch (const std::exception &) {
        throw ConfigError("config key '" + key + "': cannot parse '" + s + "' as a number");
    }
}

arma::uword parse_count(const std::string &key, const std::string &s) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(s, &pos);
        if (pos != s.size()) {
            throw std::invalid_argument("trailing characters");
        }
        return static_cast<arma::uword>(v);
    } catch (const std::exception &) {
        throw ConfigError("config key '" + key + "': cannot parse '" + s + "' as a count");
    }
}

// The metric name carried by result rows; the config accepts the short form.
std::string row_metric_name(const std::string &cfg_metric) {
    if (cfg_metric == "spectral_efficiency") {
        return "spectral_efficiency_bps_hz";
    }
    return cfg_metric;
}

struct Cell {
    double cell_value = 0.0;
    double snr_db = 0.0;
};

std::vector<Cell> build_cells(const SweepConfig &cfg) {
    std::vector<Cell> cells;
    if (cfg.sweep_var == "snr") {
        const std::vector<double> &grid =
            cfg.sweep_values.empty() ? cfg.snr_grid_db : cfg.sweep_values;
        for (double snr : grid) {
            cells.push_back({snr, snr});
        }
    } else {
        for (double v : cfg.sweep_values) {
            for (double snr : cfg.snr_grid_db) {
                cells.push_back({v, snr});
            }
        }
    }
    return cells;
}

// Specializes the base config for one cell. Throws ConfigError when the
// swept value is not usable (non-integer count, zero, ...).
SweepConfig specialize(const SweepConfig &base, const std::string &var, double value) {
    SweepConfig cfg = base;
    if (var == "snr") {
        return cfg;
    }
    const double rounded = std::round(value);
    if (std::abs(value - rounded) > 1e-9 || rounded < 1.0) {
        throw ConfigError("sweep value " + fmt_short(value) + " is not a positive integer");
    }
    const arma::uword count = static_cast<arma::uword>(rounded);
    if (var == "p") {
        cfg.p = count;
    } else if (var == "q") {
        cfg.q_per_lobe = {count};
    } else if (var == "n_rf") {
        cfg.dims.n_rf_r = count;
    } else if (var == "n_antennas") {
        cfg.dims.n_t = count;
        cfg.dims.n_r = count;
    } else if (var == "n_s") {
        cfg.dims.n_s = count;
    } else {
        throw ConfigError("unknown sweep variable '" + var + "'");
    }
    return cfg;
}

arma::uword total_subpaths(const std::vector<SpatialLobeSpec> &lobes) {
    arma::uword total = 0;
    for (const auto &l : lobes) {
        total += l.num_subpaths;
    }
    return total;
}

// One trial of the spectral-efficiency metric: one channel realization,
// every scheme designed on it (common random numbers), SE per scheme.
void se_trial(const SweepConfig &cfg, double snr_db, std::uint64_t cell_index,
              std::uint64_t trial_index, std::vector<double> &out_per_scheme) {
    Rng rng_channel(cfg.master_seed, cell_index, trial_index, 0);
    std::vector<SpatialLobeSpec> lobes = default_lobe_layout(cfg.p, cfg.q_per_lobe);
    if (cfg.random_lobe_means) {
        randomize_lobe_means(lobes, rng_channel);
    }
    SystemDims dims = cfg.dims;
    if (dims.n_s == 0) {
        dims.n_s = total_subpaths(lobes);
    }
    dims.validate();

    const std::vector<PathComponent> paths = draw_paths(lobes, rng_channel);
    const ChannelRealization ch = assemble_channel(dims, lobes, paths, false, 1.0, trial_index);

    QuantizedCodebook cb_t = build_codebook(UlaGeometry{dims.n_t}, cfg.bits);
    QuantizedCodebook cb_r = build_codebook(UlaGeometry{dims.n_r}, cfg.bits);
    const bool any_hybrid =
        std::any_of(cfg.schemes.begin(), cfg.schemes.end(),
                    [](const std::string &s) { return s == "hyp_sld" || s == "hyp_sld_mrc"; });
    if (any_hybrid) {
        partition_by_lobes(cb_t, lobes);
        partition_by_lobes(cb_r, lobes);
    }

    const LinkBudget budget = LinkBudget::from_snr_db(snr_db);
    out_per_scheme.assign(cfg.schemes.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t si = 0; si < cfg.schemes.size(); ++si) {
        const std::string &scheme = cfg.schemes[si];
        if (scheme == "hyp_sld_mrc") {
            throw ConfigError(
                "spectral_efficiency is not defined for hyp_sld_mrc (single-symbol diversity "
                "mode); use metric=ber");
        }
        const LinkDesign design = design_link(ch, cb_t, cb_r, scheme, dims.n_s);
        out_per_scheme[si] = spectral_efficiency(ch.h, design.f_t, design.w_t, budget, dims.n_s);
    }
}

void ber_metric_trial(const SweepConfig &cfg, double snr_db, std::uint64_t cell_index,
                      std::uint64_t trial_index, std::vector<double> &out_per_scheme) {
    out_per_scheme.assign(cfg.schemes.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t si = 0; si < cfg.schemes.size(); ++si) {
        BerConfig bc;
        bc.dims = cfg.dims;
        bc.p = cfg.p;
        bc.q_per_lobe = cfg.q_per_lobe;
        bc.bits = cfg.bits;
        bc.snr_db = snr_db;
        bc.scheme = cfg.schemes[si];
        bc.n_vectors = cfg.vectors_per_trial;
        bc.random_lobe_means = cfg.random_lobe_means;
        const BerCount count = ber_trial(bc, cfg.master_seed, cell_index, trial_index);
        out_per_scheme[si] =
            static_cast<double>(count.errors) / static_cast<double>(count.bits);
    }
}

} // namespace

void SweepConfig::validate() const {
    if (metric != "spectral_efficiency" && metric != "ber") {
        throw ConfigError("metric must be spectral_efficiency or ber, got '" + metric + "'");
    }
    if (kSweepVars.find(sweep_var) == kSweepVars.end()) {
        throw ConfigError("unknown sweep variable '" + sweep_var + "'");
    }
    if (sweep_var != "snr" && sweep_values.empty()) {
        throw ConfigError("sweep_values must be nonempty for sweep_var=" + sweep_var);
    }
    if (snr_grid_db.empty() && !(sweep_var == "snr" && !sweep_values.empty())) {
        throw ConfigError("snr grid must be nonempty");
    }
    if (schemes.empty()) {
        throw ConfigError("schemes must be nonempty");
    }
    for (const auto &s : schemes) {
        if (kSchemes.find(s) == kSchemes.end()) {
            throw ConfigError("unknown scheme '" + s + "'");
        }
    }
    if (trials == 0) {
        throw ConfigError("trials must be >= 1");
    }
    if (metric == "ber" && vectors_per_trial == 0) {
        throw ConfigError("vectors must be >= 1 for the ber metric");
    }
    if (p == 0) {
        throw ConfigError("p must be >= 1");
    }
    if (q_per_lobe.empty()) {
        throw ConfigError("q must be nonempty");
    }
    if (q_per_lobe.size() != 1 && q_per_lobe.size() != p) {
        throw ConfigError("q must have one entry or one per lobe");
    }
    for (arma::uword q : q_per_lobe) {
        if (q == 0) {
            throw ConfigError("every q entry must be >= 1");
        }
    }
    if (bits == 0 || bits > 16) {
        throw ConfigError("bits must be in 1..16");
    }
    if (dims.n_t == 0 || dims.n_r == 0 || dims.n_rf_t == 0 || dims.n_rf_r == 0) {
        throw ConfigError("antenna and RF-chain counts must be positive");
    }
}

std::string config_hash(const SweepConfig &cfg) {
    // Canonical serialization: sorted key=value lines of every field that
    // affects results (out path and worker count deliberately excluded).
    std::vector<std::string> lines = {
        "bits=" + std::to_string(cfg.bits),
        "lobe_means=" + std::string(cfg.random_lobe_means ? "random" : "grid"),
        "metric=" + cfg.metric,
        "nr=" + std::to_string(cfg.dims.n_r),
        "nrf_r=" + std::to_string(cfg.dims.n_rf_r),
        "nrf_t=" + std::to_string(cfg.dims.n_rf_t),
        "ns=" + std::to_string(cfg.dims.n_s),
        "nt=" + std::to_string(cfg.dims.n_t),
        "p=" + std::to_string(cfg.p),
        "q=" + join_uwords(cfg.q_per_lobe),
        "schemes=" + join_strings(cfg.schemes),
        "seed=" + std::to_string(cfg.master_seed),
        "snr_db=" + join_doubles(cfg.snr_grid_db),
        "sweep_values=" + join_doubles(cfg.sweep_values),
        "sweep_var=" + cfg.sweep_var,
        "trials=" + std::to_string(cfg.trials),
        "vectors=" + std::to_string(cfg.vectors_per_trial),
    };
    std::sort(lines.begin(), lines.end());
    std::uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a 64 offset basis
    for (const auto &line : lines) {
        for (char c : line) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ULL;
        }
        h ^= static_cast<unsigned char>('\n');
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

SweepConfig parse_config_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    SweepConfig cfg;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) {
            raw = raw.substr(0, hash);
        }
        raw = trim(raw);
        if (raw.empty()) {
            continue;
        }
        const auto eq = raw.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(line_no) +
                              ": expected key = value, got '" + raw + "'");
        }
        const std::string key = trim(raw.substr(0, eq));
        const std::string value = trim(raw.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": empty key or value");
        }
        if (key == "metric") {
            cfg.metric = (value == "spectral_efficiency_bps_hz" || value == "se")
                             ? "spectral_efficiency"
                             : value;
        } else if (key == "sweep_var") {
            cfg.sweep_var = value;
        } else if (key == "sweep_values") {
            cfg.sweep_values.clear();
            for (const auto &item : split_list(value)) {
                cfg.sweep_values.push_back(parse_double(key, item));
            }
        } else if (key == "p") {
            cfg.p = parse_count(key, value);
        } else if (key == "q") {
            cfg.q_per_lobe.clear();
            for (const auto &item : split_list(value)) {
                cfg.q_per_lobe.push_back(parse_count(key, item));
            }
        } else if (key == "bits") {
            cfg.bits = parse_count(key, value);
        } else if (key == "nt") {
            cfg.dims.n_t = parse_count(key, value);
        } else if (key == "nr") {
            cfg.dims.n_r = parse_count(key, value);
        } else if (key == "nrf_t") {
            cfg.dims.n_rf_t = parse_count(key, value);
        } else if (key == "nrf_r") {
            cfg.dims.n_rf_r = parse_count(key, value);
        } else if (key == "ns") {
            cfg.dims.n_s = parse_count(key, value);
        } else if (key == "snr_db") {
            cfg.snr_grid_db.clear();
            for (const auto &item : split_list(value)) {
                cfg.snr_grid_db.push_back(parse_double(key, item));
            }
        } else if (key == "schemes") {
            cfg.schemes = split_list(value);
        } else if (key == "trials") {
            cfg.trials = parse_count(key, value);
        } else if (key == "vectors") {
            cfg.vectors_per_trial = parse_count(key, value);
        } else if (key == "seed") {
            try {
                cfg.master_seed = std::stoull(value);
            } catch (const std::exception &) {
                throw ConfigError("config key 'seed': cannot parse '" + value + "'");
            }
        } else if (key == "out") {
            cfg.out_path = value;
        } else if (key == "lobe_means") {
            if (value == "grid") {
                cfg.random_lobe_means = false;
            } else if (value == "random") {
                cfg.random_lobe_means = true;
            } else {
                throw ConfigError("config key 'lobe_means': expected grid or random, got '" +
                                  value + "'");
            }
        } else if (key == "workers") {
            cfg.workers = parse_count(key, value);
        } else {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": unknown key '" + key +
                              "'");
        }
    }
    return cfg;
}

std::vector<SweepResult> run_sweep(const SweepConfig &cfg) {
    cfg.validate();
    const std::vector<Cell> cells = build_cells(cfg);
    const std::size_t n_cells = cells.size();
    const std::size_t n_schemes = cfg.schemes.size();
    const std::size_t n_trials = cfg.trials;
    const std::string hash = config_hash(cfg);
    const std::string metric_name = row_metric_name(cfg.metric);

    // Per-cell specialized configs; a specialization failure (non-integer
    // sweep value etc.) marks the whole cell failed up front.
    std::vector<SweepConfig> cell_cfgs;
    std::vector<std::string> cell_errors(n_cells);
    cell_cfgs.reserve(n_cells);
    for (std::size_t c = 0; c < n_cells; ++c) {
        try {
            cell_cfgs.push_back(specialize(cfg, cfg.sweep_var, cells[c].cell_value));
        } catch (const std::exception &e) {
            cell_cfgs.push_back(cfg);
            cell_errors[c] = e.what();
        }
    }

    // values[(c * n_trials + t) * n_schemes + s]; trial_errors[c][t].
    std::vector<double> values(n_cells * n_trials * n_schemes,
                               std::numeric_limits<double>::quiet_NaN());
    std::vector<std::string> trial_errors(n_cells * n_trials);

    std::atomic<std::size_t> next_task{0};
    const std::size_t total_tasks = n_cells * n_trials;
    arma::uword workers = cfg.workers;
    if (workers == 0) {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }
    workers = std::min<arma::uword>(workers, total_tasks);

    auto worker_body = [&]() {
        std::vector<double> per_scheme;
        for (;;) {
            const std::size_t task = next_task.fetch_add(1);
            if (task >= total_tasks) {
                break;
            }
            const std::size_t c = task / n_trials;
            const std::size_t t = task % n_trials;
            if (!cell_errors[c].empty()) {
                continue;
            }
            try {
                if (cfg.metric == "spectral_efficiency") {
                    se_trial(cell_cfgs[c], cells[c].snr_db, c, t, per_scheme);
                } else {
                    ber_metric_trial(cell_cfgs[c], cells[c].snr_db, c, t, per_scheme);
                }
                for (std::size_t s = 0; s < n_schemes; ++s) {
                    values[(c * n_trials + t) * n_schemes + s] = per_scheme[s];
                }
            } catch (const std::exception &e) {
                trial_errors[c * n_trials + t] = e.what();
            }
        }
    };

    if (workers <= 1) {
        worker_body();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (arma::uword w = 0; w < workers; ++w) {
            pool.emplace_back(worker_body);
        }
        for (auto &th : pool) {
            th.join();
        }
    }

    // Fixed-order reduction: first failing trial (lowest index) defines the
    // cell's failure reason, so output is identical for any worker count.
    std::vector<SweepResult> results;
    results.reserve(n_cells * n_schemes);
    for (std::size_t c = 0; c < n_cells; ++c) {
        std::string reason = cell_errors[c];
        if (reason.empty()) {
            for (std::size_t t = 0; t < n_trials; ++t) {
                if (!trial_errors[c * n_trials + t].empty()) {
                    reason = trial_errors[c * n_trials + t];
                    break;
                }
            }
        }
        for (std::size_t s = 0; s < n_schemes; ++s) {
            SweepResult row;
            row.config_hash = hash;
            row.sweep_var = cfg.sweep_var;
            row.cell_value = cells[c].cell_value;
            row.snr_db = cells[c].snr_db;
            row.scheme = cfg.schemes[s];
            row.metric = metric_name;
            row.trials = cfg.trials;
            row.seed = cfg.master_seed;
            if (!reason.empty()) {
                row.failed = true;
                row.fail_reason = reason;
                row.mean = std::numeric_limits<double>::quiet_NaN();
                row.std_error = std::numeric_limits<double>::quiet_NaN();
            } else {
                double sum = 0.0;
                for (std::size_t t = 0; t < n_trials; ++t) {
                    sum += values[(c * n_trials + t) * n_schemes + s];
                }
                const double mean = sum / static_cast<double>(n_trials);
                double ss = 0.0;
                for (std::size_t t = 0; t < n_trials; ++t) {
                    const double d = values[(c * n_trials + t) * n_schemes + s] - mean;
                    ss += d * d;
                }
                row.mean = mean;
                row.std_error =
                    n_trials > 1
                        ? std::sqrt(ss / (static_cast<double>(n_trials) *
                                          static_cast<double>(n_trials - 1)))
                        : 0.0;
            }
            results.push_back(row);
        }
    }
    return results;
}

void emit_csv(const std::vector<SweepResult> &results, const std::string &path) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot open output file '" + path + "'");
    }
    out << "config_hash,sweep_var,cell_value,snr_db,scheme,metric,mean,stderr,trials,seed\n";
    for (const auto &r : results) {
        out << r.config_hash << ',' << r.sweep_var << ',' << fmt_short(r.cell_value) << ','
            << fmt_short(r.snr_db) << ',' << r.scheme << ',' << r.metric << ','
            << fmt_short(r.mean) << ',' << fmt_short(r.std_error) << ',' << r.trials << ','
            << r.seed << '\n';
    }
    if (!out) {
        throw ConfigError("failed while writing '" + path + "'");
    }
}

namespace {

arma::uword env_workers() {
    const char *env = std::getenv("BEAMSIM_WORKERS");
    if (env == nullptr || *env == '\0') {
        return 0;
    }
    try {
        return parse_count("BEAMSIM_WORKERS", env);
    } catch (const std::exception &) {
        return 0;
    }
}

struct CommonFlags {
    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    arma::uword workers = 0;
    arma::uword trials = 0;
    bool seed_set = false;
    bool out_set = false;
    bool workers_set = false;
    bool trials_set = false;
};

void add_common_flags(CLI::App *cmd, CommonFlags &flags) {
    cmd->add_option("--config", flags.config_path, "Sweep configuration file")->required();
    cmd->add_option("--seed", flags.seed, "Master seed override")
        ->each([&flags](const std::string &) { flags.seed_set = true; });
    cmd->add_option("--out", flags.out_path, "Output CSV path override")
        ->each([&flags](const std::string &) { flags.out_set = true; });
    cmd->add_option("--workers", flags.workers, "Worker thread count (0 = hardware)")
        ->each([&flags](const std::string &) { flags.workers_set = true; });
    cmd->add_option("--trials", flags.trials, "Trials per cell override")
        ->each([&flags](const std::string &) { flags.trials_set = true; });
}

int run_sweep_command(const CommonFlags &flags, const std::string &metric) {
    SweepConfig cfg = parse_config_file(flags.config_path);
    cfg.metric = metric;
    if (flags.seed_set) {
        cfg.master_seed = flags.seed;
    }
    if (flags.out_set) {
        cfg.out_path = flags.out_path;
    }
    if (flags.trials_set) {
        cfg.trials = flags.trials;
    }
    if (flags.workers_set) {
        cfg.workers = flags.workers;
    } else if (cfg.workers == 0) {
        cfg.workers = env_workers();
    }
    const std::vector<SweepResult> results = run_sweep(cfg);
    emit_csv(results, cfg.out_path);
    std::size_t failed = 0;
    for (const auto &r : results) {
        if (r.failed) {
            ++failed;
            std::cerr << "cell (" << r.sweep_var << "=" << fmt_short(r.cell_value) << ", snr="
                      << fmt_short(r.snr_db) << " dB, " << r.scheme
                      << ") failed: " << r.fail_reason << "\n";
        }
    }
    std::cout << results.size() << " rows -> " << cfg.out_path << " (" << failed << " failed)\n";
    if (!results.empty() && failed == results.size()) {
        std::cerr << "every cell failed\n";
        return 2;
    }
    return 0;
}

int run_complexity(const SystemDims &dims, arma::uword p, arma::uword q, arma::uword b) {
    const ComplexityReport omp = flop_estimate("omp", dims, p, q, b);
    const ComplexityReport hyp = flop_estimate("hyp_sld", dims, p, q, b);
    std::printf("omp_ops        %.0f\n", omp.total);
    for (const auto &ph : omp.phases) {
        std::printf("  %-24s %.0f\n", ph.first.c_str(), ph.second);
    }
    std::printf("hyp_sld_ops    %.0f\n", hyp.total);
    for (const auto &ph : hyp.phases) {
        std::printf("  %-24s %.0f\n", ph.first.c_str(), ph.second);
    }
    std::printf("reduction      %.6f\n", hyp.reduction_vs_baseline);
    std::printf("reduction_pct  %.4f%%\n", 100.0 * hyp.reduction_vs_baseline);
    return 0;
}

int run_channel_dump(std::uint64_t seed, arma::uword nt, arma::uword nr, arma::uword p,
                     arma::uword q, const std::string &out_path) {
    SystemDims dims{nt, nr, nt, nr, 1};
    Rng rng(seed, 0, 0, 0);
    const std::vector<SpatialLobeSpec> lobes = default_lobe_layout(p, {q});
    const std::vector<PathComponent> paths = draw_paths(lobes, rng);
    const ChannelRealization ch = assemble_channel(dims, lobes, paths, false, 1.0, seed);

    std::ostream *os = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) {
            throw ConfigError("cannot open output file '" + out_path + "'");
        }
        os = &file;
    }
    *os << "# seed=" << seed << " nt=" << nt << " nr=" << nr << " p=" << p << " q=" << q << "\n";
    *os << "# paths: lobe,aod,aoa,gain_re,gain_im\n";
    for (const auto &path : ch.paths) {
        *os << "# path," << path.lobe_index << ',' << fmt_short(path.aod) << ','
            << fmt_short(path.aoa) << ',' << fmt_short(path.gain.real()) << ','
            << fmt_short(path.gain.imag()) << "\n";
    }
    *os << "row,col,re,im\n";
    for (arma::uword r = 0; r < ch.h.n_rows; ++r) {
        for (arma::uword c = 0; c < ch.h.n_cols; ++c) {
            *os << r << ',' << c << ',' << fmt_short(ch.h(r, c).real()) << ','
                << fmt_short(ch.h(r, c).imag()) << "\n";
        }
    }
    return 0;
}

int run_codebook_dump(arma::uword n, arma::uword b, arma::uword p, const std::string &out_path) {
    QuantizedCodebook cb = build_codebook(UlaGeometry{n}, b);
    std::vector<arma::sword> owner(cb.vectors.n_cols, -1);
    if (p > 0) {
        const std::vector<SpatialLobeSpec> lobes = default_lobe_layout(p, {1});
        partition_by_lobes(cb, lobes);
        for (const auto &[lobe, cols] : cb.lobe_partition) {
            for (arma::uword col : cols) {
                owner[col] = static_cast<arma::sword>(lobe);
            }
        }
    }
    std::ostream *os = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) {
            throw ConfigError("cannot open output file '" + out_path + "'");
        }
        os = &file;
    }
    *os << "index,angle_rad,sin_angle,owner_lobe\n";
    for (arma::uword c = 0; c < cb.vectors.n_cols; ++c) {
        *os << c << ',' << fmt_short(cb.angles[c]) << ',' << fmt_short(std::sin(cb.angles[c]))
            << ',' << owner[c] << "\n";
    }
    *os << "# duplicate_columns=" << duplicate_column_count(cb) << "\n";
    return 0;
}

int run_selftest() {
    int failures = 0;
    auto check = [&failures](bool ok, const char *label) {
        std::printf("%s %s\n", ok ? "ok  " : "FAIL", label);
        if (!ok) {
            ++failures;
        }
    };

    {
        Rng a(7, 1, 2, 0);
        Rng b(7, 1, 2, 0);
        bool same = true;
        for (int i = 0; i < 64; ++i) {
            same = same && a.next_u64() == b.next_u64();
        }
        check(same, "rng determinism");
    }
    {
        SystemDims dims{16, 8, 4, 4, 2};
        double acc = 0.0;
        const int trials = 400;
        for (int t = 0; t < trials; ++t) {
            Rng rng(11, 0, static_cast<std::uint64_t>(t), 0);
            const auto lobes = default_lobe_layout(4, {2});
            const auto paths = draw_paths(lobes, rng);
            const auto ch = assemble_channel(dims, lobes, paths);
            const double n = frobenius_norm(ch.h);
            acc += n * n;
        }
        const double mean = acc / trials;
        const double expected = 16.0 * 8.0;
        check(std::abs(mean - expected) / expected < 0.15, "channel norm calibration");
    }
    {
        SystemDims dims{32, 16, 8, 8, 4};
        Rng rng(13, 0, 0, 0);
        const auto lobes = default_lobe_layout(4, {1});
        const auto paths = draw_paths(lobes, rng);
        const auto ch = assemble_channel(dims, lobes, paths);
        QuantizedCodebook cb_t = build_codebook(UlaGeometry{dims.n_t}, 7);
        QuantizedCodebook cb_r = build_codebook(UlaGeometry{dims.n_r}, 7);
        partition_by_lobes(cb_t, lobes);
        partition_by_lobes(cb_r, lobes);
        const HybridSolution sol = hyp_sld(ch, cb_t, cb_r);
        const double nrm = frobenius_norm(sol.precoder());
        check(std::abs(nrm * nrm - static_cast<double>(sol.f_bb.n_cols)) < 1e-9,
              "hybrid precoder power constraint");
        const CMatrix w_t = orthonormalized_combiner(sol);
        const CMatrix gram = w_t.t() * w_t;
        double dev = 0.0;
        for (const auto &b : sol.blocks) {
            for (arma::uword i = 0; i < b.stream_count; ++i) {
                for (arma::uword j = 0; j < b.stream_count; ++j) {
                    const std::complex<double> want = i == j ? 1.0 : 0.0;
                    dev = std::max(dev,
                                   std::abs(gram(b.stream_begin + i, b.stream_begin + j) - want));
                }
            }
        }
        check(dev < 1e-6, "combiner per-block orthonormality");
    }
    {
        const CMatrix h_hat = CMatrix(arma::eye<arma::mat>(1, 1), arma::zeros<arma::mat>(1, 1));
        CVector y(1);
        y(0) = std::complex<double>(2.0, 0.0);
        const CVector s_hat = lmmse_demodulate(y, h_hat, 1.0, 1.0);
        check(std::abs(s_hat(0) - std::complex<double>(1.0, 0.0)) < 1e-12,
              "lmmse identity shrinkage");
    }
    std::printf("%s\n", failures == 0 ? "selftest passed" : "selftest FAILED");
    return failures == 0 ? 0 : 2;
}

} // namespace

int cli_main(int argc, char **argv) {
    CLI::App app{"beamsim — spatial-lobes hybrid precoding simulator"};
    app.require_subcommand(1);

    CommonFlags se_flags;
    CLI::App *se_cmd = app.add_subcommand("se-sweep", "Spectral-efficiency Monte Carlo sweep");
    add_common_flags(se_cmd, se_flags);

    CommonFlags ber_flags;
    CLI::App *ber_cmd = app.add_subcommand("ber-sweep", "Bit-error-rate Monte Carlo sweep");
    add_common_flags(ber_cmd, ber_flags);

    SystemDims cx_dims{64, 32, 16, 8, 8};
    arma::uword cx_p = 4, cx_q = 2, cx_b = 7;
    CLI::App *cx_cmd = app.add_subcommand("complexity", "Print the flop-count comparison");
    cx_cmd->add_option("--nt", cx_dims.n_t, "Transmit antennas");
    cx_cmd->add_option("--nr", cx_dims.n_r, "Receive antennas");
    cx_cmd->add_option("--nrf-t", cx_dims.n_rf_t, "Transmit RF chains");
    cx_cmd->add_option("--nrf-r", cx_dims.n_rf_r, "Receive RF chains");
    cx_cmd->add_option("--p", cx_p, "Spatial lobes");
    cx_cmd->add_option("--q", cx_q, "Subpaths per lobe");
    cx_cmd->add_option("--b", cx_b, "Codebook bits");
    cx_cmd->add_option("--ns", cx_dims.n_s, "Data streams");

    std::uint64_t cd_seed = 1;
    arma::uword cd_nt = 64, cd_nr = 32, cd_p = 4, cd_q = 2;
    std::string cd_out;
    CLI::App *cd_cmd = app.add_subcommand("channel-dump", "Dump one channel realization as CSV");
    cd_cmd->add_option("--seed", cd_seed, "Master seed");
    cd_cmd->add_option("--nt", cd_nt, "Transmit antennas");
    cd_cmd->add_option("--nr", cd_nr, "Receive antennas");
    cd_cmd->add_option("--p", cd_p, "Spatial lobes");
    cd_cmd->add_option("--q", cd_q, "Subpaths per lobe");
    cd_cmd->add_option("--out", cd_out, "Output path (default stdout)");

    arma::uword cb_n = 64, cb_b = 7, cb_p = 0;
    std::string cb_out;
    CLI::App *cb_cmd = app.add_subcommand("codebook-dump", "Dump codebook angles and partition");
    cb_cmd->add_option("--n", cb_n, "Array elements");
    cb_cmd->add_option("--b", cb_b, "Codebook bits");
    cb_cmd->add_option("--p", cb_p, "Partition for P grid lobes (0 = no partition)");
    cb_cmd->add_option("--out", cb_out, "Output path (default stdout)");

    CLI::App *st_cmd = app.add_subcommand("selftest", "Quick built-in sanity checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (se_cmd->parsed()) {
            return run_sweep_command(se_flags, "spectral_efficiency");
        }
        if (ber_cmd->parsed()) {
            return run_sweep_command(ber_flags, "ber");
        }
        if (cx_cmd->parsed()) {
            return run_complexity(cx_dims, cx_p, cx_q, cx_b);
        }
        if (cd_cmd->parsed()) {
            return run_channel_dump(cd_seed, cd_nt, cd_nr, cd_p, cd_q, cd_out);
        }
        if (cb_cmd->parsed()) {
            return run_codebook_dump(cb_n, cb_b, cb_p, cb_out);
        }
        if (st_cmd->parsed()) {
            return run_selftest();
        }
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const ContractViolation &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception &e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

} // namespace beamsim
