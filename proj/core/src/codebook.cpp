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

#include "beamsim/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "beamsim/errors.hpp"

namespace beamsim {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
} // namespace

QuantizedCodebook build_codebook(const UlaGeometry &geom, arma::uword bits) {
    geom.validate();
    if (bits < 1 || bits > 16) {
        throw ContractViolation("build_codebook: bits must be in [1, 16]");
    }
    QuantizedCodebook cb;
    cb.bits = bits;
    cb.geom = geom;
    const arma::uword count = arma::uword(1) << bits;
    cb.vectors.set_size(geom.num_elements, count);
    cb.angles.resize(count);
    for (arma::uword i = 0; i < count; ++i) {
        cb.angles[i] = kTwoPi * static_cast<double>(i) / static_cast<double>(count);
        cb.vectors.col(i) = array_response(geom, cb.angles[i]);
    }
    return cb;
}

std::map<arma::uword, std::vector<arma::uword>>
partition_by_lobes(QuantizedCodebook &cb, const std::vector<SpatialLobeSpec> &lobes) {
    // Lemma-2-style precondition: the half-open intervals must be pairwise
    // disjoint, or "feasible set" stops being well defined.
    for (size_t i = 0; i < lobes.size(); ++i) {
        for (size_t j = i + 1; j < lobes.size(); ++j) {
            const double gap = std::abs(circular_delta(lobes[i].mean_angle, lobes[j].mean_angle));
            if (gap < (lobes[i].angular_spread + lobes[j].angular_spread) / 2.0) {
                throw ConfigError("partition_by_lobes: lobe intervals overlap");
            }
        }
    }
    std::map<arma::uword, std::vector<arma::uword>> partition;
    for (const auto &lobe : lobes) {
        partition[lobe.index] = {};
    }
    for (arma::uword col = 0; col < cb.angles.size(); ++col) {
        for (const auto &lobe : lobes) {
            if (in_lobe_interval(cb.angles[col], lobe.mean_angle, lobe.angular_spread)) {
                partition[lobe.index].push_back(col);
                break; // disjoint intervals: at most one owner
            }
        }
    }
    cb.lobe_partition = partition;
    return partition;
}

arma::uword duplicate_column_count(const QuantizedCodebook &cb) {
    // Columns are equal iff their generating sines are equal (the response
    // depends on the angle only through sin). Count every column whose sin
    // already appeared.
    std::set<long long> seen;
    arma::uword duplicates = 0;
    for (const double angle : cb.angles) {
        // Quantize sin to 1e-12 so exact aliases (sin phi = sin(pi - phi))
        // collapse while distinct grid points stay distinct.
        const long long key = std::llround(std::sin(angle) * 1e12);
        if (!seen.insert(key).second) {
            ++duplicates;
        }
    }
    return duplicates;
}

CoverageReport beam_coverage_check(const std::vector<SpatialLobeSpec> &lobes,
                                   const UlaGeometry &geom, arma::uword q) {
    geom.validate();
    CoverageReport report;
    report.beam_width_bound_deg = 102.0 / static_cast<double>(geom.num_elements);

    double min_gap = 360.0;
    if (lobes.size() < 2) {
        min_gap = 360.0; // single lobe: no neighbor to overlap with
    } else {
        for (size_t i = 0; i < lobes.size(); ++i) {
            for (size_t j = i + 1; j < lobes.size(); ++j) {
                const double gap_rad =
                    std::abs(circular_delta(lobes[i].mean_angle, lobes[j].mean_angle));
                min_gap = std::min(min_gap, gap_rad * 180.0 / std::numbers::pi);
            }
        }
    }
    report.min_mean_gap_deg = min_gap;

    report.non_overlap_ok = true;
    for (const auto &lobe : lobes) {
        const arma::uword q_i = q > 0 ? q : lobe.num_subpaths;
        const double required = static_cast<double>(q_i) * report.beam_width_bound_deg;
        report.per_lobe_required_deg.push_back(required);
        if (!(min_gap > required)) {
            report.non_overlap_ok = false;
        }
    }
    return report;
}

} // namespace beamsim
