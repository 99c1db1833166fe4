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
// b-bit quantized beamsteering codebook: 2^b steering vectors at the angle
// grid phi_i = 2*pi*(i-1)/2^b, partitioned into per-lobe feasible sets by
// half-open circular interval membership. The sin(.) in the array response
// makes phi and pi-phi produce identical columns; duplicates are kept (the
// generating angles are what the partition works on) and surfaced through a
// diagnostics count.

#ifndef BEAMSIM_CODEBOOK_HPP
#define BEAMSIM_CODEBOOK_HPP

#include <armadillo>
#include <map>
#include <vector>

#include "beamsim/channel.hpp"
#include "beamsim/linalg.hpp"

namespace beamsim {

struct QuantizedCodebook {
    arma::uword bits = 0;
    UlaGeometry geom;
    CMatrix vectors;            // N x 2^b, column i from angle phi_i
    std::vector<double> angles; // phi_i = 2*pi*(i-1)/2^b
    // lobe index (1-based) -> sorted column indices whose phi_i fall inside
    // the lobe interval; columns in no lobe stay unassigned.
    std::map<arma::uword, std::vector<arma::uword>> lobe_partition;
};

// Builds the 2^b-column codebook; requires 1 <= bits <= 16.
QuantizedCodebook build_codebook(const UlaGeometry &geom, arma::uword bits);

// Assigns codebook columns to lobes by half-open circular membership of the
// generating angles; stores the result in cb.lobe_partition and returns it.
// Lobe intervals must be pairwise disjoint (mod 2*pi), else ConfigError.
std::map<arma::uword, std::vector<arma::uword>>
partition_by_lobes(QuantizedCodebook &cb, const std::vector<SpatialLobeSpec> &lobes);

// Number of columns that repeat the sin of an earlier column (grid aliasing
// diagnostics; identical columns are permitted, never silently removed).
arma::uword duplicate_column_count(const QuantizedCodebook &cb);

struct CoverageReport {
    double beam_width_bound_deg = 0.0;         // half-power bound 102/N degrees
    double min_mean_gap_deg = 0.0;             // smallest inter-lobe mean-angle gap
    std::vector<double> per_lobe_required_deg; // Q_i * 102/N per lobe
    bool non_overlap_ok = false;               // gap > Q_i * 102/N for all lobes
};

// Reports the half-power beam-width bound, the inter-lobe mean gap, and
// whether the non-overlap condition (gap exceeds every lobe's Q_i-beam
// footprint) holds.
CoverageReport beam_coverage_check(const std::vector<SpatialLobeSpec> &lobes,
                                   const UlaGeometry &geom, arma::uword q);

} // namespace beamsim

#endif // BEAMSIM_CODEBOOK_HPP
