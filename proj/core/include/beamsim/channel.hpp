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
// Spatial-lobes mmWave channel generator. The angular domain is divided
// into P lobes; each lobe carries Q_i subpaths whose AOA/AOD are drawn
// independently and uniformly inside the lobe interval, with unit-variance
// circularly-symmetric complex gains (Rayleigh amplitudes). The assembled
// channel factorizes as H = A_r * diag(alpha) * A_t^H with the global scale
// sqrt(N_t*N_r/L) folded into alpha, so E||H||_F^2 = N_t*N_r exactly.

#ifndef BEAMSIM_CHANNEL_HPP
#define BEAMSIM_CHANNEL_HPP

#include <armadillo>
#include <complex>
#include <cstdint>
#include <vector>

#include "beamsim/linalg.hpp"
#include "beamsim/rng.hpp"

namespace beamsim {

struct SystemDims {
    arma::uword n_t = 0;    // transmit antennas
    arma::uword n_r = 0;    // receive antennas
    arma::uword n_rf_t = 0; // transmit RF chains
    arma::uword n_rf_r = 0; // receive RF chains
    arma::uword n_s = 0;    // data streams

    // Enforces n_s <= n_rf_t <= n_t and n_s <= n_rf_r <= n_r.
    void validate() const;
};

struct UlaGeometry {
    arma::uword num_elements = 0;
    double spacing_over_lambda = 0.5; // must stay exactly 0.5 (half wavelength)

    void validate() const;
};

struct SpatialLobeSpec {
    arma::uword index = 0;      // 1..P
    double mean_angle = 0.0;    // radians in [0, 2*pi)
    double angular_spread = 0.0;
    arma::uword num_subpaths = 1; // Q_i
    double power_share = 1.0;     // shares sum to 1 across lobes
};

struct PathComponent {
    arma::uword lobe_index = 0; // 1..P
    double aoa = 0.0;
    double aod = 0.0;
    std::complex<double> gain;
};

struct ChannelRealization {
    SystemDims dims;
    std::vector<SpatialLobeSpec> lobes;
    std::vector<PathComponent> paths; // grouped by lobe, lobe 1 first
    CMatrix h;   // N_r x N_t
    CMatrix a_t; // N_t x L, unit-norm transmit steering columns in path order
    CMatrix a_r; // N_r x L, unit-norm receive steering columns in path order
    std::uint64_t seed = 0; // echo of the stream that drew the paths
};

// Signed circular difference angle - reference, wrapped to [-pi, pi).
double circular_delta(double angle, double reference);

// True iff angle lies in the half-open circular interval
// [mean - spread/2, mean + spread/2).
bool in_lobe_interval(double angle, double mean, double spread);

// Unit-norm ULA response: element n (0-based) = exp(j*pi*n*sin(angle))/sqrt(N).
CVector array_response(const UlaGeometry &geom, double angle);

// Lobe i gets mean 2*pi*(i-1)/p, spread pi/p, power share 1/p.
// q_per_lobe supplies Q_i (a single repeated value is allowed via size 1).
// p is capped at 5 unless allow_large_p is set (stress-test override).
std::vector<SpatialLobeSpec> default_lobe_layout(arma::uword p,
                                                 const std::vector<arma::uword> &q_per_lobe,
                                                 bool allow_large_p = false);

// Replaces the grid means with independent uniform draws on [0, 2*pi),
// keeping spreads and subpath counts. Intervals may then overlap; callers
// that require disjoint lobes must check beam_coverage_check first.
void randomize_lobe_means(std::vector<SpatialLobeSpec> &lobes, Rng &rng);

// Q_i paths per lobe; AOA and AOD independent uniform over the lobe
// interval, gains CN(0, 1).
std::vector<PathComponent> draw_paths(const std::vector<SpatialLobeSpec> &lobes, Rng &rng);

// H = sqrt(N_t*N_r/L) * sum_l gain_l * a_r(aoa_l) * a_t(aod_l)^H, plus the
// A_r diag(alpha) A_t^H factor matrices. With unit-norm steering columns and
// unit-variance gains E||H||_F^2 = N_t*N_r already, so `normalize` only
// rescales when a non-default gain_variance was used to draw the paths.
ChannelRealization assemble_channel(const SystemDims &dims,
                                    const std::vector<SpatialLobeSpec> &lobes,
                                    const std::vector<PathComponent> &paths,
                                    bool normalize = false, double gain_variance = 1.0,
                                    std::uint64_t seed_echo = 0);

// The rank-<=Q_i contribution of one lobe (1-based index), same global scale.
CMatrix sub_channel(const ChannelRealization &ch, arma::uword lobe);

} // namespace beamsim

#endif // BEAMSIM_CHANNEL_HPP
