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

#include "beamsim/channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "beamsim/errors.hpp"

namespace beamsim {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_to_2pi(double angle) {
    double a = std::fmod(angle, kTwoPi);
    if (a < 0.0) {
        a += kTwoPi;
    }
    return a;
}
} // namespace

void SystemDims::validate() const {
    if (n_t == 0 || n_r == 0 || n_rf_t == 0 || n_rf_r == 0 || n_s == 0) {
        throw ContractViolation("SystemDims: all counts must be positive");
    }
    if (!(n_s <= n_rf_t && n_rf_t <= n_t)) {
        throw ContractViolation("SystemDims: need n_s <= n_rf_t <= n_t");
    }
    if (!(n_s <= n_rf_r && n_rf_r <= n_r)) {
        throw ContractViolation("SystemDims: need n_s <= n_rf_r <= n_r");
    }
}

void UlaGeometry::validate() const {
    if (num_elements == 0) {
        throw ContractViolation("UlaGeometry: num_elements must be positive");
    }
    if (spacing_over_lambda != 0.5) {
        throw ContractViolation("UlaGeometry: element spacing is fixed at half wavelength");
    }
}

double circular_delta(double angle, double reference) {
    double d = std::fmod(angle - reference, kTwoPi);
    if (d < -std::numbers::pi) {
        d += kTwoPi;
    } else if (d >= std::numbers::pi) {
        d -= kTwoPi;
    }
    return d;
}

bool in_lobe_interval(double angle, double mean, double spread) {
    // Tiny shift of the half-open window so grid points that land exactly on
    // a boundary are not lost to rounding in the circular wrap; the windows
    // still tile the circle disjointly.
    constexpr double kBoundaryTol = 1e-12;
    const double d = circular_delta(angle, mean);
    return d >= -spread / 2.0 - kBoundaryTol && d < spread / 2.0 - kBoundaryTol;
}

CVector array_response(const UlaGeometry &geom, double angle) {
    geom.validate();
    const arma::uword n = geom.num_elements;
    CVector v(n);
    const double s = std::sin(angle);
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    for (arma::uword k = 0; k < n; ++k) {
        const double phase = std::numbers::pi * static_cast<double>(k) * s;
        v(k) = std::complex<double>(std::cos(phase) * norm, std::sin(phase) * norm);
    }
    return v;
}

std::vector<SpatialLobeSpec> default_lobe_layout(arma::uword p,
                                                 const std::vector<arma::uword> &q_per_lobe,
                                                 bool allow_large_p) {
    if (p == 0) {
        throw ContractViolation("default_lobe_layout: p must be positive");
    }
    if (p > 5 && !allow_large_p) {
        throw ContractViolation("default_lobe_layout: p > 5 requires the stress-test override");
    }
    if (q_per_lobe.empty() || (q_per_lobe.size() != 1 && q_per_lobe.size() != p)) {
        throw ContractViolation("default_lobe_layout: q_per_lobe must have size 1 or p");
    }
    std::vector<SpatialLobeSpec> lobes(p);
    for (arma::uword i = 0; i < p; ++i) {
        const arma::uword q = q_per_lobe.size() == 1 ? q_per_lobe[0] : q_per_lobe[i];
        if (q == 0) {
            throw ContractViolation("default_lobe_layout: every lobe needs at least one subpath");
        }
        lobes[i] = SpatialLobeSpec{i + 1, kTwoPi * static_cast<double>(i) / static_cast<double>(p),
                                   std::numbers::pi / static_cast<double>(p), q,
                                   1.0 / static_cast<double>(p)};
    }
    return lobes;
}

void randomize_lobe_means(std::vector<SpatialLobeSpec> &lobes, Rng &rng) {
    for (auto &lobe : lobes) {
        lobe.mean_angle = rng.uniform(0.0, kTwoPi);
    }
}

std::vector<PathComponent> draw_paths(const std::vector<SpatialLobeSpec> &lobes, Rng &rng) {
    std::vector<PathComponent> paths;
    for (const auto &lobe : lobes) {
        for (arma::uword q = 0; q < lobe.num_subpaths; ++q) {
            PathComponent path;
            path.lobe_index = lobe.index;
            path.aoa = wrap_to_2pi(lobe.mean_angle +
                                   rng.uniform(-lobe.angular_spread / 2.0, lobe.angular_spread / 2.0));
            path.aod = wrap_to_2pi(lobe.mean_angle +
                                   rng.uniform(-lobe.angular_spread / 2.0, lobe.angular_spread / 2.0));
            path.gain = rng.cgaussian();
            paths.push_back(path);
        }
    }
    return paths;
}

ChannelRealization assemble_channel(const SystemDims &dims,
                                    const std::vector<SpatialLobeSpec> &lobes,
                                    const std::vector<PathComponent> &paths, bool normalize,
                                    double gain_variance, std::uint64_t seed_echo) {
    if (paths.empty()) {
        throw ContractViolation("assemble_channel: no paths");
    }
    const arma::uword total = paths.size();
    ChannelRealization ch;
    ch.dims = dims;
    ch.lobes = lobes;
    ch.paths = paths;
    ch.seed = seed_echo;

    const UlaGeometry tx_geom{dims.n_t, 0.5};
    const UlaGeometry rx_geom{dims.n_r, 0.5};
    ch.a_t.set_size(dims.n_t, total);
    ch.a_r.set_size(dims.n_r, total);

    const double gain_rescale =
        (normalize && gain_variance != 1.0) ? 1.0 / std::sqrt(gain_variance) : 1.0;
    const double scale =
        std::sqrt(static_cast<double>(dims.n_t) * static_cast<double>(dims.n_r) /
                  static_cast<double>(total));

    CVector alpha(total);
    for (arma::uword l = 0; l < total; ++l) {
        ch.a_t.col(l) = array_response(tx_geom, paths[l].aod);
        ch.a_r.col(l) = array_response(rx_geom, paths[l].aoa);
        alpha(l) = scale * gain_rescale * paths[l].gain;
        if (normalize && gain_variance != 1.0) {
            ch.paths[l].gain *= gain_rescale;
        }
    }
    ch.h = ch.a_r * arma::diagmat(alpha) * ch.a_t.t();
    return ch;
}

CMatrix sub_channel(const ChannelRealization &ch, arma::uword lobe) {
    if (lobe == 0 || lobe > ch.lobes.size()) {
        throw ContractViolation("sub_channel: lobe index out of range");
    }
    const double scale =
        std::sqrt(static_cast<double>(ch.dims.n_t) * static_cast<double>(ch.dims.n_r) /
                  static_cast<double>(ch.paths.size()));
    CMatrix h(ch.dims.n_r, ch.dims.n_t, arma::fill::zeros);
    for (arma::uword l = 0; l < ch.paths.size(); ++l) {
        if (ch.paths[l].lobe_index == lobe) {
            h += scale * ch.paths[l].gain * ch.a_r.col(l) * ch.a_t.col(l).t();
        }
    }
    return h;
}

} // namespace beamsim
