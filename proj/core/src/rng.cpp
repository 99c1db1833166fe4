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

#include "beamsim/rng.hpp"

#include <cmath>
#include <numbers>

namespace beamsim {

namespace {

// splitmix64 finalizer: bijective 64-bit mix with full avalanche.
std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

} // namespace

Rng::Rng(std::uint64_t master_seed, std::uint64_t cell_index, std::uint64_t trial_index,
         std::uint64_t substream) {
    // Chain the coordinates through the finalizer so any single-bit change
    // in any coordinate yields an unrelated stream.
    std::uint64_t s = mix64(master_seed + kGamma);
    s = mix64(s ^ (cell_index + kGamma));
    s = mix64(s ^ (trial_index + kGamma));
    s = mix64(s ^ (substream + kGamma));
    state_ = s;
}

std::uint64_t Rng::next_u64() {
    state_ += kGamma;
    return mix64(state_);
}

double Rng::uniform() {
    // 53-bit mantissa in [0, 1).
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double a, double b) {
    return a + (b - a) * uniform();
}

std::uint64_t Rng::uniform_int(std::uint64_t n) {
    // Multiply-shift bounded draw; bias is < 2^-53 for our small n.
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
}

double Rng::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // Box-Muller on (0, 1] x [0, 1); the +1 keeps u1 strictly positive.
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(th);
    has_spare_ = true;
    return r * std::cos(th);
}

std::complex<double> Rng::cgaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

} // namespace beamsim
