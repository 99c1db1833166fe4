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
// Counter-derived random streams. Every Monte Carlo trial owns the stream
// stream(master_seed, cell_index, trial_index), so results are bit-identical
// regardless of execution order, worker count, or platform. Implemented on
// 64-bit integer mixing (splitmix64 finalizer) rather than <random>
// distributions, whose outputs are implementation-defined.

#ifndef BEAMSIM_RNG_HPP
#define BEAMSIM_RNG_HPP

#include <complex>
#include <cstdint>

namespace beamsim {

class Rng {
  public:
    // Dedicated stream for one (cell, trial) of a sweep; substream separates
    // independent draw purposes inside a trial (0 = channel, 1 = payload).
    Rng(std::uint64_t master_seed, std::uint64_t cell_index, std::uint64_t trial_index,
        std::uint64_t substream = 0);

    std::uint64_t next_u64();

    // Uniform on [0, 1) — 53-bit resolution.
    double uniform();
    // Uniform on [a, b).
    double uniform(double a, double b);
    // Uniform integer on [0, n); n must be >= 1.
    std::uint64_t uniform_int(std::uint64_t n);

    // Standard normal N(0, 1) via Box-Muller (caches the second deviate).
    double gaussian();
    // Circularly-symmetric complex normal CN(0, 1): (x + jy)/sqrt(2).
    std::complex<double> cgaussian();

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace beamsim

#endif // BEAMSIM_RNG_HPP
