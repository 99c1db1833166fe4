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

#ifndef BEAMSIM_ERRORS_HPP
#define BEAMSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace beamsim {

// A caller handed us input that violates a documented precondition.
class ContractViolation : public std::invalid_argument {
  public:
    explicit ContractViolation(const std::string &what) : std::invalid_argument(what) {}
};

// A numerical kernel could not complete (non-convergence, singular system).
class NumericalError : public std::runtime_error {
  public:
    explicit NumericalError(const std::string &what) : std::runtime_error(what) {}
};

// A configuration cannot be run (infeasible codebook, empty lobe, bad file).
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string &what) : std::runtime_error(what) {}
};

} // namespace beamsim

#endif // BEAMSIM_ERRORS_HPP
