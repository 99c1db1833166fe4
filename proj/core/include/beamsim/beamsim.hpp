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

#ifndef BEAMSIM_BEAMSIM_HPP
#define BEAMSIM_BEAMSIM_HPP

#include "beamsim/channel.hpp"
#include "beamsim/codebook.hpp"
#include "beamsim/errors.hpp"
#include "beamsim/harness.hpp"
#include "beamsim/linalg.hpp"
#include "beamsim/link.hpp"
#include "beamsim/metrics.hpp"
#include "beamsim/precoder.hpp"
#include "beamsim/rng.hpp"

#endif // BEAMSIM_BEAMSIM_HPP
