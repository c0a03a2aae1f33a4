// SPDX-License-Identifier: Apache-2.0
//
// hfmc - hyperbolic frequency multicarrier simulation library
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

#pragma once

#include "hfmc/param_design.hpp"

namespace hfmc::test {

// Reference underwater setup: 50 kHz carrier, 5 kHz band, 256 subcarriers.
inline SystemConfig reference_system() { return SystemConfig{}; }

inline SystemConfig desk_system() {
    SystemConfig c;
    c.min_subcarriers = 64;
    return c;
}

inline const HfmcParams& reference_design() {
    static const HfmcParams p = select_parameters(reference_system());
    return p;
}

inline const HfmcParams& desk_design() {
    static const HfmcParams p = select_parameters(desk_system());
    return p;
}

// Rectangle-rule energy of f over [0, duration) at rate.
template <class F>
double energy(F f, double duration, double rate) {
    const auto n = static_cast<long>(std::llround(duration * rate));
    double acc = 0.0;
    for (long k = 0; k < n; ++k) acc += std::norm(f(static_cast<double>(k) / rate));
    return acc / rate;
}

} // namespace hfmc::test
