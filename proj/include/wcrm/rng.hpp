// Copyright 2026 The wcrm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace wcrm {

using Engine = std::mt19937_64;

// Builds an engine whose state depends only on the key words. Replications
// keyed by (seed, stream, index) are reproducible regardless of the order or
// thread they run on.
Engine make_engine(std::initializer_list<std::uint64_t> key);

// Uniform draw on the open interval (0, 1) with 53 bits of resolution.
inline double uniform_open01(Engine& engine) {
  return (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
}

// Stable 64-bit key for a double, used to derive stream identifiers.
std::uint64_t key_of(double value);

}  // namespace wcrm
