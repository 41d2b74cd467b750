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

#include <cmath>

#include "doctest.h"
#include "wcrm/quadrature.hpp"

using namespace wcrm;
using doctest::Approx;

TEST_CASE("finite interval") {
  const auto r = integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0);
  CHECK(r.finite);
  CHECK(r.value == Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK(integrate([](double x) { return x; }, 2.0, 2.0).value == 0.0);
}

TEST_CASE("exponential tail") {
  const auto r = integrate_to_infinity([](double x) { return x * std::exp(-x); }, 0.0, 1.0);
  CHECK(r.finite);
  CHECK(r.value == Approx(1.0).epsilon(1e-11));
  // Narrow mass far from the scale hint.
  const auto s = integrate_to_infinity([](double x) { return 50.0 * std::exp(-50.0 * (x - 3.0)); }, 3.0, 10.0);
  CHECK(s.value == Approx(1.0).epsilon(1e-9));
}

TEST_CASE("power-law tails close analytically") {
  // ∫_1^∞ x^{-1.5} dx = 2
  const auto r = integrate_to_infinity([](double x) { return std::pow(x, -1.5); }, 1.0, 0.2);
  CHECK(r.finite);
  CHECK(r.value == Approx(2.0).epsilon(1e-7));
  // ∫_1^∞ x^{-1.1} dx = 10
  const auto s = integrate_to_infinity([](double x) { return std::pow(x, -1.1); }, 1.0, 1.0);
  CHECK(s.finite);
  CHECK(s.value == Approx(10.0).epsilon(1e-6));
}

TEST_CASE("divergent tails are flagged") {
  CHECK_FALSE(integrate_to_infinity([](double x) { return 1.0 / x; }, 1.0, 1.0).finite);
  CHECK_FALSE(integrate_to_infinity([](double x) { return std::pow(x, -0.5); }, 1.0, 1.0).finite);
  CHECK_FALSE(integrate_to_infinity([](double) { return 1.0; }, 0.0, 1.0).finite);
}
