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

#include <functional>

namespace wcrm {

using Integrand = std::function<double(double)>;

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_segments = 4000;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  // False when the integral diverges (tail not decaying) or the integrand
  // produced non-finite values.
  bool finite = true;
  bool converged = true;
  int evaluations = 0;
};

// Adaptive 7/15-point Gauss-Kronrod on a finite interval. Subdivides the
// segment with the largest |K15 - G7| until the total error estimate meets
// max(abs_tol, rel_tol * |I|).
QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureOptions& opts = {});

// Integral over [a, inf). The domain is swept decade by decade,
// [a, a + scale], [a + scale, a + 10 scale], ..., each piece integrated
// adaptively. The sweep stops once a decade contributes nothing at double
// precision. If the tail settles into a power law x^-p it is closed
// analytically when p > 1 and reported as divergent when p <= 1.
QuadratureResult integrate_to_infinity(const Integrand& f, double a, double scale,
                                       const QuadratureOptions& opts = {});

}  // namespace wcrm
