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

#include "wcrm/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace wcrm {
namespace {

constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the nodes kKronrodNodes[1], [3], [5], [7].
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod(const Integrand& f, double a, double b, bool& finite) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[j] * pair;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  if (!std::isfinite(kronrod)) finite = false;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureOptions& opts) {
  QuadratureResult result;
  if (a == b) return result;
  if (std::isinf(b)) return integrate_to_infinity(f, a, 1.0, opts);

  std::priority_queue<Segment> heap;
  bool finite = true;
  Segment first = gauss_kronrod(f, a, b, finite);
  result.evaluations = 15;
  double total = first.value;
  double total_error = first.error;
  heap.push(first);

  while (finite && total_error > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
    if (static_cast<int>(heap.size()) >= opts.max_segments) {
      result.converged = false;
      break;
    }
    Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Segment cannot be split further in double precision.
      result.converged = false;
      break;
    }
    heap.pop();
    Segment left = gauss_kronrod(f, worst.a, mid, finite);
    Segment right = gauss_kronrod(f, mid, worst.b, finite);
    result.evaluations += 30;
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum to shed the drift of the running updates.
  total = 0.0;
  total_error = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    total_error += heap.top().error;
    heap.pop();
  }
  result.value = total;
  result.error = total_error;
  result.finite = finite && std::isfinite(total);
  return result;
}

QuadratureResult integrate_to_infinity(const Integrand& f, double a, double scale, const QuadratureOptions& opts) {
  QuadratureResult result;
  if (!(scale > 0) || !std::isfinite(scale)) scale = 1.0;

  constexpr int kMaxDecades = 40;
  std::vector<double> decade_mass;
  double lo = a;
  double width = scale;
  for (int d = 0; d < kMaxDecades; ++d) {
    const double hi = a + width;
    QuadratureOptions piece_opts = opts;
    piece_opts.abs_tol = std::max(opts.abs_tol * 1e-3, opts.rel_tol * 1e-2 * std::abs(result.value));
    QuadratureResult piece = integrate(f, lo, hi, piece_opts);
    result.evaluations += piece.evaluations;
    result.error += piece.error;
    result.converged = result.converged && piece.converged;
    if (!piece.finite) {
      result.finite = false;
      return result;
    }
    result.value += piece.value;
    decade_mass.push_back(std::abs(piece.value));

    const double mass = std::abs(piece.value);
    if (d >= 1 && mass <= 1e-17 * std::abs(result.value)) return result;
    if (d >= 1 && mass == 0.0 && result.value == 0.0) return result;

    // Power-law tail: successive decade masses shrink by a constant factor
    // r = 10^(1-p). Once two ratios agree, extrapolate or declare divergence.
    if (decade_mass.size() >= 4) {
      const std::size_t k = decade_mass.size();
      const double r1 = decade_mass[k - 2] / decade_mass[k - 3];
      const double r2 = decade_mass[k - 1] / decade_mass[k - 2];
      if (std::abs(r2 - r1) <= 1e-3 * std::max(r1, r2)) {
        if (r2 >= 1.0 - 1e-6) {
          result.finite = false;
          return result;
        }
        // Geometric series of the remaining decades.
        const double tail = piece.value * r2 / (1.0 - r2);
        result.value += tail;
        result.error += std::abs(tail) * std::abs(r2 - r1) / std::max(1e-300, 1.0 - r2);
        if (d >= 8 || std::abs(tail) <= opts.rel_tol * std::abs(result.value)) return result;
        // Otherwise keep sweeping for a better-resolved ratio.
        result.value -= tail;
        result.error -= std::abs(tail) * std::abs(r2 - r1) / std::max(1e-300, 1.0 - r2);
      }
    }
    lo = hi;
    width *= 10.0;
  }
  // Tail still carrying mass after kMaxDecades decades.
  result.finite = false;
  return result;
}

}  // namespace wcrm
