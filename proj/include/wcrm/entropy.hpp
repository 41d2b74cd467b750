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
#include <limits>
#include <optional>
#include <span>

#include "wcrm/distributions.hpp"

namespace wcrm {

// Order parameter α of the Mathai-Haubold family plus the time t of the
// dynamic (residual-life) measure; t = 0 gives the static measure.
struct EntropyParams {
  double alpha = 0.5;
  double t = 0.0;

  // Throws DomainError unless 0 < alpha < 2, alpha != 1 and t >= 0.
  void validate() const;
};

struct EntropyValue {
  double value = 0.0;
  // False exactly when the defining integral diverges.
  bool finite = true;

  static EntropyValue divergent() { return {std::numeric_limits<double>::infinity(), false}; }
};

using SurvivalFn = std::function<double(double)>;

// Describes a survival function for the numeric routines. `lower` is the
// left end of the support (F̄ = 1 below it); integrals start at
// max(t, lower). `upper` is the right end (F̄ = 0 from there on). `scale`
// shapes the decade sweep of the tail integral.
struct SurvivalModel {
  SurvivalFn survival;
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  double scale = 1.0;

  static SurvivalModel of(const DistributionSpec& spec);
};

// Weighted cumulative residual Mathai-Haubold entropy in closed form,
//   (1/(α-1)) (∫ x F̄(x)^{2-α} dx - 1)
// for Uniform, Exponential, Pareto, Power and Rayleigh. Integrals run over
// the support. Pareto is finite only when a(2-α) > 2. Throws DomainError for
// other families (use wcrmhe_numeric instead).
EntropyValue wcrmhe_analytic(const DistributionSpec& spec, double alpha);

// Dynamic version for the residual life X - t | X > t. Rayleigh does not
// depend on t. Throws DomainError when t lies at or beyond the upper end of
// the support.
EntropyValue dwcrmhe_analytic(const DistributionSpec& spec, const EntropyParams& params);

// Unweighted measure (1/(α-1)) (∫_t (F̄(x)/F̄(t))^{2-α} dx - 1) by quadrature.
EntropyValue crmhe_numeric(const DistributionSpec& spec, const EntropyParams& params);
EntropyValue crmhe_numeric(const SurvivalModel& model, const EntropyParams& params);

// Weighted measure by quadrature, static (t = 0) or dynamic (t > 0).
EntropyValue wcrmhe_numeric(const DistributionSpec& spec, const EntropyParams& params);
EntropyValue wcrmhe_numeric(const SurvivalModel& model, const EntropyParams& params);

// Closed form when the family has one, quadrature otherwise.
EntropyValue dwcrmhe(const DistributionSpec& spec, const EntropyParams& params);

// Plug-in estimate from the empirical survival function (n - i)/n. The
// step integral is evaluated exactly; the last step has F̄_n = 0 and
// contributes nothing. Requires n >= 2.
EntropyValue wcrmhe_empirical(const SampleData& sample, double alpha);

// Weighted mean residual life m*(t) = (1/F̄(t)) ∫_t^∞ x F̄(x) dx. Closed
// form for Exponential and Rayleigh. Throws DomainError where F̄(t) = 0.
EntropyValue wmrl(const DistributionSpec& spec, double t);
EntropyValue wmrl(const SurvivalModel& model, double t);

// Y = aX + b:
//   (a² + ab - 1)/(α - 1) + a² CRM^w_α(X) + ab CRM_α(X)
EntropyValue linear_transform_wcrmhe(const EntropyValue& base, const EntropyValue& base_crm, double a, double b,
                                     double alpha);

// Proportional-hazards model F̄^θ: ((β - 1)/(α - 1)) CRM^w_β(X) with
// β = 2 - θ(2 - α). `base` evaluates CRM^w of X at a given order.
// Throws DomainError when β falls outside (0, 2) or equals 1.
EntropyValue ph_model_wcrmhe(const std::function<EntropyValue(double)>& base, double theta, double alpha);

enum class BoundDirection { Lower, Upper };

struct EntropyBound {
  double value = 0.0;
  // As stated for the inequality: a lower bound for 0 < α < 1 and an upper
  // bound for 1 < α < 2. Note that since F̄^{2-α} <= F̄ exactly when α < 1,
  // the value is in fact a lower bound for every admissible α.
  BoundDirection direction = BoundDirection::Lower;
  bool finite = true;
};

// (m*(0) - 1)/(α - 1).
EntropyBound wcrmhe_bound(const DistributionSpec& spec, double alpha);

enum class Monotonicity { Increasing, Decreasing, Constant, Mixed };

std::string_view monotonicity_name(Monotonicity m);

// Evaluates the dynamic measure on the grid and classifies its shape.
// Constant when max - min <= 1e-9 (1 + |mean|). Throws ConfigError for fewer
// than three grid points.
Monotonicity classify_monotonicity(const DistributionSpec& spec, double alpha, std::span<const double> t_grid);

}  // namespace wcrm
