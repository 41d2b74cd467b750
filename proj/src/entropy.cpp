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

#include "wcrm/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <boost/math/special_functions/beta.hpp>

#include "wcrm/errors.hpp"
#include "wcrm/quadrature.hpp"

namespace wcrm {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0) || alpha == 1.0) {
    throw DomainError("order parameter alpha must satisfy 0 < alpha < 2 and alpha != 1");
  }
}

bool has_closed_form(Family family) {
  switch (family) {
    case Family::Uniform:
    case Family::Exponential:
    case Family::Pareto:
    case Family::Power:
    case Family::Rayleigh: return true;
    default: return false;
  }
}

EntropyValue from_integral(double integral, double alpha) { return {(integral - 1.0) / (alpha - 1.0), true}; }

// ∫_lo^hi x^w ratio(x)^p dx where ratio(x) = F̄(x)/F̄(t).
QuadratureResult residual_integral(const std::function<double(double)>& ratio, double lo, double hi, double scale,
                                   double power, bool weighted) {
  if (lo >= hi) return {};
  Integrand f = [&](double x) {
    const double r = ratio(x);
    if (r <= 0.0) return 0.0;
    const double v = std::pow(r, power);
    return weighted ? x * v : v;
  };
  QuadratureOptions opts;
  if (std::isinf(hi)) return integrate_to_infinity(f, lo, scale, opts);
  return integrate(f, lo, hi, opts);
}

// Quadrature length scale for the residual life at t.
double residual_scale(const DistributionSpec& spec, double t) {
  double s = spec.scale();
  if (t > spec.support_lower()) {
    const double h = spec.hazard(t);
    if (h > 0 && std::isfinite(h)) s = std::min(s, 1.0 / h);
  }
  return s > 0 ? s : 1.0;
}

EntropyValue numeric_measure(const DistributionSpec& spec, const EntropyParams& params, bool weighted) {
  params.validate();
  const double t = params.t;
  const double log_st = spec.log_survival(t);
  if (log_st == -kInf) throw DomainError("survival is zero at t=" + std::to_string(t));
  auto ratio = [&](double x) { return std::exp(spec.log_survival(x) - log_st); };
  const double lo = std::max(t, spec.support_lower());
  const auto q = residual_integral(ratio, lo, spec.support_upper(), residual_scale(spec, t), 2.0 - params.alpha,
                                   weighted);
  if (!q.finite) return EntropyValue::divergent();
  return from_integral(q.value, params.alpha);
}

EntropyValue numeric_measure(const SurvivalModel& model, const EntropyParams& params, bool weighted) {
  params.validate();
  const double st = model.survival(params.t);
  if (!(st > 0.0)) throw DomainError("survival is zero at t=" + std::to_string(params.t));
  auto ratio = [&](double x) { return model.survival(x) / st; };
  const double lo = std::max(params.t, model.lower);
  const auto q = residual_integral(ratio, lo, model.upper, model.scale, 2.0 - params.alpha, weighted);
  if (!q.finite) return EntropyValue::divergent();
  return from_integral(q.value, params.alpha);
}

}  // namespace

void EntropyParams::validate() const {
  validate_alpha(alpha);
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("time t must be finite and non-negative");
}

SurvivalModel SurvivalModel::of(const DistributionSpec& spec) {
  return {[spec](double x) { return spec.survival(x); }, spec.support_lower(), spec.support_upper(), spec.scale()};
}

EntropyValue wcrmhe_analytic(const DistributionSpec& spec, double alpha) {
  validate_alpha(alpha);
  const double m = 2.0 - alpha;
  const auto& p = spec.params();
  switch (spec.family()) {
    case Family::Uniform: return from_integral(p[0] * p[0] / ((3.0 - alpha) * (4.0 - alpha)), alpha);
    case Family::Exponential: return from_integral(1.0 / (p[0] * p[0] * m * m), alpha);
    case Family::Pareto: {
      const double am = p[1] * m;
      if (am <= 2.0) return EntropyValue::divergent();
      return from_integral(p[0] * p[0] / (am - 2.0), alpha);
    }
    case Family::Power: return from_integral(boost::math::beta(2.0 / p[0], 3.0 - alpha) / p[0], alpha);
    case Family::Rayleigh: return from_integral(p[0] * p[0] / m, alpha);
    default:
      throw DomainError("no closed form for " + std::string(family_name(spec.family())) +
                        "; use the numeric evaluation");
  }
}

EntropyValue dwcrmhe_analytic(const DistributionSpec& spec, const EntropyParams& params) {
  params.validate();
  const double alpha = params.alpha;
  const double t = params.t;
  const double m = 2.0 - alpha;
  const auto& p = spec.params();
  if (t >= spec.support_upper()) throw DomainError("t lies outside the support");
  switch (spec.family()) {
    case Family::Uniform: {
      const double r = p[0] - t;
      return from_integral(p[0] * r / (3.0 - alpha) - r * r / (4.0 - alpha), alpha);
    }
    case Family::Exponential: {
      const double lm = p[0] * m;
      return from_integral(t / lm + 1.0 / (lm * lm), alpha);
    }
    case Family::Pareto: {
      const double am = p[1] * m;
      if (am <= 2.0) return EntropyValue::divergent();
      // Before the support starts the residual life is X itself.
      const double start = std::max(t, p[0]);
      return from_integral(start * start / (am - 2.0), alpha);
    }
    case Family::Power: {
      const double c = p[0];
      const double tail = 1.0 - std::pow(t, c);
      return from_integral(boost::math::beta(3.0 - alpha, 2.0 / c, tail) / (c * std::pow(tail, m)), alpha);
    }
    case Family::Rayleigh: return from_integral(p[0] * p[0] / m, alpha);
    default:
      throw DomainError("no closed form for " + std::string(family_name(spec.family())) +
                        "; use the numeric evaluation");
  }
}

EntropyValue crmhe_numeric(const DistributionSpec& spec, const EntropyParams& params) {
  return numeric_measure(spec, params, false);
}

EntropyValue crmhe_numeric(const SurvivalModel& model, const EntropyParams& params) {
  return numeric_measure(model, params, false);
}

EntropyValue wcrmhe_numeric(const DistributionSpec& spec, const EntropyParams& params) {
  return numeric_measure(spec, params, true);
}

EntropyValue wcrmhe_numeric(const SurvivalModel& model, const EntropyParams& params) {
  return numeric_measure(model, params, true);
}

EntropyValue dwcrmhe(const DistributionSpec& spec, const EntropyParams& params) {
  if (has_closed_form(spec.family())) return dwcrmhe_analytic(spec, params);
  return wcrmhe_numeric(spec, params);
}

EntropyValue wcrmhe_empirical(const SampleData& sample, double alpha) {
  validate_alpha(alpha);
  const auto& x = sample.sorted();
  const std::size_t n = x.size();
  if (n < 2) throw InsufficientDataError("empirical entropy needs at least 2 observations");
  const double m = 2.0 - alpha;
  const double nd = static_cast<double>(n);
  double integral = 0.5 * x[0] * x[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double surv = static_cast<double>(n - i) / nd;
    integral += std::pow(surv, m) * 0.5 * (x[i] * x[i] - x[i - 1] * x[i - 1]);
  }
  return from_integral(integral, alpha);
}

EntropyValue wmrl(const DistributionSpec& spec, double t) {
  if (!(t >= 0.0)) throw DomainError("wmrl: t must be non-negative");
  const auto& p = spec.params();
  switch (spec.family()) {
    case Family::Exponential: return {t / p[0] + 1.0 / (p[0] * p[0]), true};
    case Family::Rayleigh: return {p[0] * p[0], true};
    default: break;
  }
  const double log_st = spec.log_survival(t);
  if (log_st == -kInf) throw DomainError("wmrl: survival is zero at t=" + std::to_string(t));
  auto ratio = [&](double x) { return std::exp(spec.log_survival(x) - log_st); };
  const auto q = residual_integral(ratio, std::max(t, spec.support_lower()), spec.support_upper(),
                                   residual_scale(spec, t), 1.0, true);
  if (!q.finite) return EntropyValue::divergent();
  return {q.value, true};
}

EntropyValue wmrl(const SurvivalModel& model, double t) {
  if (!(t >= 0.0)) throw DomainError("wmrl: t must be non-negative");
  const double st = model.survival(t);
  if (!(st > 0.0)) throw DomainError("wmrl: survival is zero at t=" + std::to_string(t));
  auto ratio = [&](double x) { return model.survival(x) / st; };
  const auto q = residual_integral(ratio, std::max(t, model.lower), model.upper, model.scale, 1.0, true);
  if (!q.finite) return EntropyValue::divergent();
  return {q.value, true};
}

EntropyValue linear_transform_wcrmhe(const EntropyValue& base, const EntropyValue& base_crm, double a, double b,
                                     double alpha) {
  validate_alpha(alpha);
  if (!(a > 0.0) || !(b >= 0.0)) throw DomainError("linear transform requires a > 0 and b >= 0");
  if (!base.finite || !base_crm.finite) return EntropyValue::divergent();
  return {(a * a + a * b - 1.0) / (alpha - 1.0) + a * a * base.value + a * b * base_crm.value, true};
}

EntropyValue ph_model_wcrmhe(const std::function<EntropyValue(double)>& base, double theta, double alpha) {
  validate_alpha(alpha);
  if (!(theta > 0.0)) throw DomainError("proportional hazards requires theta > 0");
  const double beta = 2.0 - theta * (2.0 - alpha);
  if (!(beta > 0.0 && beta < 2.0) || beta == 1.0) {
    throw DomainError("induced order beta = " + std::to_string(beta) + " lies outside (0, 2) or equals 1");
  }
  const EntropyValue v = base(beta);
  if (!v.finite) return EntropyValue::divergent();
  return {(beta - 1.0) / (alpha - 1.0) * v.value, true};
}

EntropyBound wcrmhe_bound(const DistributionSpec& spec, double alpha) {
  validate_alpha(alpha);
  const BoundDirection direction = alpha < 1.0 ? BoundDirection::Lower : BoundDirection::Upper;
  const EntropyValue m0 = wmrl(spec, 0.0);
  if (!m0.finite) return {kInf, direction, false};
  return {(m0.value - 1.0) / (alpha - 1.0), direction, true};
}

std::string_view monotonicity_name(Monotonicity m) {
  switch (m) {
    case Monotonicity::Increasing: return "increasing";
    case Monotonicity::Decreasing: return "decreasing";
    case Monotonicity::Constant: return "constant";
    case Monotonicity::Mixed: return "mixed";
  }
  return "unknown";
}

Monotonicity classify_monotonicity(const DistributionSpec& spec, double alpha, std::span<const double> t_grid) {
  if (t_grid.size() < 3) throw ConfigError("monotonicity grid needs at least 3 points");
  std::vector<double> values;
  values.reserve(t_grid.size());
  for (double t : t_grid) {
    const EntropyValue v = dwcrmhe(spec, {alpha, t});
    if (!v.finite) throw DomainError("dynamic measure diverges at t=" + std::to_string(t));
    values.push_back(v.value);
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  if (*hi - *lo <= 1e-9 * (1.0 + std::abs(mean))) return Monotonicity::Constant;

  bool up = true;
  bool down = true;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[i - 1]) up = false;
    if (values[i] > values[i - 1]) down = false;
  }
  if (up) return Monotonicity::Increasing;
  if (down) return Monotonicity::Decreasing;
  return Monotonicity::Mixed;
}

}  // namespace wcrm
