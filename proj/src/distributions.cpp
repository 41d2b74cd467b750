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

#include "wcrm/distributions.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/erf.hpp>

#include "wcrm/errors.hpp"

namespace wcrm {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

void require(bool ok, const DistributionSpec& spec, const char* what) {
  if (!ok) throw DomainError(std::string(family_name(spec.family())) + ": " + what);
}

// log erfc(z) for z >= 0 without underflow.
double log_erfc(double z) {
  const double direct = std::erfc(z);
  if (direct > 1e-280) return std::log(direct);
  // Asymptotic series; z > 25 here so four terms are far below double
  // precision.
  const double z2 = z * z;
  const double inv = 1.0 / (2.0 * z2);
  const double series = 1.0 - inv + 3.0 * inv * inv - 15.0 * inv * inv * inv;
  return -z2 - std::log(z * std::sqrt(std::numbers::pi)) + std::log(series);
}

// Cumulative hazard of the Makeham law.
double makeham_cumulative_hazard(double a, double b, double c, double x) {
  return a * x + (b / c) * std::expm1(c * x);
}

double makeham_quantile(double a, double b, double c, double u) {
  const double target = -std::log1p(-u);
  // F(x) - u written through the survival to keep precision near u -> 1.
  auto excess = [&](double x) { return -std::expm1(-makeham_cumulative_hazard(a, b, c, x)) - u; };

  double lo = 0.0;
  double hi = 1.0;
  int expansions = 0;
  while (makeham_cumulative_hazard(a, b, c, hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (++expansions > 1100) {
      throw NumericError("makeham quantile: could not bracket u=" + format_double(u));
    }
  }

  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double g = excess(x);
    if (std::abs(g) <= 1e-12 * std::min(1.0, 1.0 - u + 1e-300) || hi - lo <= 4 * std::numeric_limits<double>::epsilon() * hi) {
      return x;
    }
    if (g > 0) {
      hi = x;
    } else {
      lo = x;
    }
    // Newton step on the cumulative hazard, which is convex and smooth.
    const double h = makeham_cumulative_hazard(a, b, c, x) - target;
    const double dh = a + b * std::exp(c * x);
    double next = x - h / dh;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  throw NumericError("makeham quantile: no convergence for u=" + format_double(u) + " in bracket [" +
                     format_double(lo) + ", " + format_double(hi) + "]");
}

}  // namespace

std::string_view family_name(Family family) {
  switch (family) {
    case Family::Uniform: return "uniform";
    case Family::Exponential: return "exponential";
    case Family::Pareto: return "pareto";
    case Family::Power: return "power";
    case Family::Rayleigh: return "rayleigh";
    case Family::LFR: return "lfr";
    case Family::Makeham: return "makeham";
    case Family::HalfNormal: return "halfnormal";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (lower == "half-normal" || lower == "half_normal") lower = "halfnormal";
  for (Family f : {Family::Uniform, Family::Exponential, Family::Pareto, Family::Power, Family::Rayleigh,
                   Family::LFR, Family::Makeham, Family::HalfNormal}) {
    if (family_name(f) == lower) return f;
  }
  throw DomainError("unknown distribution family '" + std::string(name) + "'");
}

std::vector<std::string> family_parameter_names(Family family) {
  switch (family) {
    case Family::Uniform: return {"a"};
    case Family::Exponential: return {"lambda"};
    case Family::Pareto: return {"k", "a"};
    case Family::Power: return {"c"};
    case Family::Rayleigh: return {"sigma"};
    case Family::LFR: return {"a", "b"};
    case Family::Makeham: return {"a", "b", "c"};
    case Family::HalfNormal: return {"sigma"};
  }
  return {};
}

DistributionSpec::DistributionSpec(Family family, std::vector<double> params)
    : family_(family), params_(std::move(params)) {
  const auto names = family_parameter_names(family_);
  require(params_.size() == names.size(), *this,
          ("expects " + std::to_string(names.size()) + " parameter(s)").c_str());
  for (double p : params_) require(std::isfinite(p), *this, "parameters must be finite");
  const auto& p = params_;
  switch (family_) {
    case Family::Uniform: require(p[0] > 0, *this, "requires a > 0"); break;
    case Family::Exponential: require(p[0] > 0, *this, "requires lambda > 0"); break;
    case Family::Pareto: require(p[0] > 0 && p[1] > 0, *this, "requires k > 0 and a > 0"); break;
    case Family::Power: require(p[0] > 0, *this, "requires c > 0"); break;
    case Family::Rayleigh: require(p[0] > 0, *this, "requires sigma > 0"); break;
    case Family::LFR:
      require(p[0] >= 0 && p[1] >= 0 && p[0] + p[1] > 0, *this, "requires a >= 0, b >= 0, a + b > 0");
      break;
    case Family::Makeham:
      require(p[0] > 0 && p[1] > 0 && p[2] > 0, *this, "requires a > 0, b > 0, c > 0");
      break;
    case Family::HalfNormal: require(p[0] > 0, *this, "requires sigma > 0"); break;
  }
}

double DistributionSpec::support_lower() const {
  return family_ == Family::Pareto ? params_[0] : 0.0;
}

double DistributionSpec::support_upper() const {
  switch (family_) {
    case Family::Uniform: return params_[0];
    case Family::Power: return 1.0;
    default: return kInf;
  }
}

double DistributionSpec::log_survival(double x) const {
  if (std::isnan(x)) throw DomainError("survival: x is NaN");
  if (x <= support_lower()) return 0.0;
  if (x >= support_upper()) return -kInf;
  const auto& p = params_;
  switch (family_) {
    case Family::Uniform: return std::log1p(-x / p[0]);
    case Family::Exponential: return -p[0] * x;
    case Family::Pareto: return p[1] * std::log(p[0] / x);
    case Family::Power: return std::log1p(-std::pow(x, p[0]));
    case Family::Rayleigh: return -x * x / (2.0 * p[0] * p[0]);
    case Family::LFR: return -p[0] * x - 0.5 * p[1] * x * x;
    case Family::Makeham: return -makeham_cumulative_hazard(p[0], p[1], p[2], x);
    case Family::HalfNormal: return log_erfc(x / (p[0] * std::numbers::sqrt2));
  }
  return 0.0;
}

double DistributionSpec::survival(double x) const {
  if (std::isnan(x)) throw DomainError("survival: x is NaN");
  if (x <= support_lower()) return 1.0;
  if (x >= support_upper()) return 0.0;
  const auto& p = params_;
  switch (family_) {
    case Family::Uniform: return 1.0 - x / p[0];
    case Family::Power: return 1.0 - std::pow(x, p[0]);
    case Family::Pareto: return std::pow(p[0] / x, p[1]);
    case Family::HalfNormal: return std::erfc(x / (p[0] * std::numbers::sqrt2));
    default: return std::exp(log_survival(x));
  }
}

double DistributionSpec::cdf(double x) const {
  if (family_ == Family::HalfNormal && x > 0) return std::erf(x / (params_[0] * std::numbers::sqrt2));
  if (family_ == Family::Power && x > 0 && x < 1) return std::pow(x, params_[0]);
  if (family_ == Family::Uniform && x > 0 && x < params_[0]) return x / params_[0];
  const double ls = log_survival(x);
  return -std::expm1(ls);
}

double DistributionSpec::density(double x) const {
  if (std::isnan(x)) throw DomainError("density: x is NaN");
  const auto& p = params_;
  switch (family_) {
    case Family::Uniform: return (x >= 0 && x < p[0]) ? 1.0 / p[0] : 0.0;
    case Family::Exponential: return x >= 0 ? p[0] * std::exp(-p[0] * x) : 0.0;
    case Family::Pareto: return x >= p[0] ? (p[1] / x) * std::pow(p[0] / x, p[1]) : 0.0;
    case Family::Power: return (x >= 0 && x < 1) ? p[0] * std::pow(x, p[0] - 1.0) : 0.0;
    case Family::Rayleigh:
      return x >= 0 ? (x / (p[0] * p[0])) * std::exp(-x * x / (2.0 * p[0] * p[0])) : 0.0;
    case Family::LFR: return x >= 0 ? (p[0] + p[1] * x) * survival(x) : 0.0;
    case Family::Makeham: return x >= 0 ? (p[0] + p[1] * std::exp(p[2] * x)) * survival(x) : 0.0;
    case Family::HalfNormal:
      return x >= 0 ? std::sqrt(2.0 / std::numbers::pi) / p[0] * std::exp(-x * x / (2.0 * p[0] * p[0])) : 0.0;
  }
  return 0.0;
}

double DistributionSpec::hazard(double x) const {
  if (survival(x) == 0.0 && log_survival(x) == -kInf) {
    throw DomainError("hazard: survival is zero at x=" + format_double(x));
  }
  const auto& p = params_;
  if (x < 0) return 0.0;
  switch (family_) {
    case Family::Uniform: return 1.0 / (p[0] - x);
    case Family::Exponential: return p[0];
    case Family::Pareto: return x >= p[0] ? p[1] / x : 0.0;
    case Family::Power: return p[0] * std::pow(x, p[0] - 1.0) / (1.0 - std::pow(x, p[0]));
    case Family::Rayleigh: return x / (p[0] * p[0]);
    case Family::LFR: return p[0] + p[1] * x;
    case Family::Makeham: return p[0] + p[1] * std::exp(p[2] * x);
    case Family::HalfNormal: {
      const double log_f = std::log(std::sqrt(2.0 / std::numbers::pi) / p[0]) - x * x / (2.0 * p[0] * p[0]);
      return std::exp(log_f - log_survival(x));
    }
  }
  return 0.0;
}

double DistributionSpec::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("quantile: u must lie in (0, 1)");
  const auto& p = params_;
  switch (family_) {
    case Family::Uniform: return p[0] * u;
    case Family::Exponential: return -std::log1p(-u) / p[0];
    case Family::Pareto: return p[0] * std::exp(-std::log1p(-u) / p[1]);
    case Family::Power: return std::pow(u, 1.0 / p[0]);
    case Family::Rayleigh: return p[0] * std::sqrt(-2.0 * std::log1p(-u));
    case Family::LFR: {
      const double h = -std::log1p(-u);
      if (p[1] == 0.0) return h / p[0];
      return 2.0 * h / (p[0] + std::sqrt(p[0] * p[0] + 2.0 * p[1] * h));
    }
    case Family::Makeham: return makeham_quantile(p[0], p[1], p[2], u);
    case Family::HalfNormal: return p[0] * std::numbers::sqrt2 * boost::math::erf_inv(u);
  }
  return 0.0;
}

double DistributionSpec::scale() const { return quantile(0.5) - support_lower(); }

std::string DistributionSpec::describe_params() const {
  const auto names = family_parameter_names(family_);
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ';';
    out += names[i] + "=" + format_double(params_[i]);
  }
  return out;
}

std::string DistributionSpec::describe() const {
  std::string out(family_name(family_));
  std::string params = describe_params();
  std::replace(params.begin(), params.end(), ';', ',');
  return out + "(" + params + ")";
}

SampleData::SampleData(std::vector<double> observations) : observations_(std::move(observations)) {
  if (observations_.empty()) throw InsufficientDataError("sample is empty");
  for (std::size_t i = 0; i < observations_.size(); ++i) {
    const double x = observations_[i];
    if (!std::isfinite(x) || x < 0) {
      throw DomainError("observation " + std::to_string(i + 1) + " is negative or not finite");
    }
  }
  sorted_ = observations_;
  std::sort(sorted_.begin(), sorted_.end());
}

SampleData SampleData::scaled(double factor) const {
  if (!(factor > 0) || !std::isfinite(factor)) throw DomainError("scale factor must be positive");
  std::vector<double> out(observations_);
  for (double& x : out) x *= factor;
  return SampleData(std::move(out));
}

void sample_sorted_into(const DistributionSpec& spec, Engine& engine, std::span<double> out) {
  for (double& x : out) x = spec.quantile(uniform_open01(engine));
  std::sort(out.begin(), out.end());
}

SampleData sample(const DistributionSpec& spec, std::size_t n, Engine& engine) {
  if (n == 0) throw InsufficientDataError("sample size must be at least 1");
  std::vector<double> draws(n);
  for (double& x : draws) x = spec.quantile(uniform_open01(engine));
  return SampleData(std::move(draws));
}

double rayleigh_mle(std::span<const double> observations) {
  if (observations.empty()) throw InsufficientDataError("rayleigh_mle: empty sample");
  double sum_sq = 0.0;
  for (double x : observations) sum_sq += x * x;
  if (sum_sq == 0.0) throw DegenerateSampleError("rayleigh_mle: all observations are zero");
  return std::sqrt(sum_sq / (2.0 * static_cast<double>(observations.size())));
}

double rayleigh_mle(const SampleData& sample) { return rayleigh_mle(std::span<const double>(sample.observations())); }

}  // namespace wcrm
