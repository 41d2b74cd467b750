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

#include "wcrm/gof.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wcrm/errors.hpp"
#include "wcrm/parallel.hpp"
#include "wcrm/quadrature.hpp"
#include "wcrm/rng.hpp"

namespace wcrm {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Stream tags keep the calibration, bootstrap and competitor replications on
// disjoint generator streams.
constexpr std::uint64_t kDeltaNullStream = 0x444e554c4cULL;
constexpr std::uint64_t kBootstrapStream = 0x424f4f54ULL;
constexpr std::uint64_t kCompetitorStream = 0x434f4d50ULL;

void validate_test_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("test statistic requires 0 < alpha < 1 (the i = n term is 0^(1-alpha))");
  }
}

// Per-(n, α) weights of Δ̂ so simulation loops avoid repeated pow calls.
std::vector<double> delta_weights(std::size_t n, double alpha) {
  std::vector<double> w(n);
  const double a2 = (3.0 - alpha) * (3.0 - alpha);
  const double b2 = (2.0 - alpha) * (2.0 - alpha);
  const double nd = static_cast<double>(n);
  for (std::size_t i = 1; i <= n; ++i) {
    const double r = static_cast<double>(n - i) / nd;
    w[i - 1] = r > 0.0 ? a2 * std::pow(r, 2.0 - alpha) - b2 * std::pow(r, 1.0 - alpha) : 0.0;
  }
  return w;
}

double apply_weights(std::span<const double> weights, std::span<const double> sorted) {
  double sum = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) sum += sorted[i] * sorted[i] * weights[i];
  return sum / (2.0 * static_cast<double>(sorted.size()));
}

double mean_square_half(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s / (2.0 * static_cast<double>(x.size()));
}

void require_testable(const SampleData& sample) {
  if (sample.size() < 5) throw InsufficientDataError("goodness-of-fit test needs at least 5 observations");
  if (sample.all_equal()) throw DegenerateSampleError("sample has no spread (all observations equal)");
}

std::vector<double> rayleigh_cdf_values(std::span<const double> sorted, double sigma) {
  std::vector<double> u(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    u[i] = -std::expm1(-sorted[i] * sorted[i] / (2.0 * sigma * sigma));
  }
  return u;
}

std::vector<double> cdf_values(const SampleData& sample, const DistributionSpec& spec) {
  std::vector<double> u;
  u.reserve(sample.size());
  for (double x : sample.sorted()) u.push_back(spec.cdf(x));
  return u;
}

}  // namespace

std::string_view tail_name(Tail tail) {
  switch (tail) {
    case Tail::Upper: return "upper";
    case Tail::Lower: return "lower";
    case Tail::TwoSided: return "two-sided";
  }
  return "unknown";
}

Tail parse_tail(std::string_view name) {
  if (name == "upper") return Tail::Upper;
  if (name == "lower") return Tail::Lower;
  if (name == "two-sided" || name == "two_sided" || name == "both") return Tail::TwoSided;
  throw ConfigError("tail must be one of upper, lower, two-sided (got '" + std::string(name) + "')");
}

std::string_view method_name(CalibrationMethod method) {
  return method == CalibrationMethod::MonteCarloCritical ? "mc" : "bootstrap";
}

void TestConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha: must lie in (0, 1)");
  if (!(alpha_prime > 0.0 && alpha_prime < 1.0)) throw ConfigError("alpha_prime: must lie in (0, 1)");
  if (mc_reps < 100) throw ConfigError("mc_reps: must be at least 100");
  if (bootstrap_reps < 100) throw ConfigError("bootstrap_reps: must be at least 100");
}

double delta_hat_sorted(std::span<const double> sorted, double alpha) {
  validate_test_alpha(alpha);
  if (sorted.empty()) throw InsufficientDataError("delta_hat: empty sample");
  const auto w = delta_weights(sorted.size(), alpha);
  return apply_weights(w, sorted);
}

double delta_hat(const SampleData& sample, double alpha) { return delta_hat_sorted(sample.sorted(), alpha); }

double standardized_delta_hat(std::span<const double> sorted, double alpha) {
  const double s2 = mean_square_half(sorted);
  if (s2 == 0.0) throw DegenerateSampleError("all observations are zero");
  return delta_hat_sorted(sorted, alpha) / s2;
}

EntropyValue delta_population(const DistributionSpec& spec, double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("delta_population: alpha must lie in (0, 2)");
  auto moment = [&](double power) {
    Integrand f = [&](double t) {
      const double dens = spec.density(t);
      if (dens == 0.0) return 0.0;
      return t * t * std::exp(power * spec.log_survival(t)) * dens;
    };
    const double lo = spec.support_lower();
    const double hi = spec.support_upper();
    if (std::isinf(hi)) return integrate_to_infinity(f, lo, spec.scale());
    return integrate(f, lo, hi);
  };
  const QuadratureResult first = moment(2.0 - alpha);
  const QuadratureResult second = moment(1.0 - alpha);
  if (!first.finite || !second.finite) return EntropyValue::divergent();
  const double a2 = (3.0 - alpha) * (3.0 - alpha);
  const double b2 = (2.0 - alpha) * (2.0 - alpha);
  return {0.5 * a2 * first.value - 0.5 * b2 * second.value, true};
}

NullDistribution::NullDistribution(std::vector<double> draws) : sorted_(std::move(draws)) {
  if (sorted_.empty()) throw ConfigError("null distribution needs at least one draw");
  std::sort(sorted_.begin(), sorted_.end());
}

double NullDistribution::upper_quantile(double level) const {
  const double reps = static_cast<double>(sorted_.size());
  auto k = static_cast<std::size_t>(std::ceil((1.0 - level) * reps - 1e-9));
  k = std::clamp<std::size_t>(k, 1, sorted_.size());
  return sorted_[k - 1];
}

double NullDistribution::lower_quantile(double level) const {
  const double reps = static_cast<double>(sorted_.size());
  auto k = static_cast<std::size_t>(std::floor(level * reps + 1e-9)) + 1;
  k = std::clamp<std::size_t>(k, 1, sorted_.size());
  return sorted_[k - 1];
}

CriticalRegion NullDistribution::region(double alpha_prime, Tail tail) const {
  switch (tail) {
    case Tail::Upper: return {-kInf, upper_quantile(alpha_prime)};
    case Tail::Lower: return {lower_quantile(alpha_prime), kInf};
    case Tail::TwoSided: return {lower_quantile(alpha_prime / 2.0), upper_quantile(alpha_prime / 2.0)};
  }
  return {};
}

NullDistribution simulate_delta_null(std::size_t n, double alpha, std::size_t reps, std::uint64_t seed,
                                     unsigned workers) {
  validate_test_alpha(alpha);
  if (n < 2) throw InsufficientDataError("null simulation needs n >= 2");
  const auto weights = delta_weights(n, alpha);
  const auto unit = DistributionSpec::rayleigh(1.0);
  std::vector<double> draws(reps);
  parallel_for(reps, workers, [&](std::size_t r) {
    Engine engine = make_engine({seed, kDeltaNullStream, n, key_of(alpha), r});
    std::vector<double> x(n);
    sample_sorted_into(unit, engine, x);
    draws[r] = apply_weights(weights, x) / mean_square_half(x);
  });
  return NullDistribution(std::move(draws));
}

double mc_critical_value(std::size_t n, const TestConfig& config) {
  config.validate();
  return simulate_delta_null(n, config.alpha, config.mc_reps, config.seed, config.workers)
      .upper_quantile(config.alpha_prime);
}

TestResult test_rayleigh_mc(const SampleData& sample, const TestConfig& config, const NullDistribution& null) {
  config.validate();
  require_testable(sample);
  TestResult result;
  result.method = CalibrationMethod::MonteCarloCritical;
  result.tail = config.tail;
  result.seed = config.seed;
  result.reps = null.reps();
  result.sigma_hat = rayleigh_mle(sample);
  result.statistic = standardized_delta_hat(sample.sorted(), config.alpha);
  const CriticalRegion region = null.region(config.alpha_prime, config.tail);
  if (std::isfinite(region.upper)) result.critical_value = region.upper;
  if (std::isfinite(region.lower)) result.critical_lower = region.lower;
  result.reject = region.rejects(result.statistic);
  return result;
}

TestResult test_rayleigh_mc(const SampleData& sample, const TestConfig& config) {
  config.validate();
  require_testable(sample);
  const auto null = simulate_delta_null(sample.size(), config.alpha, config.mc_reps, config.seed, config.workers);
  return test_rayleigh_mc(sample, config, null);
}

TestResult bootstrap_pvalue(const SampleData& sample, const TestConfig& config) {
  config.validate();
  require_testable(sample);
  const std::size_t n = sample.size();
  const std::size_t reps = config.bootstrap_reps;
  const double sigma = rayleigh_mle(sample);
  const auto weights = delta_weights(n, config.alpha);
  const double observed = apply_weights(weights, sample.sorted());
  const auto fitted = DistributionSpec::rayleigh(sigma);

  std::vector<double> boot(reps);
  parallel_for(reps, config.workers, [&](std::size_t r) {
    Engine engine = make_engine({config.seed, kBootstrapStream, r});
    std::vector<double> x(n);
    sample_sorted_into(fitted, engine, x);
    boot[r] = apply_weights(weights, x);
  });

  std::size_t above = 0;
  std::size_t below = 0;
  for (double b : boot) {
    above += b > observed;
    below += b < observed;
  }
  const double rd = static_cast<double>(reps);
  double p = 0.0;
  switch (config.tail) {
    case Tail::Upper: p = static_cast<double>(above) / rd; break;
    case Tail::Lower: p = static_cast<double>(below) / rd; break;
    case Tail::TwoSided: p = std::min(1.0, 2.0 * std::min(above, below) / rd); break;
  }

  TestResult result;
  result.method = CalibrationMethod::BootstrapPValue;
  result.tail = config.tail;
  result.seed = config.seed;
  result.reps = reps;
  result.sigma_hat = sigma;
  result.statistic = observed;
  result.p_value = p;
  result.reject = p < config.alpha_prime;
  return result;
}

double ks_from_cdf(std::span<const double> u) {
  const double n = static_cast<double>(u.size());
  double d = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double k = static_cast<double>(i + 1);
    d = std::max({d, k / n - u[i], u[i] - (k - 1.0) / n});
  }
  return d;
}

double cvm_from_cdf(std::span<const double> u) {
  const double n = static_cast<double>(u.size());
  double w = 1.0 / (12.0 * n);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u[i] - (2.0 * static_cast<double>(i + 1) - 1.0) / (2.0 * n);
    w += d * d;
  }
  return w;
}

AndersonDarling ad_from_cdf(std::span<const double> u) {
  constexpr double kFloor = 1e-12;
  const std::size_t n = u.size();
  AndersonDarling out;
  auto clamp = [&](double v) {
    if (v < kFloor || v > 1.0 - kFloor) out.clamped = true;
    return std::clamp(v, kFloor, 1.0 - kFloor);
  };
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = clamp(u[i]);
    const double hi = clamp(u[n - 1 - i]);
    sum += (2.0 * static_cast<double>(i + 1) - 1.0) * (std::log(lo) + std::log1p(-hi));
  }
  out.value = -static_cast<double>(n) - sum / static_cast<double>(n);
  return out;
}

double fs_from_cdf(std::span<const double> u) {
  const double n = static_cast<double>(u.size());
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double k = static_cast<double>(i + 1);
    s += std::max(std::abs(u[i] - k / n), std::abs(u[i] - (k - 1.0) / n));
  }
  return s;
}

double ks_stat(const SampleData& sample, const DistributionSpec& spec) { return ks_from_cdf(cdf_values(sample, spec)); }
double cvm_stat(const SampleData& sample, const DistributionSpec& spec) { return cvm_from_cdf(cdf_values(sample, spec)); }
AndersonDarling ad_stat(const SampleData& sample, const DistributionSpec& spec) {
  return ad_from_cdf(cdf_values(sample, spec));
}
double fs_stat(const SampleData& sample, const DistributionSpec& spec) { return fs_from_cdf(cdf_values(sample, spec)); }

std::string_view competitor_name(Competitor which) {
  switch (which) {
    case Competitor::KS: return "KS";
    case Competitor::CvM: return "CvM";
    case Competitor::AD: return "AD";
    case Competitor::FS: return "FS";
  }
  return "unknown";
}

std::optional<Competitor> parse_competitor(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
  if (upper == "KS") return Competitor::KS;
  if (upper == "CVM") return Competitor::CvM;
  if (upper == "AD") return Competitor::AD;
  if (upper == "FS") return Competitor::FS;
  return std::nullopt;
}

double competitor_statistic(Competitor which, std::span<const double> sorted) {
  const double sigma = rayleigh_mle(sorted);
  const auto u = rayleigh_cdf_values(sorted, sigma);
  switch (which) {
    case Competitor::KS: return ks_from_cdf(u);
    case Competitor::CvM: return cvm_from_cdf(u);
    case Competitor::AD: return ad_from_cdf(u).value;
    case Competitor::FS: return fs_from_cdf(u);
  }
  return 0.0;
}

NullDistribution simulate_competitor_null(Competitor which, std::size_t n, std::size_t reps, std::uint64_t seed,
                                          unsigned workers) {
  if (n < 2) throw InsufficientDataError("null simulation needs n >= 2");
  const auto unit = DistributionSpec::rayleigh(1.0);
  std::vector<double> draws(reps);
  parallel_for(reps, workers, [&](std::size_t r) {
    Engine engine = make_engine({seed, kCompetitorStream, static_cast<std::uint64_t>(which), n, r});
    std::vector<double> x(n);
    sample_sorted_into(unit, engine, x);
    draws[r] = competitor_statistic(which, x);
  });
  return NullDistribution(std::move(draws));
}

TestResult calibrated_competitor_test(const SampleData& sample, Competitor which, const TestConfig& config,
                                      const NullDistribution& null) {
  config.validate();
  require_testable(sample);
  TestResult result;
  result.method = CalibrationMethod::MonteCarloCritical;
  result.tail = Tail::Upper;
  result.seed = config.seed;
  result.reps = null.reps();
  result.sigma_hat = rayleigh_mle(sample);
  result.statistic = competitor_statistic(which, sample.sorted());
  result.critical_value = null.upper_quantile(config.alpha_prime);
  result.reject = result.statistic > *result.critical_value;
  return result;
}

TestResult calibrated_competitor_test(const SampleData& sample, Competitor which, const TestConfig& config) {
  config.validate();
  require_testable(sample);
  const auto null = simulate_competitor_null(which, sample.size(), config.mc_reps, config.seed, config.workers);
  return calibrated_competitor_test(sample, which, config, null);
}

}  // namespace wcrm
