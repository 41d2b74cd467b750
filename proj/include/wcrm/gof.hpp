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

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "wcrm/distributions.hpp"
#include "wcrm/entropy.hpp"

namespace wcrm {

// Which side of the null distribution rejects. The test statistic's
// population value is zero exactly under the Rayleigh law, but its sign
// under alternatives depends on the alternative: heavy right tails (Pareto)
// push it up, increasing-failure-rate laws (exponential, LFR, Makeham,
// half-normal, uniform) push it down.
enum class Tail { Upper, Lower, TwoSided };

std::string_view tail_name(Tail tail);
Tail parse_tail(std::string_view name);

enum class CalibrationMethod { MonteCarloCritical, BootstrapPValue };

std::string_view method_name(CalibrationMethod method);

struct TestConfig {
  double alpha = 0.1;         // entropy order, restricted to (0, 1)
  double alpha_prime = 0.05;  // significance level
  std::size_t mc_reps = 10000;
  std::size_t bootstrap_reps = 10000;
  std::uint64_t seed = 0;
  Tail tail = Tail::Upper;
  unsigned workers = 0;  // 0: one per hardware thread

  // Throws ConfigError on out-of-range fields.
  void validate() const;
};

struct TestResult {
  double statistic = 0.0;
  std::optional<double> critical_value;  // rejects above
  std::optional<double> critical_lower;  // rejects below
  std::optional<double> p_value;
  bool reject = false;
  CalibrationMethod method = CalibrationMethod::MonteCarloCritical;
  Tail tail = Tail::Upper;
  std::uint64_t seed = 0;
  std::size_t reps = 0;
  double sigma_hat = 0.0;
};

// Δ̂ = (1/2n) Σ X_(i)² [ (3-α)² ((n-i)/n)^{2-α} - (2-α)² ((n-i)/n)^{1-α} ]
// The i = n term vanishes. Requires 0 < α < 1.
double delta_hat(const SampleData& sample, double alpha);
// Same for already sorted observations.
double delta_hat_sorted(std::span<const double> sorted, double alpha);

// Δ(F) = ((3-α)²/2) ∫ t² F̄^{2-α} f dt - ((2-α)²/2) ∫ t² F̄^{1-α} f dt by
// quadrature. Returns finite = false if either integral diverges.
EntropyValue delta_population(const DistributionSpec& spec, double alpha);

// Lower and upper rejection thresholds; an unused side is ±inf.
struct CriticalRegion {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  bool rejects(double statistic) const { return statistic < lower || statistic > upper; }
};

// Sorted Monte Carlo draws of a statistic under the null.
class NullDistribution {
 public:
  explicit NullDistribution(std::vector<double> draws);

  std::size_t reps() const { return sorted_.size(); }
  const std::vector<double>& sorted() const { return sorted_; }

  // Order statistic at index ceil((1 - level) reps), 1-based.
  double upper_quantile(double level) const;
  // Order statistic at index floor(level reps) + 1, 1-based.
  double lower_quantile(double level) const;
  CriticalRegion region(double alpha_prime, Tail tail) const;

 private:
  std::vector<double> sorted_;
};

// Δ̂ of `reps` standard-Rayleigh samples of size n, each standardized by its
// own MLE (a no-op in distribution, kept so the null matches the test
// exactly). Replication r draws from stream (seed, n, α, r).
NullDistribution simulate_delta_null(std::size_t n, double alpha, std::size_t reps, std::uint64_t seed,
                                     unsigned workers = 0);

// Upper (1 - α') empirical quantile of the null Δ̂ at sample size n.
double mc_critical_value(std::size_t n, const TestConfig& config);

// Δ̂ of the sample divided by σ̂², i.e. Δ̂ of the sample rescaled to unit
// Rayleigh scale.
double standardized_delta_hat(std::span<const double> sorted, double alpha);

// Monte Carlo critical-value test. The statistic is the standardized Δ̂ and
// the critical region comes from simulate_delta_null at the sample's n.
TestResult test_rayleigh_mc(const SampleData& sample, const TestConfig& config);
// Same, reusing a precomputed null distribution of matching n and α.
TestResult test_rayleigh_mc(const SampleData& sample, const TestConfig& config, const NullDistribution& null);

// Parametric bootstrap: resample Rayleigh(σ̂) at the sample's n and compare
// raw Δ̂ values. With Tail::Upper the p-value is the fraction of bootstrap
// statistics exceeding the observed one.
TestResult bootstrap_pvalue(const SampleData& sample, const TestConfig& config);

// Competitor statistics against a fully specified F.
double ks_stat(const SampleData& sample, const DistributionSpec& spec);
double cvm_stat(const SampleData& sample, const DistributionSpec& spec);
struct AndersonDarling {
  double value = 0.0;
  bool clamped = false;  // some F(X_(i)) was clamped into [1e-12, 1 - 1e-12]
};
AndersonDarling ad_stat(const SampleData& sample, const DistributionSpec& spec);
double fs_stat(const SampleData& sample, const DistributionSpec& spec);

// The same statistics computed from u_i = F(X_(i)) given in ascending order.
double ks_from_cdf(std::span<const double> u);
double cvm_from_cdf(std::span<const double> u);
AndersonDarling ad_from_cdf(std::span<const double> u);
double fs_from_cdf(std::span<const double> u);

enum class Competitor { KS, CvM, AD, FS };

std::string_view competitor_name(Competitor which);
std::optional<Competitor> parse_competitor(std::string_view name);

// Statistic of sorted data against Rayleigh(σ̂) with σ̂ the sample's MLE.
double competitor_statistic(Competitor which, std::span<const double> sorted);

// Null distribution with the scale re-estimated in every replication.
NullDistribution simulate_competitor_null(Competitor which, std::size_t n, std::size_t reps, std::uint64_t seed,
                                          unsigned workers = 0);

// Composite-null competitor test (rejects for large values).
TestResult calibrated_competitor_test(const SampleData& sample, Competitor which, const TestConfig& config);
TestResult calibrated_competitor_test(const SampleData& sample, Competitor which, const TestConfig& config,
                                      const NullDistribution& null);

}  // namespace wcrm
