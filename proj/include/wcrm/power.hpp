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
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "wcrm/distributions.hpp"
#include "wcrm/gof.hpp"

namespace wcrm {

// ASS is the entropy-based Δ̂ test; the rest are the classical competitors.
enum class TestKind { ASS, KS, CvM, AD, FS };

std::string_view test_kind_name(TestKind kind);
std::optional<TestKind> parse_test_kind(std::string_view name);

struct PowerStudyConfig {
  std::vector<DistributionSpec> alternatives;
  std::vector<std::size_t> sample_sizes;
  std::vector<double> alphas{0.1};
  std::vector<double> alpha_primes{0.05};
  std::size_t reps = 2000;               // replications per cell
  std::size_t calibration_reps = 10000;  // null draws per critical value
  std::uint64_t seed = 0;
  std::vector<TestKind> tests{TestKind::ASS};
  Tail tail = Tail::Upper;
  unsigned workers = 0;

  // Throws ConfigError naming the offending field.
  void validate() const;
};

struct PowerRow {
  TestKind test = TestKind::ASS;
  DistributionSpec alternative = DistributionSpec::rayleigh(1.0);
  std::size_t n = 0;
  double alpha = 0.0;  // NaN for competitor rows (they have no entropy order)
  double alpha_prime = 0.0;
  std::size_t reps = 0;
  double power = 0.0;
  double std_err = 0.0;  // sqrt(power (1 - power) / reps)
};

struct StudyReport {
  std::vector<PowerRow> rows;
  std::vector<std::string> warnings;
  std::uint64_t calibration_seed = 0;
};

// Null distributions cached per (n, α) for Δ̂ and per (test, n) for the
// competitors. Thread-safe; each entry is simulated once.
class CalibrationCache {
 public:
  CalibrationCache(std::uint64_t seed, std::size_t reps, unsigned workers = 0)
      : seed_(seed), reps_(reps), workers_(workers) {}

  const NullDistribution& delta(std::size_t n, double alpha);
  const NullDistribution& competitor(Competitor which, std::size_t n);

  std::uint64_t seed() const { return seed_; }
  std::size_t reps() const { return reps_; }

 private:
  std::uint64_t seed_;
  std::size_t reps_;
  unsigned workers_;
  std::mutex mutex_;
  std::map<std::pair<std::size_t, double>, std::unique_ptr<NullDistribution>> delta_;
  std::map<std::pair<int, std::size_t>, std::unique_ptr<NullDistribution>> competitor_;
};

struct PowerCell {
  TestKind test = TestKind::ASS;
  DistributionSpec alternative = DistributionSpec::rayleigh(1.0);
  std::size_t n = 0;
  double alpha = 0.1;
  double alpha_prime = 0.05;
};

// Proportion of `reps` samples from the alternative that the test rejects.
// Alternative samples for replication r come from stream
// (seed, alternative, n, r), so every test sees the same data.
PowerRow empirical_power(const PowerCell& cell, std::size_t reps, std::uint64_t seed, CalibrationCache& cache,
                         Tail tail = Tail::Upper, unsigned workers = 0);

// Full cross-product test x alternative x n x α x α' in declaration order.
// Competitor rows are not repeated over α. Cell failures become warnings.
StudyReport run_study(const PowerStudyConfig& config);

void write_power_csv(std::ostream& out, const std::vector<PowerRow>& rows);

}  // namespace wcrm
