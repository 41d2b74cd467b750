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

#include "wcrm/power.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "wcrm/errors.hpp"
#include "wcrm/parallel.hpp"
#include "wcrm/rng.hpp"

namespace wcrm {
namespace {

constexpr std::uint64_t kAlternativeStream = 0x414c54ULL;

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "NA";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

Competitor to_competitor(TestKind kind) {
  switch (kind) {
    case TestKind::KS: return Competitor::KS;
    case TestKind::CvM: return Competitor::CvM;
    case TestKind::AD: return Competitor::AD;
    case TestKind::FS: return Competitor::FS;
    case TestKind::ASS: break;
  }
  throw ConfigError("ASS is not a competitor test");
}

}  // namespace

std::string_view test_kind_name(TestKind kind) {
  switch (kind) {
    case TestKind::ASS: return "ASS";
    case TestKind::KS: return "KS";
    case TestKind::CvM: return "CvM";
    case TestKind::AD: return "AD";
    case TestKind::FS: return "FS";
  }
  return "unknown";
}

std::optional<TestKind> parse_test_kind(std::string_view name) {
  if (name == "ASS" || name == "ass") return TestKind::ASS;
  if (auto c = parse_competitor(name)) {
    switch (*c) {
      case Competitor::KS: return TestKind::KS;
      case Competitor::CvM: return TestKind::CvM;
      case Competitor::AD: return TestKind::AD;
      case Competitor::FS: return TestKind::FS;
    }
  }
  return std::nullopt;
}

void PowerStudyConfig::validate() const {
  if (reps < 100) throw ConfigError("reps: must be at least 100");
  if (calibration_reps < 100) throw ConfigError("calibration_reps: must be at least 100");
  if (sample_sizes.empty()) throw ConfigError("sample_sizes: must not be empty");
  for (std::size_t n : sample_sizes) {
    if (n < 5) throw ConfigError("sample_sizes: every n must be at least 5");
  }
  for (double a : alphas) {
    if (!(a > 0.0 && a < 1.0)) throw ConfigError("alphas: every alpha must lie in (0, 1)");
  }
  for (double a : alpha_primes) {
    if (!(a > 0.0 && a < 1.0)) throw ConfigError("alpha_primes: every level must lie in (0, 1)");
  }
}

const NullDistribution& CalibrationCache::delta(std::size_t n, double alpha) {
  std::lock_guard lock(mutex_);
  auto& slot = delta_[{n, alpha}];
  if (!slot) slot = std::make_unique<NullDistribution>(simulate_delta_null(n, alpha, reps_, seed_, workers_));
  return *slot;
}

const NullDistribution& CalibrationCache::competitor(Competitor which, std::size_t n) {
  std::lock_guard lock(mutex_);
  auto& slot = competitor_[{static_cast<int>(which), n}];
  if (!slot) slot = std::make_unique<NullDistribution>(simulate_competitor_null(which, n, reps_, seed_, workers_));
  return *slot;
}

PowerRow empirical_power(const PowerCell& cell, std::size_t reps, std::uint64_t seed, CalibrationCache& cache,
                         Tail tail, unsigned workers) {
  if (reps == 0) throw ConfigError("reps: must be positive");
  if (cell.n < 5) throw ConfigError("n: must be at least 5");

  CriticalRegion region;
  if (cell.test == TestKind::ASS) {
    region = cache.delta(cell.n, cell.alpha).region(cell.alpha_prime, tail);
  } else {
    region.upper = cache.competitor(to_competitor(cell.test), cell.n).upper_quantile(cell.alpha_prime);
  }

  const std::uint64_t alt_key = fnv1a(cell.alternative.describe());
  std::vector<char> rejected(reps, 0);
  parallel_for(reps, workers, [&](std::size_t r) {
    Engine engine = make_engine({seed, kAlternativeStream, alt_key, cell.n, r});
    std::vector<double> x(cell.n);
    sample_sorted_into(cell.alternative, engine, x);
    const double stat = cell.test == TestKind::ASS ? standardized_delta_hat(x, cell.alpha)
                                                   : competitor_statistic(to_competitor(cell.test), x);
    rejected[r] = region.rejects(stat) ? 1 : 0;
  });

  std::size_t hits = 0;
  for (char c : rejected) hits += static_cast<std::size_t>(c);
  PowerRow row;
  row.test = cell.test;
  row.alternative = cell.alternative;
  row.n = cell.n;
  row.alpha = cell.test == TestKind::ASS ? cell.alpha : std::numeric_limits<double>::quiet_NaN();
  row.alpha_prime = cell.alpha_prime;
  row.reps = reps;
  row.power = static_cast<double>(hits) / static_cast<double>(reps);
  row.std_err = std::sqrt(row.power * (1.0 - row.power) / static_cast<double>(reps));
  return row;
}

StudyReport run_study(const PowerStudyConfig& config) {
  config.validate();
  StudyReport report;
  report.calibration_seed = config.seed;
  CalibrationCache cache(config.seed, config.calibration_reps, config.workers);

  for (TestKind test : config.tests) {
    for (const auto& alt : config.alternatives) {
      for (std::size_t n : config.sample_sizes) {
        std::vector<double> alphas = config.alphas;
        if (test != TestKind::ASS) alphas = {std::numeric_limits<double>::quiet_NaN()};
        for (double alpha : alphas) {
          for (double alpha_prime : config.alpha_primes) {
            PowerCell cell{test, alt, n, alpha, alpha_prime};
            try {
              report.rows.push_back(empirical_power(cell, config.reps, config.seed, cache, config.tail, config.workers));
            } catch (const std::exception& e) {
              report.warnings.push_back(std::string(test_kind_name(test)) + " " + alt.describe() +
                                        " n=" + std::to_string(n) + ": " + e.what());
            }
          }
        }
      }
    }
  }
  return report;
}

void write_power_csv(std::ostream& out, const std::vector<PowerRow>& rows) {
  out << "test,family,params,n,alpha,alpha_prime,reps,power,std_err\n";
  for (const auto& row : rows) {
    out << test_kind_name(row.test) << ',' << family_name(row.alternative.family()) << ','
        << row.alternative.describe_params() << ',' << row.n << ',' << format_double(row.alpha) << ','
        << format_double(row.alpha_prime) << ',' << row.reps << ',' << format_double(row.power) << ','
        << format_double(row.std_err) << '\n';
  }
}

}  // namespace wcrm
