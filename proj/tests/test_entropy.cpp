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
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "wcrm/entropy.hpp"
#include "wcrm/errors.hpp"

using namespace wcrm;
using doctest::Approx;

namespace {

// -∫ x^w F̄ log F̄ dx over the support, by Simpson.
double weighted_cre_oracle(const DistributionSpec& spec, bool weighted) {
  auto f = [&](double x) {
    const double ls = spec.log_survival(x);
    const double s = std::exp(ls);
    return -(weighted ? x : 1.0) * s * ls;
  };
  return testing::simpson_to_infinity(f, spec.support_lower(), spec.scale());
}

}  // namespace

TEST_CASE("order parameter window") {
  CHECK_THROWS_AS(wcrmhe_analytic(DistributionSpec::exponential(1), 1.0), DomainError);
  CHECK_THROWS_AS(wcrmhe_analytic(DistributionSpec::exponential(1), 0.0), DomainError);
  CHECK_THROWS_AS(wcrmhe_analytic(DistributionSpec::exponential(1), 2.0), DomainError);
  CHECK_THROWS_AS(wcrmhe_numeric(DistributionSpec::exponential(1), {0.5, -1.0}), DomainError);
}

TEST_CASE("closed forms") {
  CHECK(wcrmhe_analytic(DistributionSpec::exponential(1), 0.5).value == Approx(10.0 / 9.0).epsilon(1e-14));
  CHECK(wcrmhe_analytic(DistributionSpec::rayleigh(1), 0.5).value == Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(wcrmhe_analytic(DistributionSpec::uniform(1), 0.5).value == Approx(1.7714285714285714).epsilon(1e-14));
  // Power(2): ∫ x (1 - x²)^{1.5} dx = 1/5
  CHECK(wcrmhe_analytic(DistributionSpec::power(2), 0.5).value == Approx(1.6).epsilon(1e-13));
  // Pareto(1, 5), α = 0.5: k²/(a(2-α) - 2) = 1/5.5
  CHECK(wcrmhe_analytic(DistributionSpec::pareto(1, 5), 0.5).value == Approx((1 / 5.5 - 1) / -0.5).epsilon(1e-14));
  CHECK_FALSE(wcrmhe_analytic(DistributionSpec::pareto(1, 1), 0.5).finite);
  CHECK_THROWS_AS(wcrmhe_analytic(DistributionSpec::lfr(1, 1), 0.5), DomainError);
}

TEST_CASE("dynamic closed forms") {
  for (double t : {0.0, 0.5, 3.0, 10.0}) {
    CHECK(dwcrmhe_analytic(DistributionSpec::rayleigh(1), {0.5, t}).value == Approx(2.0 / 3.0).epsilon(1e-14));
  }
  CHECK(dwcrmhe_analytic(DistributionSpec::exponential(1), {0.5, 1.0}).value ==
        Approx(-2.0 / 9.0).epsilon(1e-13));
  CHECK(dwcrmhe_analytic(DistributionSpec::uniform(1), {0.5, 0.0}).value ==
        Approx(wcrmhe_analytic(DistributionSpec::uniform(1), 0.5).value).epsilon(1e-14));
  CHECK_THROWS_AS(dwcrmhe_analytic(DistributionSpec::uniform(1), {0.5, 1.0}), DomainError);
  CHECK_THROWS_AS(dwcrmhe_analytic(DistributionSpec::power(2), {0.5, 1.2}), DomainError);
  // Before its support starts the Pareto residual life is X itself.
  CHECK(dwcrmhe_analytic(DistributionSpec::pareto(2, 5), {0.5, 1.0}).value ==
        Approx(wcrmhe_analytic(DistributionSpec::pareto(2, 5), 0.5).value));
}

TEST_CASE("t = 0 reduces to the static measure") {
  for (const auto& spec : {DistributionSpec::uniform(3), DistributionSpec::exponential(0.7),
                           DistributionSpec::pareto(1, 4), DistributionSpec::power(0.5),
                           DistributionSpec::rayleigh(2)}) {
    for (double alpha : {0.2, 0.9, 1.3, 1.8}) {
      const auto a = wcrmhe_analytic(spec, alpha);
      const auto b = dwcrmhe_analytic(spec, {alpha, 0.0});
      CHECK(a.finite == b.finite);
      if (a.finite) CHECK(std::abs(a.value - b.value) <= 1e-10 * (1 + std::abs(a.value)));
    }
  }
}

TEST_CASE("unweighted numeric measure") {
  CHECK(crmhe_numeric(DistributionSpec::uniform(1), {0.5, 0.0}).value == Approx(1.2).epsilon(1e-9));
  CHECK(crmhe_numeric(DistributionSpec::exponential(1), {0.5, 0.0}).value == Approx(2.0 / 3.0).epsilon(1e-9));
  // Exp(1) has unit mean, so the α -> 1 limit is the cumulative residual
  // entropy -∫ F̄ log F̄.
  const auto exp1 = DistributionSpec::exponential(1);
  const double cre = weighted_cre_oracle(exp1, false);
  CHECK(cre == Approx(1.0).epsilon(1e-8));
  for (double alpha : {1 - 1e-4, 1 + 1e-4}) {
    CHECK(std::abs(crmhe_numeric(exp1, {alpha, 0.0}).value - cre) < 1e-3);
  }
}

TEST_CASE("weighted numeric measure") {
  CHECK(wcrmhe_numeric(DistributionSpec::exponential(1), {0.5, 0.0}).value == Approx(10.0 / 9.0).epsilon(1e-8));
  CHECK(wcrmhe_numeric(DistributionSpec::rayleigh(2), {1.5, 3.0}).value == Approx(14.0).epsilon(1e-6));
  CHECK_FALSE(wcrmhe_numeric(DistributionSpec::pareto(1, 1), {0.5, 0.0}).finite);
  CHECK_FALSE(wcrmhe_numeric(DistributionSpec::pareto(1, 2), {1.5, 0.0}).finite);
  CHECK(wcrmhe_numeric(DistributionSpec::pareto(1, 5), {0.5, 0.0}).value ==
        Approx(wcrmhe_analytic(DistributionSpec::pareto(1, 5), 0.5).value).epsilon(1e-8));

  // Families without closed forms against a Simpson oracle.
  for (const auto& spec : {DistributionSpec::lfr(1, 1), DistributionSpec::makeham(1, 0.5, 0.5),
                           DistributionSpec::half_normal(1.3)}) {
    for (double alpha : {0.3, 1.6}) {
      for (double t : {0.0, 0.8}) {
        CAPTURE(spec.describe());
        const double st = spec.survival(t);
        const double integral = testing::simpson_to_infinity(
            [&](double x) { return x * std::pow(spec.survival(x) / st, 2 - alpha); }, t, 1.0);
        CHECK(wcrmhe_numeric(spec, {alpha, t}).value == Approx((integral - 1) / (alpha - 1)).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("numeric path accepts a bare survival callable") {
  SurvivalModel model{[](double x) { return std::exp(-x); }};
  CHECK(wcrmhe_numeric(model, {0.5, 0.0}).value == Approx(10.0 / 9.0).epsilon(1e-8));
  CHECK(wcrmhe_numeric(model, {0.5, 1.0}).value == Approx(-2.0 / 9.0).epsilon(1e-7));
  CHECK(wmrl(model, 0.0).value == Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(wmrl(SurvivalModel{[](double x) { return x < 1 ? 1 - x : 0.0; }}, 1.0), DomainError);
}

TEST_CASE("alpha -> 1 approaches the weighted cumulative residual entropy") {
  // Exp(1) and Rayleigh(1) have m*(0) = 1, which makes the limit finite.
  for (const auto& spec : {DistributionSpec::exponential(1), DistributionSpec::rayleigh(1)}) {
    const double wcre = weighted_cre_oracle(spec, true);
    for (double alpha : {0.999, 1.001}) {
      CHECK(std::abs(wcrmhe_numeric(spec, {alpha, 0.0}).value - wcre) < 1e-2);
    }
  }
}

TEST_CASE("empirical estimator") {
  // X(1)²/2 + (1/2)^{1.9} (X(2)² - X(1)²)/2 for the sample {1, 2}
  const double integral = 0.5 + std::pow(0.5, 1.9) * 1.5;
  CHECK(wcrmhe_empirical(SampleData({1.0, 2.0}), 0.1).value == Approx((integral - 1) / -0.9).epsilon(1e-12));
  const double c = 1.7;
  CHECK(wcrmhe_empirical(SampleData({c, c, c, c}), 0.4).value == Approx((c * c / 2 - 1) / (0.4 - 1)));
  CHECK_THROWS_AS(wcrmhe_empirical(SampleData({1.0}), 0.5), InsufficientDataError);

  Engine engine = make_engine({77});
  const auto s = sample(DistributionSpec::rayleigh(1), 100000, engine);
  CHECK(std::abs(wcrmhe_empirical(s, 0.5).value - 2.0 / 3.0) < 0.02);
}

TEST_CASE("weighted mean residual life") {
  CHECK(wmrl(DistributionSpec::exponential(1), 0.0).value == Approx(1.0));
  for (double t : {0.0, 1.0, 4.0}) CHECK(wmrl(DistributionSpec::rayleigh(1.5), t).value == Approx(2.25));
  CHECK(wmrl(DistributionSpec::uniform(1), 0.0).value == Approx(1.0 / 6.0).epsilon(1e-10));
  CHECK(wmrl(DistributionSpec::lfr(0, 1), 0.0).value == Approx(1.0).epsilon(1e-9));  // Rayleigh(1) in disguise
  CHECK_FALSE(wmrl(DistributionSpec::pareto(1, 2), 0.0).finite);
}

TEST_CASE("linear transformation") {
  const auto exp1 = DistributionSpec::exponential(1);
  const auto base = wcrmhe_analytic(exp1, 0.5);
  const auto crm = crmhe_numeric(exp1, {0.5, 0.0});
  CHECK(linear_transform_wcrmhe(base, crm, 1.0, 0.0, 0.5).value == Approx(base.value));
  const auto scaled = linear_transform_wcrmhe(base, crm, 2.0, 0.0, 0.5);
  CHECK(scaled.value == Approx(-14.0 / 9.0).epsilon(1e-12));
  CHECK(scaled.value == Approx(wcrmhe_analytic(DistributionSpec::exponential(0.5), 0.5).value).epsilon(1e-12));

  // Shifted uniform on (b, a + b), evaluated over its support.
  const double a = 1.5, b = 0.75, alpha = 0.5;
  const auto u = DistributionSpec::uniform(a);
  const auto shifted = linear_transform_wcrmhe(wcrmhe_analytic(u, alpha), crmhe_numeric(u, {alpha, 0.0}), 1.0, b, alpha);
  const double direct = (a * (a + b) * (4 - alpha) - a * a * (3 - alpha)) / ((3 - alpha) * (4 - alpha));
  CHECK(shifted.value == Approx((direct - 1) / (alpha - 1)).epsilon(1e-9));
  SurvivalModel y{[&](double x) { return x <= b ? 1.0 : (x >= a + b ? 0.0 : 1 - (x - b) / a); }, b, a + b, 1.0};
  CHECK(shifted.value == Approx(wcrmhe_numeric(y, {alpha, 0.0}).value).epsilon(1e-9));

  CHECK_FALSE(linear_transform_wcrmhe(EntropyValue::divergent(), crm, 2, 0, 0.5).finite);
  CHECK_THROWS_AS(linear_transform_wcrmhe(base, crm, 0.0, 0.0, 0.5), DomainError);
}

TEST_CASE("proportional hazards") {
  const auto exp1 = DistributionSpec::exponential(1);
  auto base = [&](double beta) { return wcrmhe_analytic(exp1, beta); };
  CHECK(ph_model_wcrmhe(base, 1.0, 0.7).value == Approx(base(0.7).value));
  const auto ph = ph_model_wcrmhe(base, 1.5, 1.5);
  CHECK(ph.value == Approx(0.5 * wcrmhe_analytic(exp1, 1.25).value));
  CHECK(ph.value == Approx(wcrmhe_analytic(DistributionSpec::exponential(1.5), 1.5).value).epsilon(1e-12));

  // Minimum of two Exp(1) lifetimes: θ = 2. α = 1.5 would give β = 1, which
  // lies outside the window; α = 1.25 gives β = 0.5.
  CHECK_THROWS_AS(ph_model_wcrmhe(base, 2.0, 1.5), DomainError);
  SurvivalModel min_of_two{[](double x) { return std::exp(-2 * x); }};
  CHECK(ph_model_wcrmhe(base, 2.0, 1.25).value ==
        Approx(wcrmhe_numeric(min_of_two, {1.25, 0.0}).value).epsilon(1e-8));
  CHECK_THROWS_AS(ph_model_wcrmhe(base, 5.0, 0.5), DomainError);
}

TEST_CASE("bound from the weighted mean residual life") {
  const auto b1 = wcrmhe_bound(DistributionSpec::exponential(1), 0.5);
  CHECK(b1.value == Approx(0.0));
  CHECK(b1.direction == BoundDirection::Lower);
  CHECK(wcrmhe_analytic(DistributionSpec::exponential(1), 0.5).value > b1.value);

  const auto b2 = wcrmhe_bound(DistributionSpec::rayleigh(1), 1.5);
  CHECK(b2.value == Approx(0.0));
  CHECK(b2.direction == BoundDirection::Upper);
  // The stated upper bound does not hold here; the value is a lower bound.
  CHECK(wcrmhe_analytic(DistributionSpec::rayleigh(1), 1.5).value == Approx(2.0));

  const auto b3 = wcrmhe_bound(DistributionSpec::uniform(1), 0.5);
  CHECK(b3.value == Approx(5.0 / 3.0).epsilon(1e-9));
  CHECK(wcrmhe_analytic(DistributionSpec::uniform(1), 0.5).value > b3.value);

  // F̄^{2-α} <= F̄ iff α < 1, so the bound is below the measure for all α.
  for (const auto& spec : {DistributionSpec::exponential(2), DistributionSpec::uniform(2),
                           DistributionSpec::lfr(1, 1), DistributionSpec::half_normal(1)}) {
    for (double alpha : {0.2, 0.7, 1.2, 1.8}) {
      CHECK(wcrmhe_numeric(spec, {alpha, 0.0}).value >= wcrmhe_bound(spec, alpha).value);
    }
  }
  CHECK_FALSE(wcrmhe_bound(DistributionSpec::pareto(1, 2), 0.5).finite);
}

TEST_CASE("monotonicity classes") {
  const std::vector<double> wide{0, 0.5, 1, 2, 3, 5};
  CHECK(classify_monotonicity(DistributionSpec::rayleigh(1), 0.5, wide) == Monotonicity::Constant);
  CHECK(classify_monotonicity(DistributionSpec::rayleigh(2), 1.5, wide) == Monotonicity::Constant);
  // The t-coefficient 1/(λ(2-α)) is positive but 1/(α-1) < 0 for α < 1.
  const std::vector<double> grid{0, 1, 2, 3};
  CHECK(classify_monotonicity(DistributionSpec::exponential(1), 0.5, grid) == Monotonicity::Decreasing);
  CHECK(classify_monotonicity(DistributionSpec::exponential(1), 1.5, grid) == Monotonicity::Increasing);
  CHECK_THROWS_AS(classify_monotonicity(DistributionSpec::exponential(1), 0.5, std::vector<double>{0, 1}),
                  ConfigError);

  // Uniform(1): sign of d/dt of the dynamic closed form, by hand:
  //   (1/(α-1)) (-a/(3-α) + 2(a-t)/(4-α))
  const double alpha = 0.5, a = 1.0;
  std::vector<double> ugrid;
  for (int i = 1; i <= 9; ++i) ugrid.push_back(i / 10.0);
  bool any_pos = false, any_neg = false;
  for (int i = 0; i <= 800; ++i) {
    const double t = 0.1 + 0.8 * i / 800.0;
    const double d = (-a / (3 - alpha) + 2 * (a - t) / (4 - alpha)) / (alpha - 1);
    any_pos = any_pos || d > 0;
    any_neg = any_neg || d < 0;
  }
  const Monotonicity expected = any_pos && any_neg ? Monotonicity::Mixed
                                : any_pos          ? Monotonicity::Increasing
                                                   : Monotonicity::Decreasing;
  CHECK(classify_monotonicity(DistributionSpec::uniform(1), alpha, ugrid) == expected);
  CHECK(classify_monotonicity(DistributionSpec::lfr(1, 1), 0.5, grid) != Monotonicity::Constant);
}

TEST_CASE("derivative identity") {
  // (α-1) d/dt CRM(t) = (2-α) h(t) ((α-1) CRM(t) + 1) - t
  struct Case {
    DistributionSpec spec;
    std::vector<double> ts;
    bool numeric;
  };
  const std::vector<Case> cases = {
      {DistributionSpec::exponential(1.3), {0.5, 1.0, 2.5}, false},
      {DistributionSpec::uniform(2.0), {0.3, 0.9, 1.5}, false},
      {DistributionSpec::lfr(1, 1), {0.4, 1.2}, true},
  };
  for (const auto& c : cases) {
    for (double alpha : {0.3, 1.4}) {
      for (double t : c.ts) {
        CAPTURE(c.spec.describe());
        CAPTURE(t);
        auto value = [&](double tt) {
          return c.numeric ? wcrmhe_numeric(c.spec, {alpha, tt}).value : dwcrmhe(c.spec, {alpha, tt}).value;
        };
        const double h = c.numeric ? 1e-3 : 1e-4;
        const double fd = (value(t + h) - value(t - h)) / (2 * h);
        const double rhs =
            ((2 - alpha) * c.spec.hazard(t) * ((alpha - 1) * value(t) + 1) - t) / (alpha - 1);
        CHECK(fd == Approx(rhs).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("Rayleigh identity with the weighted mean residual life") {
  for (double sigma : {0.5, 1.0, 3.0}) {
    const auto spec = DistributionSpec::rayleigh(sigma);
    const SurvivalModel model{[&](double x) { return spec.survival(x); }, 0.0,
                              std::numeric_limits<double>::infinity(), sigma};
    for (double alpha : {0.4, 1.6}) {
      for (double t : {0.0, 0.5 * sigma, 2 * sigma}) {
        const double m = wmrl(model, t).value;
        CHECK(dwcrmhe(spec, {alpha, t}).value ==
              Approx((m / (2 - alpha) - 1) / (alpha - 1)).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("hazard-rate ordering") {
  const auto f = DistributionSpec::exponential(1);
  const auto g = DistributionSpec::exponential(2);  // larger hazard
  for (double t : {0.0, 0.5, 1.0, 3.0}) {
    CHECK(dwcrmhe(f, {1.5, t}).value >= dwcrmhe(g, {1.5, t}).value);
    CHECK(dwcrmhe(f, {0.5, t}).value <= dwcrmhe(g, {0.5, t}).value);
  }
}

TEST_CASE("finite measure whenever moments beyond the second exist") {
  for (const auto& spec : {DistributionSpec::uniform(1), DistributionSpec::exponential(1),
                           DistributionSpec::power(0.4), DistributionSpec::rayleigh(1), DistributionSpec::lfr(1, 1),
                           DistributionSpec::makeham(1, 0.5, 0.5), DistributionSpec::half_normal(1),
                           DistributionSpec::pareto(1, 5)}) {
    for (double alpha : {0.1, 0.5, 1.5}) CHECK(wcrmhe_numeric(spec, {alpha, 0.0}).finite);
  }
  for (double a : {0.5, 1.0, 2.0}) {
    for (double alpha : {0.1, 0.9, 1.5}) {
      const bool finite = a * (2 - alpha) > 2;
      CHECK(wcrmhe_numeric(DistributionSpec::pareto(1, a), {alpha, 0.0}).finite == finite);
    }
  }
}
