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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wcrm/rng.hpp"

namespace wcrm {

enum class Family { Uniform, Exponential, Pareto, Power, Rayleigh, LFR, Makeham, HalfNormal };

std::string_view family_name(Family family);
// Accepts the lower-case names produced by family_name(); throws DomainError.
Family parse_family(std::string_view name);
// Parameter names in positional order, e.g. {"k", "a"} for Pareto.
std::vector<std::string> family_parameter_names(Family family);

// A lifetime-distribution family plus its parameters. Construction validates
// the parameters, so every live instance is usable.
//
// Parameterizations:
//   Uniform(a)          F̄(x) = 1 - x/a on (0, a)
//   Exponential(λ)      F̄(x) = exp(-λx)
//   Pareto(k, a)        F̄(x) = (k/x)^a for x >= k, 1 below k
//   Power(c)            F̄(x) = 1 - x^c on (0, 1)
//   Rayleigh(σ)         F̄(x) = exp(-x²/2σ²)
//   LFR(a, b)           F̄(x) = exp(-ax - bx²/2)
//   Makeham(a, b, c)    F̄(x) = exp(-ax - (b/c)(e^{cx} - 1))
//   HalfNormal(σ)       F̄(x) = erfc(x / (σ√2))
class DistributionSpec {
 public:
  DistributionSpec(Family family, std::vector<double> params);

  static DistributionSpec uniform(double a) { return {Family::Uniform, {a}}; }
  static DistributionSpec exponential(double lambda) { return {Family::Exponential, {lambda}}; }
  static DistributionSpec pareto(double k, double a) { return {Family::Pareto, {k, a}}; }
  static DistributionSpec power(double c) { return {Family::Power, {c}}; }
  static DistributionSpec rayleigh(double sigma) { return {Family::Rayleigh, {sigma}}; }
  static DistributionSpec lfr(double a, double b) { return {Family::LFR, {a, b}}; }
  static DistributionSpec makeham(double a, double b, double c) { return {Family::Makeham, {a, b, c}}; }
  static DistributionSpec half_normal(double sigma) { return {Family::HalfNormal, {sigma}}; }

  Family family() const { return family_; }
  const std::vector<double>& params() const { return params_; }
  double param(std::size_t i) const { return params_.at(i); }

  // Support endpoints: survival is 1 below support_lower() and 0 at or above
  // a finite support_upper().
  double support_lower() const;
  double support_upper() const;  // +inf for unbounded families

  double survival(double x) const;
  // log F̄(x); -inf where F̄(x) = 0. Accurate far into the tail.
  double log_survival(double x) const;
  double cdf(double x) const;
  double density(double x) const;
  // f(x)/F̄(x); throws DomainError where F̄(x) = 0.
  double hazard(double x) const;
  // Smallest x with F(x) >= u, for 0 < u < 1.
  double quantile(double u) const;

  // A length scale of the distribution (its median above support_lower()),
  // used to shape quadrature substitutions.
  double scale() const;

  // "rayleigh(sigma=1)"
  std::string describe() const;
  // "sigma=1" / "k=1;a=5"
  std::string describe_params() const;

  friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;

 private:
  Family family_;
  std::vector<double> params_;
};

// An ordered non-negative sample. Holds the observations as given together
// with the order statistics.
class SampleData {
 public:
  explicit SampleData(std::vector<double> observations);

  const std::vector<double>& observations() const { return observations_; }
  // X_(1) <= ... <= X_(n)
  const std::vector<double>& sorted() const { return sorted_; }
  std::size_t size() const { return sorted_.size(); }

  SampleData scaled(double factor) const;
  bool all_equal() const { return sorted_.front() == sorted_.back(); }

 private:
  std::vector<double> observations_;
  std::vector<double> sorted_;
};

// n independent inverse-transform draws.
SampleData sample(const DistributionSpec& spec, std::size_t n, Engine& engine);
// Same as sample() but writes sorted draws into `out` without allocating.
void sample_sorted_into(const DistributionSpec& spec, Engine& engine, std::span<double> out);

// σ̂ = sqrt(Σ x² / 2n), the Rayleigh maximum-likelihood estimate.
double rayleigh_mle(const SampleData& sample);
double rayleigh_mle(std::span<const double> observations);

}  // namespace wcrm
