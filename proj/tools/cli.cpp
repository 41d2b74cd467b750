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

#include "cli.hpp"

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ctime>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <set>

#include "CLI11.hpp"
#include "wcrm/entropy.hpp"
#include "wcrm/errors.hpp"
#include "wcrm/gof.hpp"

#ifndef WCRM_VERSION
#define WCRM_VERSION "0.0.0"
#endif

namespace wcrm::cli {
namespace {

using Record = nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Record number_or_null(double v) { return std::isfinite(v) ? Record(v) : Record(nullptr); }

Record entropy_or_null(const EntropyValue& v) { return v.finite ? Record(v.value) : Record(nullptr); }

std::string cell_text(const Record& v) {
  if (v.is_null()) return "NA";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) return fmt::format("{}", v.get<double>());
  return v.dump();
}

std::string display_text(const Record& v) {
  if (v.is_null()) return "NA";
  if (v.is_number_float()) return fmt::format("{:.10g}", v.get<double>() + 0.0);
  return cell_text(v);
}

void print_record(std::ostream& out, const Record& rec) {
  for (const auto& [key, value] : rec.items()) fmt::print(out, "{}={}\n", key, display_text(value));
}

void write_csv(std::ostream& out, const std::vector<Record>& rows) {
  if (rows.empty()) return;
  std::string header;
  for (const auto& [key, value] : rows.front().items()) header += (header.empty() ? "" : ",") + key;
  out << header << '\n';
  for (const auto& row : rows) {
    std::string line;
    bool first = true;
    for (const auto& [key, value] : row.items()) {
      line += (first ? "" : ",") + cell_text(value);
      first = false;
    }
    out << line << '\n';
  }
}

std::ofstream open_output(const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InputError("cannot open output file '" + path + "'");
  return file;
}

void write_manifest(const std::string& output, const std::string& command, const std::vector<std::string>& argv,
                    const Record& config, std::optional<std::uint64_t> seed,
                    const std::vector<std::string>& warnings = {}) {
  Record m;
  m["command"] = command;
  m["version"] = WCRM_VERSION;
  m["timestamp"] = fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::time(nullptr)));
  m["seed"] = seed ? Record(*seed) : Record(nullptr);
  m["argv"] = argv;
  m["config"] = config;
  m["output"] = output;
  if (!warnings.empty()) m["warnings"] = warnings;
  auto file = open_output(output + ".manifest.json");
  file << m.dump(2) << '\n';
}

// Flags shared by every distribution-aware command.
struct FamilyFlags {
  std::string family;
  std::map<std::string, double> values;
  std::map<std::string, CLI::Option*> options;

  void attach(CLI::App* app) {
    app->add_option("--family", family, "distribution family");
    for (const char* name : {"lambda", "sigma", "k", "a", "b", "c"}) {
      values[name] = kNaN;
      options[name] = app->add_option(std::string("--") + name, values[name], std::string("parameter ") + name);
    }
  }

  bool given() const { return !family.empty(); }

  bool any_parameter() const {
    return std::any_of(options.begin(), options.end(), [](const auto& kv) { return kv.second->count() > 0; });
  }

  DistributionSpec spec() const {
    const Family f = parse_family(family);
    const auto names = family_parameter_names(f);
    std::vector<double> params;
    for (const auto& name : names) {
      if (options.at(name)->count() == 0)
        throw ConfigError("--" + name + " is required for family " + std::string(family_name(f)));
      params.push_back(values.at(name));
    }
    for (const auto& [name, opt] : options) {
      if (opt->count() > 0 && std::find(names.begin(), names.end(), name) == names.end())
        throw ConfigError("--" + name + " does not apply to family " + std::string(family_name(f)));
    }
    return DistributionSpec(f, params);
  }
};

struct OutputFlags {
  std::string output;
  std::string format;

  void attach(CLI::App* app, std::vector<std::string> formats, std::string fallback) {
    format = fallback;
    app->add_option("--output", output, "output file (a manifest is written next to it)");
    app->add_option("--format", format, "output format")->check(CLI::IsMember(formats));
  }
};

void write_records(const OutputFlags& o, const std::vector<Record>& rows, const Record& extra = {}) {
  auto file = open_output(o.output);
  if (o.format == "csv") {
    write_csv(file, rows);
  } else if (rows.size() == 1 && extra.is_null()) {
    file << rows.front().dump(2) << '\n';
  } else {
    Record doc = extra.is_null() ? Record::object() : extra;
    doc["rows"] = rows;
    file << doc.dump(2) << '\n';
  }
}

Record tail_and_method(const TestResult& r) {
  Record rec;
  rec["method"] = std::string(method_name(r.method));
  rec["tail"] = std::string(tail_name(r.tail));
  return rec;
}

// entropy ------------------------------------------------------------------

bool has_closed_form(Family f) {
  return f == Family::Uniform || f == Family::Exponential || f == Family::Pareto || f == Family::Power ||
         f == Family::Rayleigh;
}

struct EntropyCmd {
  FamilyFlags family;
  OutputFlags out;
  double alpha = 0.5;
  double t = 0.0;
  std::string input;

  void attach(CLI::App* app) {
    family.attach(app);
    out.attach(app, {"json", "csv"}, "json");
    app->add_option("--alpha", alpha, "entropy order, 0 < alpha < 2, alpha != 1");
    app->add_option("--t", t, "residual-life age");
    app->add_option("--input", input, "sample file for the empirical estimate");
  }

  int run(const std::vector<std::string>& argv, std::ostream& os) const {
    if (!family.given() && input.empty()) throw ConfigError("entropy needs --family or --input");
    if (!family.given() && family.any_parameter()) throw ConfigError("parameter flags need --family");
    const EntropyParams params{alpha, t};
    params.validate();

    Record rec;
    rec["command"] = "entropy";
    rec["alpha"] = alpha;
    rec["t"] = t;
    bool finite = true;
    std::optional<EntropyValue> numeric;
    if (family.given()) {
      const DistributionSpec spec = family.spec();
      rec["family"] = std::string(family_name(spec.family()));
      rec["params"] = spec.describe_params();
      std::optional<EntropyValue> analytic;
      if (has_closed_form(spec.family())) analytic = dwcrmhe_analytic(spec, params);
      numeric = wcrmhe_numeric(spec, params);
      rec["analytic"] = analytic ? entropy_or_null(*analytic) : Record(nullptr);
      rec["numeric"] = entropy_or_null(*numeric);
      rec["abs_diff"] = analytic && analytic->finite && numeric->finite
                            ? Record(std::abs(analytic->value - numeric->value))
                            : Record(nullptr);
      finite = numeric->finite && (!analytic || analytic->finite);
      rec["wmrl"] = entropy_or_null(wmrl(spec, t));
      if (t == 0.0) {
        const EntropyBound bound = wcrmhe_bound(spec, alpha);
        rec["bound"] = bound.finite ? Record(bound.value) : Record(nullptr);
        rec["bound_direction"] = bound.direction == BoundDirection::Lower ? "lower" : "upper";
      }
      if (spec.family() == Family::Rayleigh) rec["t_independent"] = true;
    }
    if (!input.empty()) {
      if (t != 0.0) throw ConfigError("--t: the empirical estimate is only defined at t = 0");
      const SampleData sample = read_sample_file(input);
      const EntropyValue emp = wcrmhe_empirical(sample, alpha);
      rec["input"] = input;
      rec["n"] = sample.size();
      rec["empirical"] = entropy_or_null(emp);
      if (numeric && numeric->finite) rec["empirical_abs_diff"] = std::abs(emp.value - numeric->value);
    }
    rec["finite"] = finite;

    print_record(os, rec);
    if (rec.contains("t_independent")) os << "note: independent of t for the Rayleigh family\n";
    if (!out.output.empty()) {
      write_records(out, {rec});
      write_manifest(out.output, "entropy", argv, rec, std::nullopt);
    }
    return finite ? kExitOk : kExitInfinite;
  }
};

// test ---------------------------------------------------------------------

struct TestCmd {
  OutputFlags out;
  std::string input;
  std::string method = "mc";
  std::string tail = "upper";
  TestConfig config;

  void attach(CLI::App* app) {
    out.attach(app, {"json", "csv"}, "json");
    app->add_option("--input", input, "sample file")->required();
    app->add_option("--method", method, "calibration")->check(CLI::IsMember({"mc", "bootstrap"}));
    app->add_option("--alpha", config.alpha, "entropy order in (0, 1)");
    app->add_option("--alpha-prime", config.alpha_prime, "significance level");
    app->add_option("--reps", config.mc_reps, "Monte Carlo null replications");
    app->add_option("--B", config.bootstrap_reps, "bootstrap replications");
    app->add_option("--seed", config.seed, "random seed");
    app->add_option("--tail", tail, "rejection region: upper, lower, two-sided");
    app->add_option("--workers", config.workers, "worker threads (0: all cores)");
  }

  int run(const std::vector<std::string>& argv, std::ostream& os) {
    config.tail = parse_tail(tail);
    config.validate();
    const SampleData sample = read_sample_file(input);
    const TestResult r = method == "mc" ? test_rayleigh_mc(sample, config) : bootstrap_pvalue(sample, config);

    Record rec;
    rec["command"] = "test";
    rec["input"] = input;
    rec["n"] = sample.size();
    rec.update(tail_and_method(r));
    rec["alpha"] = config.alpha;
    rec["alpha_prime"] = config.alpha_prime;
    rec["seed"] = r.seed;
    rec["reps"] = r.reps;
    rec["sigma_hat"] = r.sigma_hat;
    rec["delta_hat"] = delta_hat(sample, config.alpha);
    rec["statistic"] = r.statistic;
    rec["critical_lower"] = r.critical_lower ? Record(*r.critical_lower) : Record(nullptr);
    rec["critical_value"] = r.critical_value ? Record(*r.critical_value) : Record(nullptr);
    rec["p_value"] = r.p_value ? Record(*r.p_value) : Record(nullptr);
    rec["reject"] = r.reject;
    rec["decision"] = r.reject ? "reject" : "accept";

    print_record(os, rec);
    if (!out.output.empty()) {
      write_records(out, {rec});
      write_manifest(out.output, "test", argv, rec, config.seed);
    }
    return kExitOk;
  }
};

// power --------------------------------------------------------------------

Record power_row_record(const PowerRow& r) {
  Record rec;
  rec["test"] = std::string(test_kind_name(r.test));
  rec["family"] = std::string(family_name(r.alternative.family()));
  rec["params"] = r.alternative.describe_params();
  rec["n"] = r.n;
  rec["alpha"] = number_or_null(r.alpha);
  rec["alpha_prime"] = r.alpha_prime;
  rec["reps"] = r.reps;
  rec["power"] = r.power;
  rec["std_err"] = r.std_err;
  return rec;
}

Record config_record(const PowerStudyConfig& c) {
  Record rec;
  Record alts = Record::array();
  for (const auto& a : c.alternatives) alts.push_back(a.describe());
  rec["alternatives"] = alts;
  rec["sample_sizes"] = c.sample_sizes;
  rec["alphas"] = c.alphas;
  rec["alpha_primes"] = c.alpha_primes;
  rec["reps"] = c.reps;
  rec["calibration_reps"] = c.calibration_reps;
  rec["seed"] = c.seed;
  Record tests = Record::array();
  for (auto t : c.tests) tests.push_back(std::string(test_kind_name(t)));
  rec["tests"] = tests;
  rec["tail"] = std::string(tail_name(c.tail));
  return rec;
}

struct PowerCmd {
  FamilyFlags family;
  OutputFlags out;
  std::string config_path;
  std::vector<std::size_t> sample_sizes;
  std::vector<double> alphas{0.1};
  std::vector<double> alpha_primes{0.05};
  std::vector<std::string> tests{"ASS"};
  std::size_t reps = 2000;
  std::size_t calibration_reps = 10000;
  std::uint64_t seed = 0;
  std::string tail = "upper";
  unsigned workers = 0;
  std::vector<CLI::Option*> study_flags;

  void attach(CLI::App* app) {
    family.attach(app);
    out.attach(app, {"csv", "json"}, "csv");
    app->add_option("--config", config_path, "JSON study configuration");
    study_flags = {
        app->add_option("--n", sample_sizes, "sample sizes"),
        app->add_option("--alpha", alphas, "entropy orders"),
        app->add_option("--alpha-prime", alpha_primes, "significance levels"),
        app->add_option("--tests", tests, "ASS, KS, CvM, AD, FS"),
        app->add_option("--reps", reps, "replications per cell"),
        app->add_option("--calibration-reps", calibration_reps, "null replications per critical value"),
        app->add_option("--seed", seed, "random seed"),
        app->add_option("--tail", tail, "rejection region for ASS"),
    };
    app->add_option("--workers", workers, "worker threads (0: all cores)");
  }

  PowerStudyConfig build() const {
    if (!config_path.empty()) {
      if (family.given() || family.any_parameter() ||
          std::any_of(study_flags.begin(), study_flags.end(), [](auto* o) { return o->count() > 0; }))
        throw ConfigError("--config cannot be combined with study flags");
      std::ifstream file(config_path);
      if (!file) throw InputError("cannot open config file '" + config_path + "'");
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(file);
      } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(config_path + ": " + e.what());
      }
      PowerStudyConfig c = parse_power_config(j);
      c.workers = workers;
      return c;
    }
    if (!family.given()) throw ConfigError("power needs --config or --family");
    PowerStudyConfig c;
    c.alternatives = {family.spec()};
    c.sample_sizes = sample_sizes;
    c.alphas = alphas;
    c.alpha_primes = alpha_primes;
    c.tests.clear();
    for (const auto& name : tests) {
      auto kind = parse_test_kind(name);
      if (!kind) throw ConfigError("--tests: unknown test '" + name + "'");
      c.tests.push_back(*kind);
    }
    c.reps = reps;
    c.calibration_reps = calibration_reps;
    c.seed = seed;
    c.tail = parse_tail(tail);
    c.workers = workers;
    c.validate();
    return c;
  }

  int run(const std::vector<std::string>& argv, std::ostream& os, std::ostream& es) const {
    const PowerStudyConfig c = build();
    const StudyReport report = run_study(c);
    std::vector<Record> rows;
    for (const auto& r : report.rows) rows.push_back(power_row_record(r));
    for (const auto& w : report.warnings) fmt::print(es, "warning: {}\n", w);

    if (out.output.empty()) {
      std::ostringstream csv;
      write_power_csv(csv, report.rows);
      os << csv.str();
      return kExitOk;
    }
    if (out.format == "csv") {
      auto file = open_output(out.output);
      write_power_csv(file, report.rows);
    } else {
      Record extra;
      extra["calibration_seed"] = report.calibration_seed;
      extra["warnings"] = report.warnings;
      write_records(out, rows, extra);
    }
    Record cfg = config_record(c);
    cfg["calibration_seed"] = report.calibration_seed;
    write_manifest(out.output, "power", argv, cfg, c.seed, report.warnings);
    fmt::print(os, "rows={}\nwarnings={}\noutput={}\n", rows.size(), report.warnings.size(), out.output);
    return kExitOk;
  }
};

// critical -----------------------------------------------------------------

struct CriticalCmd {
  OutputFlags out;
  std::vector<std::size_t> sample_sizes;
  std::vector<double> alphas{0.1};
  std::vector<double> alpha_primes{0.05};
  std::size_t reps = 10000;
  std::uint64_t seed = 0;
  std::string tail = "upper";
  unsigned workers = 0;

  void attach(CLI::App* app) {
    out.attach(app, {"csv", "json"}, "csv");
    app->add_option("--n", sample_sizes, "sample sizes")->required();
    app->add_option("--alpha", alphas, "entropy orders in (0, 1)");
    app->add_option("--alpha-prime", alpha_primes, "significance levels");
    app->add_option("--reps", reps, "null replications");
    app->add_option("--seed", seed, "random seed");
    app->add_option("--tail", tail, "upper, lower, two-sided");
    app->add_option("--workers", workers, "worker threads (0: all cores)");
  }

  int run(const std::vector<std::string>& argv, std::ostream& os) const {
    const Tail which = parse_tail(tail);
    std::vector<Record> rows;
    for (std::size_t n : sample_sizes) {
      if (n < 5) throw ConfigError("--n: every sample size must be at least 5");
      for (double alpha : alphas) {
        TestConfig tc;
        tc.alpha = alpha;
        tc.mc_reps = reps;
        tc.seed = seed;
        tc.tail = which;
        tc.validate();
        const auto null = simulate_delta_null(n, alpha, reps, seed, workers);
        for (double level : alpha_primes) {
          tc.alpha_prime = level;
          tc.validate();
          const CriticalRegion region = null.region(level, which);
          Record rec;
          rec["n"] = n;
          rec["alpha"] = alpha;
          rec["alpha_prime"] = level;
          rec["tail"] = std::string(tail_name(which));
          rec["reps"] = reps;
          rec["seed"] = seed;
          rec["critical_lower"] = number_or_null(region.lower);
          rec["critical_upper"] = number_or_null(region.upper);
          rows.push_back(rec);
        }
      }
    }
    if (out.output.empty()) {
      write_csv(os, rows);
      return kExitOk;
    }
    write_records(out, rows, out.format == "json" ? Record::object() : Record());
    Record cfg;
    cfg["sample_sizes"] = sample_sizes;
    cfg["alphas"] = alphas;
    cfg["alpha_primes"] = alpha_primes;
    cfg["reps"] = reps;
    cfg["tail"] = std::string(tail_name(which));
    write_manifest(out.output, "critical", argv, cfg, seed);
    fmt::print(os, "rows={}\noutput={}\n", rows.size(), out.output);
    return kExitOk;
  }
};

// qqplot -------------------------------------------------------------------

struct QQPair {
  double p;
  double theoretical;
  double empirical;
};

void write_svg(std::ostream& out, const std::vector<QQPair>& pairs, double sigma) {
  constexpr double kSize = 480.0;
  constexpr double kMargin = 56.0;
  double hi = 0.0;
  for (const auto& q : pairs) hi = std::max({hi, q.theoretical, q.empirical});
  hi *= 1.05;
  const double span = kSize - 2 * kMargin;
  auto px = [&](double v) { return kMargin + span * v / hi; };
  auto py = [&](double v) { return kSize - kMargin - span * v / hi; };

  fmt::print(out, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" viewBox=\"0 0 {0} {0}\">\n",
             kSize);
  fmt::print(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
  fmt::print(out, "<rect x=\"{0}\" y=\"{0}\" width=\"{1}\" height=\"{1}\" fill=\"none\" stroke=\"black\"/>\n",
             kMargin, span);
  fmt::print(out, "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#c33\"/>\n", px(0), py(0),
             px(hi), py(hi));
  for (int i = 0; i <= 4; ++i) {
    const double v = hi * i / 4.0;
    fmt::print(out, "<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\" text-anchor=\"middle\">{:.3g}</text>\n", px(v),
               kSize - kMargin + 16, v);
    fmt::print(out, "<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\" text-anchor=\"end\">{:.3g}</text>\n",
               kMargin - 6, py(v) + 4, v);
  }
  for (const auto& q : pairs) {
    fmt::print(out, "<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"#236\"/>\n", px(q.theoretical),
               py(q.empirical));
  }
  fmt::print(out, "<text x=\"{}\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\">Rayleigh quantile (sigma={:.6g})</text>\n",
             kSize / 2, kSize - 14, sigma);
  fmt::print(out,
             "<text x=\"16\" y=\"{0}\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 {0})\">"
             "sample quantile</text>\n",
             kSize / 2);
  out << "</svg>\n";
}

struct QQCmd {
  OutputFlags out;
  std::string input;
  std::string svg;

  void attach(CLI::App* app) {
    out.attach(app, {"csv", "json", "svg"}, "csv");
    app->add_option("--input", input, "sample file")->required();
    app->add_option("--svg", svg, "also render a static SVG here");
  }

  int run(const std::vector<std::string>& argv, std::ostream& os) const {
    const SampleData sample = read_sample_file(input);
    const std::size_t n = sample.size();
    if (n < 3) throw InputError("qqplot needs at least 3 observations");
    const double sigma = rayleigh_mle(sample);
    const auto fitted = DistributionSpec::rayleigh(sigma);
    std::vector<QQPair> pairs;
    std::vector<Record> rows;
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
      const QQPair q{p, fitted.quantile(p), sample.sorted()[i]};
      worst = std::max(worst, std::abs(q.theoretical - q.empirical) / sigma);
      pairs.push_back(q);
      Record rec;
      rec["i"] = i + 1;
      rec["p"] = p;
      rec["theoretical"] = q.theoretical;
      rec["empirical"] = q.empirical;
      rows.push_back(rec);
    }

    fmt::print(os, "n={}\nsigma_hat={:.10g}\nmax_scaled_deviation={:.10g}\n", n, sigma, worst);
    if (out.output.empty()) {
      write_csv(os, rows);
    } else if (out.format == "svg") {
      auto file = open_output(out.output);
      write_svg(file, pairs, sigma);
    } else {
      Record extra;
      extra["sigma_hat"] = sigma;
      write_records(out, rows, out.format == "json" ? extra : Record());
    }
    if (!svg.empty()) {
      auto file = open_output(svg);
      write_svg(file, pairs, sigma);
    }
    if (!out.output.empty()) {
      Record cfg;
      cfg["input"] = input;
      cfg["n"] = n;
      cfg["sigma_hat"] = sigma;
      cfg["plotting_position"] = "(i-0.5)/n";
      write_manifest(out.output, "qqplot", argv, cfg, std::nullopt);
    }
    return kExitOk;
  }
};

// power config parsing -----------------------------------------------------

class Diagnostics {
 public:
  void add(std::string msg) { errors_.push_back(std::move(msg)); }
  bool empty() const { return errors_.empty(); }
  std::string joined() const {
    std::string s;
    for (const auto& e : errors_) s += (s.empty() ? "" : "\n") + e;
    return s;
  }

 private:
  std::vector<std::string> errors_;
};

template <class T>
std::optional<T> get_field(const nlohmann::json& j, const std::string& key, const std::string& path,
                           Diagnostics& diag) {
  if (!j.contains(key)) return std::nullopt;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    diag.add(path + key + ": wrong type (" + std::string(j.at(key).type_name()) + ")");
    return std::nullopt;
  }
}

std::optional<std::uint64_t> get_count(const nlohmann::json& j, const std::string& key, Diagnostics& diag) {
  if (!j.contains(key)) return std::nullopt;
  if (!j.at(key).is_number_unsigned()) {
    diag.add(key + ": must be a non-negative integer");
    return std::nullopt;
  }
  return j.at(key).get<std::uint64_t>();
}

}  // namespace

SampleData read_sample(std::istream& in, const std::string& source) {
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::string tok;
    while (tokens >> tok) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw InputError(fmt::format("{}:{}: cannot parse '{}' as a number", source, line_no, tok));
      if (!std::isfinite(v)) throw InputError(fmt::format("{}:{}: non-finite value '{}'", source, line_no, tok));
      if (v < 0.0) throw InputError(fmt::format("{}:{}: negative observation {}", source, line_no, tok));
      values.push_back(v);
    }
  }
  if (in.bad()) throw InputError(source + ": read error");
  if (values.empty()) throw InputError(source + ": no observations");
  return SampleData(std::move(values));
}

SampleData read_sample_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw InputError("cannot open input file '" + path + "'");
  return read_sample(file, path);
}

PowerStudyConfig parse_power_config(const nlohmann::json& j) {
  Diagnostics diag;
  PowerStudyConfig c;
  if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
  static const std::set<std::string> known{"alternatives", "sample_sizes", "alphas", "alpha_primes", "reps",
                                           "calibration_reps", "seed", "tests", "tail", "workers"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) diag.add(key + ": unknown field");
  }

  if (!j.contains("alternatives")) {
    diag.add("alternatives: missing");
  } else if (!j.at("alternatives").is_array()) {
    diag.add("alternatives: must be an array");
  } else {
    const auto& alts = j.at("alternatives");
    for (std::size_t i = 0; i < alts.size(); ++i) {
      const std::string path = fmt::format("alternatives[{}].", i);
      const auto& a = alts[i];
      if (!a.is_object()) {
        diag.add(path.substr(0, path.size() - 1) + ": must be an object");
        continue;
      }
      const auto name = get_field<std::string>(a, "family", path, diag);
      if (!name) {
        if (!a.contains("family")) diag.add(path + "family: missing");
        continue;
      }
      Family f;
      try {
        f = parse_family(*name);
      } catch (const DomainError& e) {
        diag.add(path + "family: " + e.what());
        continue;
      }
      const auto names = family_parameter_names(f);
      std::vector<double> params;
      bool ok = true;
      for (const auto& p : names) {
        const auto v = get_field<double>(a, p, path, diag);
        if (!v) {
          if (!a.contains(p)) diag.add(path + p + ": missing");
          ok = false;
          continue;
        }
        params.push_back(*v);
      }
      for (const auto& [key, value] : a.items()) {
        if (key != "family" && std::find(names.begin(), names.end(), key) == names.end())
          diag.add(path + key + ": not a parameter of " + std::string(family_name(f)));
      }
      if (!ok) continue;
      try {
        c.alternatives.emplace_back(f, params);
      } catch (const std::exception& e) {
        diag.add(path.substr(0, path.size() - 1) + ": " + e.what());
      }
    }
  }

  if (!j.contains("sample_sizes")) diag.add("sample_sizes: missing");
  if (auto v = get_field<std::vector<std::size_t>>(j, "sample_sizes", "", diag)) c.sample_sizes = *v;
  if (auto v = get_field<std::vector<double>>(j, "alphas", "", diag)) c.alphas = *v;
  if (auto v = get_field<std::vector<double>>(j, "alpha_primes", "", diag)) c.alpha_primes = *v;
  if (auto v = get_count(j, "reps", diag)) c.reps = *v;
  if (auto v = get_count(j, "calibration_reps", diag)) c.calibration_reps = *v;
  if (auto v = get_count(j, "seed", diag)) c.seed = *v;
  if (auto v = get_count(j, "workers", diag)) c.workers = static_cast<unsigned>(*v);
  if (auto v = get_field<std::vector<std::string>>(j, "tests", "", diag)) {
    c.tests.clear();
    for (const auto& name : *v) {
      if (auto kind = parse_test_kind(name)) {
        c.tests.push_back(*kind);
      } else {
        diag.add("tests: unknown test '" + name + "'");
      }
    }
  }
  if (auto v = get_field<std::string>(j, "tail", "", diag)) {
    try {
      c.tail = parse_tail(*v);
    } catch (const ConfigError& e) {
      diag.add(std::string("tail: ") + e.what());
    }
  }

  if (diag.empty()) {
    try {
      c.validate();
    } catch (const ConfigError& e) {
      diag.add(e.what());
    }
  }
  if (!diag.empty()) throw ConfigError(diag.joined());
  return c;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weighted cumulative residual Mathai-Haubold entropy and a Rayleigh goodness-of-fit test"};
  app.name("wcrm");
  app.set_version_flag("--version", WCRM_VERSION);
  app.require_subcommand(1);

  EntropyCmd entropy;
  TestCmd test;
  PowerCmd power;
  CriticalCmd critical;
  QQCmd qq;
  auto* entropy_app = app.add_subcommand("entropy", "evaluate the entropy measure");
  auto* test_app = app.add_subcommand("test", "test a sample for the Rayleigh law");
  auto* power_app = app.add_subcommand("power", "empirical size and power study");
  auto* critical_app = app.add_subcommand("critical", "Monte Carlo critical values");
  auto* qq_app = app.add_subcommand("qqplot", "Rayleigh Q-Q plot data");
  entropy.attach(entropy_app);
  test.attach(test_app);
  power.attach(power_app);
  critical.attach(critical_app);
  qq.attach(qq_app);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (entropy_app->parsed()) return entropy.run(args, out);
    if (test_app->parsed()) return test.run(args, out);
    if (power_app->parsed()) return power.run(args, out, err);
    if (critical_app->parsed()) return critical.run(args, out);
    if (qq_app->parsed()) return qq.run(args, out);
  } catch (const std::invalid_argument& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitInput;
  } catch (const std::domain_error& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace wcrm::cli
