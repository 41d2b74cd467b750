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

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "wcrm/errors.hpp"

namespace fs = std::filesystem;
using doctest::Approx;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = wcrm::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// Value of `key=...` in the text report.
std::string field(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
  }
  return "";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / fs::path("wcrm_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& content) const {
    const auto p = path / name;
    std::ofstream(p) << content;
    return p.string();
  }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string write_values(const TempDir& dir, const std::string& name, const std::vector<double>& v) {
  std::ostringstream s;
  s.precision(17);
  for (double x : v) s << x << '\n';
  return dir.file(name, s.str());
}

}  // namespace

TEST_CASE("sample file parsing") {
  std::istringstream good("# header\n1.5 2.5\n\n3 # trailing\n  4e0\t5\n");
  const auto s = wcrm::cli::read_sample(good, "mem");
  CHECK(s.size() == 5);
  CHECK(s.observations()[4] == 5.0);

  std::istringstream neg("1\n2\n3 -0.5\n");
  try {
    wcrm::cli::read_sample(neg, "mem");
    FAIL("negative value accepted");
  } catch (const wcrm::cli::InputError& e) {
    CHECK(std::string(e.what()).find("mem:3") != std::string::npos);
  }
  std::istringstream junk("1 two 3\n");
  CHECK_THROWS_AS(wcrm::cli::read_sample(junk, "mem"), wcrm::cli::InputError);
  std::istringstream empty("# nothing\n\n");
  CHECK_THROWS_AS(wcrm::cli::read_sample(empty, "mem"), wcrm::cli::InputError);
  std::istringstream inf("1 inf\n");
  CHECK_THROWS_AS(wcrm::cli::read_sample(inf, "mem"), wcrm::cli::InputError);
  CHECK_THROWS_AS(wcrm::cli::read_sample_file("/nonexistent/file.txt"), wcrm::cli::InputError);
}

TEST_CASE("entropy command") {
  auto r = run({"entropy", "--family", "exponential", "--lambda", "1", "--alpha", "0.5"});
  CHECK(r.code == 0);
  CHECK(std::stod(field(r.out, "analytic")) == Approx(10.0 / 9.0).epsilon(1e-9));
  CHECK(std::stod(field(r.out, "abs_diff")) < 1e-8);

  r = run({"entropy", "--family", "rayleigh", "--sigma", "1", "--alpha", "0.5", "--t", "2"});
  CHECK(r.code == 0);
  CHECK(std::stod(field(r.out, "analytic")) == Approx(2.0 / 3.0).epsilon(1e-9));
  CHECK(field(r.out, "t_independent") == "true");

  r = run({"entropy", "--family", "pareto", "--k", "1", "--a", "1", "--alpha", "0.5"});
  CHECK(r.code == 2);
  CHECK(field(r.out, "finite") == "false");

  r = run({"entropy", "--family", "lfr", "--a", "1", "--b", "1", "--alpha", "1.5", "--t", "0.5"});
  CHECK(r.code == 0);
  CHECK(field(r.out, "analytic") == "NA");

  CHECK(run({"entropy", "--family", "exponential", "--alpha", "0.5"}).code == 1);              // missing --lambda
  CHECK(run({"entropy", "--family", "exponential", "--sigma", "1", "--lambda", "1"}).code == 1);  // stray flag
  CHECK(run({"entropy", "--family", "exponential", "--lambda", "1", "--alpha", "1"}).code == 1);
  CHECK(run({"entropy", "--family", "gamma", "--lambda", "1"}).code == 1);
}

TEST_CASE("entropy command with a sample") {
  TempDir dir;
  const auto path = dir.file("s.txt", "1\n2\n");
  auto r = run({"entropy", "--input", path, "--alpha", "0.1"});
  CHECK(r.code == 0);
  CHECK(std::stod(field(r.out, "empirical")) == Approx((0.5 + std::pow(0.5, 1.9) * 1.5 - 1) / -0.9));
  r = run({"entropy", "--input", path, "--family", "rayleigh", "--sigma", "1", "--alpha", "0.1"});
  CHECK(!field(r.out, "empirical_abs_diff").empty());
  CHECK(run({"entropy", "--input", path, "--alpha", "0.1", "--t", "1"}).code == 1);
}

TEST_CASE("test command") {
  TempDir dir;
  const auto ball = write_values(dir, "ball.txt", wcrm::testing::ball_bearings());
  const auto rat = write_values(dir, "rat.txt", wcrm::testing::rat_survival());

  auto r = run({"test", "--input", ball, "--method", "bootstrap", "--B", "2000", "--alpha", "0.1", "--seed", "42"});
  CHECK(r.code == 0);
  CHECK(std::stod(field(r.out, "sigma_hat")) == Approx(57.23062).epsilon(1e-6));
  CHECK(field(r.out, "decision") == "accept");

  r = run({"test", "--input", rat, "--method", "bootstrap", "--B", "2000", "--alpha", "0.1", "--seed", "42"});
  CHECK(std::stod(field(r.out, "p_value")) < 0.05);
  CHECK(field(r.out, "decision") == "reject");

  r = run({"test", "--input", ball, "--method", "mc", "--reps", "1000", "--seed", "3"});
  CHECK(r.code == 0);
  CHECK(field(r.out, "p_value") == "NA");
  CHECK(field(r.out, "critical_value") != "NA");

  const auto neg = dir.file("neg.txt", "1\n2\n-3\n4\n5\n");
  r = run({"test", "--input", neg});
  CHECK(r.code == 1);
  CHECK(r.err.find(":3:") != std::string::npos);
  CHECK(run({"test", "--input", dir / "missing.txt"}).code == 1);
  CHECK(run({"test", "--input", dir.file("empty.txt", "")}).code == 1);
  CHECK(run({"test", "--input", dir.file("const.txt", "2 2 2 2 2 2")}).code == 1);
  CHECK(run({"test", "--input", ball, "--method", "magic"}).code == 1);
  CHECK(run({"test", "--input", ball, "--tail", "sideways"}).code == 1);
  CHECK(run({"test"}).code == 1);
}

TEST_CASE("outputs are reproducible and carry a manifest") {
  TempDir dir;
  const auto ball = write_values(dir, "ball.txt", wcrm::testing::ball_bearings());
  const std::vector<std::string> base{"test", "--input", ball, "--method", "bootstrap", "--B", "500", "--seed", "7"};
  auto a = base;
  a.insert(a.end(), {"--output", dir / "a.json"});
  auto b = base;
  b.insert(b.end(), {"--output", dir / "b.json", "--workers", "3"});
  REQUIRE(run(a).code == 0);
  REQUIRE(run(b).code == 0);
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
  const auto record = nlohmann::json::parse(slurp(dir / "a.json"));
  CHECK(record.at("sigma_hat").get<double>() == Approx(57.23062269).epsilon(1e-9));
  for (const auto& [key, value] : record.items()) CHECK_FALSE(value.is_structured());
  CHECK_FALSE(record.contains("timestamp"));
  const auto manifest = nlohmann::json::parse(slurp(dir / "a.json.manifest.json"));
  CHECK(manifest.at("command") == "test");
  CHECK(manifest.at("seed") == 7);
  CHECK(manifest.contains("timestamp"));

  REQUIRE(run({"test", "--input", ball, "--B", "500", "--seed", "7", "--method", "bootstrap", "--output",
               dir / "c.csv", "--format", "csv"})
              .code == 0);
  const std::string csv = slurp(dir / "c.csv");
  CHECK(csv.rfind("command,input,n,", 0) == 0);
}

TEST_CASE("power command") {
  TempDir dir;
  auto r = run({"power", "--family", "exponential", "--lambda", "2", "--n", "20", "--reps", "200",
                "--calibration-reps", "500", "--tests", "ASS", "KS", "--seed", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("test,family,params,n,alpha,alpha_prime,reps,power,std_err\n", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 3);

  const auto cfg = dir.file("cfg.json", R"({"alternatives":[{"family":"halfnormal","sigma":1}],
      "sample_sizes":[20],"reps":200,"calibration_reps":500,"seed":5,"tests":["ASS","CvM"]})");
  REQUIRE(run({"power", "--config", cfg, "--output", dir / "p1.csv"}).code == 0);
  REQUIRE(run({"power", "--config", cfg, "--output", dir / "p2.csv", "--workers", "2"}).code == 0);
  CHECK(slurp(dir / "p1.csv") == slurp(dir / "p2.csv"));
  CHECK(fs::exists(dir / "p1.csv.manifest.json"));
  REQUIRE(run({"power", "--config", cfg, "--output", dir / "p.json", "--format", "json"}).code == 0);
  const auto doc = nlohmann::json::parse(slurp(dir / "p.json"));
  CHECK(doc.at("rows").size() == 2);
  CHECK(doc.at("warnings").empty());
  CHECK(doc.at("rows")[1].at("alpha").is_null());

  CHECK(run({"power", "--config", cfg, "--family", "rayleigh", "--sigma", "1"}).code == 1);
  CHECK(run({"power", "--config", dir / "nope.json"}).code == 1);
  CHECK(run({"power", "--config", dir.file("broken.json", "{")}).code == 1);
  CHECK(run({"power", "--family", "exponential", "--lambda", "2", "--n", "20", "--tests", "JH"}).code == 1);
}

TEST_CASE("power config diagnostics") {
  const auto bad = nlohmann::json::parse(R"({
    "alternatives": [{"family": "exponential", "lamda": 2}, {"family": "foo"}, {"family": "lfr", "a": 1, "b": -1}],
    "sample_sizes": [20], "reps": -5, "tests": ["ASS", "BK"], "tail": "sideways", "colour": 1})");
  try {
    wcrm::cli::parse_power_config(bad);
    FAIL("accepted a malformed config");
  } catch (const wcrm::ConfigError& e) {
    const std::string msg = e.what();
    for (const char* expected :
         {"colour: unknown field", "alternatives[0].lambda: missing", "alternatives[0].lamda", "alternatives[1].family",
          "alternatives[2]:", "reps:", "tests: unknown test 'BK'", "tail:"}) {
      CHECK_MESSAGE(msg.find(expected) != std::string::npos, expected);
    }
  }
  CHECK_THROWS_AS(wcrm::cli::parse_power_config(nlohmann::json::parse(R"({"alternatives": []})")),
                  wcrm::ConfigError);
  CHECK_THROWS_AS(wcrm::cli::parse_power_config(nlohmann::json::parse("[1]")), wcrm::ConfigError);

  std::ifstream desk(std::string(WCRM_SOURCE_DIR) + "/configs/table3_desk.json");
  REQUIRE(desk.good());
  const auto c = wcrm::cli::parse_power_config(nlohmann::json::parse(desk));
  CHECK(c.alternatives.size() == 6);
  CHECK(c.alternatives[5] == wcrm::DistributionSpec::pareto(1, 5));
  CHECK(c.sample_sizes.size() == 5);
}

TEST_CASE("critical command") {
  auto r = run({"critical", "--n", "20", "--alpha", "0.1", "0.5", "--alpha-prime", "0.05", "--reps", "500"});
  CHECK(r.code == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 3);
  r = run({"critical", "--n", "20", "--reps", "500", "--tail", "two-sided"});
  CHECK(r.out.find("NA") == std::string::npos);
  CHECK(run({"critical", "--n", "3"}).code == 1);
  CHECK(run({"critical", "--n", "20", "--alpha", "1.5"}).code == 1);
}

TEST_CASE("qqplot command") {
  TempDir dir;
  const auto ball = write_values(dir, "ball.txt", wcrm::testing::ball_bearings());
  auto r = run({"qqplot", "--input", ball, "--output", dir / "qq.json", "--format", "json", "--svg", dir / "qq.svg"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(slurp(dir / "qq.json"));
  const double sigma = doc.at("sigma_hat").get<double>();
  REQUIRE(doc.at("rows").size() == 23);
  double worst = 0.0;
  for (const auto& row : doc.at("rows")) {
    worst = std::max(worst, std::abs(row.at("theoretical").get<double>() - row.at("empirical").get<double>()) / sigma);
  }
  CHECK(worst < 0.35);
  const std::string svg = slurp(dir / "qq.svg");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(std::count(svg.begin(), svg.end(), 'c') > 23);

  // Exact Rayleigh quantiles at the plotting positions land on the identity line.
  const auto spec = wcrm::DistributionSpec::rayleigh(2.5);
  std::vector<double> q;
  for (int i = 1; i <= 40; ++i) q.push_back(spec.quantile((i - 0.5) / 40));
  const auto perfect = write_values(dir, "perfect.txt", q);
  r = run({"qqplot", "--input", perfect});
  CHECK(std::stod(field(r.out, "max_scaled_deviation")) < 0.02);

  const auto rat = write_values(dir, "rat.txt", wcrm::testing::rat_survival());
  r = run({"qqplot", "--input", rat});
  CHECK(r.code == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 3 + 1 + 20);

  CHECK(run({"qqplot", "--input", dir.file("two.txt", "1 2")}).code == 1);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"entropy", "--alpha", "abc"}).code == 1);
}
