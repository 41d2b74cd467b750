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

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "wcrm/distributions.hpp"
#include "wcrm/power.hpp"

namespace wcrm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitInfinite = 2;

// Unreadable or malformed input data.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Whitespace-separated decimals; '#' starts a comment that runs to the end of
// the line. `source` is used in error messages.
SampleData read_sample(std::istream& in, const std::string& source);
SampleData read_sample_file(const std::string& path);

// Throws ConfigError listing every offending field, one per line.
PowerStudyConfig parse_power_config(const nlohmann::json& config);

// Entry point shared by the executable and the tests. `args` excludes the
// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wcrm::cli
