// Copyright 2026 The phylocount Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PHYLOCOUNT_CLI_HPP_
#define PHYLOCOUNT_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "phylocount/numeric.hpp"

namespace phylocount::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

enum class Format { Plain, Csv, Json };

// Index selection: "N", "A..B", or a comma-separated list such as
// "100,200,400". Values come back sorted and unique.
std::vector<int> parse_n_spec(const std::string& text);

// "2^-K" or any rational such as "1/1024".
Rational parse_width(const std::string& text);

// Runs one command line (without the program name). Options not given on
// the command line fall back to PHYLOCOUNT_* environment variables.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace phylocount::cli

#endif  // PHYLOCOUNT_CLI_HPP_
