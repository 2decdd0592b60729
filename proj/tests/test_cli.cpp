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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "phylocount/cli.hpp"

using namespace phylocount;
using namespace phylocount::cli;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path temp_file(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("phylocount_test_" + name);
  std::filesystem::remove(p);
  return p;
}

}  // namespace

TEST_CASE("index selections") {
  CHECK(parse_n_spec("5") == std::vector<int>{5});
  CHECK(parse_n_spec("3..6") == std::vector<int>{3, 4, 5, 6});
  CHECK(parse_n_spec("400,100,200,100") == std::vector<int>{100, 200, 400});
  CHECK(parse_n_spec("1..2,7") == std::vector<int>{1, 2, 7});
  CHECK_THROWS_AS(parse_n_spec("6..3"), DomainError);
  CHECK_THROWS_AS(parse_n_spec("0"), DomainError);
  CHECK_THROWS_AS(parse_n_spec("x"), DomainError);
  CHECK_THROWS_AS(parse_n_spec(""), DomainError);
}

TEST_CASE("widths") {
  CHECK(parse_width("2^-10") == Rational(1) / 1024);
  CHECK(parse_width("3/7") == Rational(3) / 7);
  CHECK_THROWS_AS(parse_width("2^-0"), DomainError);
  CHECK_THROWS_AS(parse_width("-1"), DomainError);
}

TEST_CASE("table rows and sums") {
  auto r = run({"table", "--family", "sstar", "--n", "5"});
  CHECK(r.code == kExitPass);
  CHECK(r.out.find("row=1,10 sum=11") != std::string::npos);

  r = run({"table", "--family", "t", "--n", "4", "--format", "csv"});
  CHECK(r.code == kExitPass);
  CHECK(r.out == "family,n,k_min,k_max,row,sum\nt,4,1,3,\"1,10,15\",26\n");

  r = run({"table", "--family", "s", "--n", "1", "--format", "json"});
  CHECK(r.code == kExitPass);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j.size() == 1);
  CHECK(j[0]["row"] == nlohmann::json::array({"1"}));
  CHECK(j[0]["sum"] == "1");
}

TEST_CASE("big integers stay exact in machine formats") {
  const auto r = run({"table", "--family", "s", "--n", "60", "--format", "json"});
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j[0]["sum"] == "976939307467007552986994066961675455550246347757474482558637");
}

TEST_CASE("stats") {
  auto r = run({"stats", "--family", "t", "--n", "2", "--format", "json"});
  CHECK(r.code == kExitPass);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j[0]["mean"] == "7/4");
  CHECK(j[0]["variance"] == "3/16");
  CHECK(j[0]["closed_form"] == "agree");

  r = run({"stats", "--family", "fstar", "--n", "4..12", "--format", "csv"});
  CHECK(r.code == kExitPass);
  CHECK(r.out.find("DISAGREE") == std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({"table", "--family", "q", "--n", "5"}).code == kExitUsage);
  CHECK(run({"table", "--family", "s", "--n", "5..2"}).code == kExitUsage);
  CHECK(run({"table", "--family", "s"}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"verify", "--suite", "nope", "--n", "3"}).code == kExitUsage);
  CHECK(run({"verify", "--suite", "limits", "--n", "100"}).code == kExitUsage);
  CHECK(run({"compare", "--family", "s", "--n", "5"}).code == kExitUsage);
  CHECK(run({"oracle", "--n", "13"}).code == kExitUsage);
  CHECK(run({"table", "--family", "s", "--n", "3", "--format", "xml"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitPass);
}

TEST_CASE("verification suites") {
  auto r = run({"verify", "--suite", "identities", "--n", "1..40"});
  CHECK(r.code == kExitPass);
  CHECK(r.out.find("verify identities: PASS") != std::string::npos);

  r = run({"verify", "--suite", "roots", "--n", "1..60", "--format", "json"});
  CHECK(r.code == kExitPass);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.size() == 60 + 59);
  CHECK(j[59]["roots"].size() == 60);

  r = run({"verify", "--suite", "slc", "--n", "1..50"});
  CHECK(r.code == kExitPass);
  r = run({"verify", "--suite", "limits", "--n", "50,300"});
  CHECK(r.code == kExitPass);
}

TEST_CASE("oracle command") {
  const auto dump = temp_file("dump.jsonl");
  const auto r = run({"oracle", "--n", "6", "--dump", dump.string()});
  CHECK(r.code == kExitPass);
  CHECK(r.out.find("oracle: PASS") != std::string::npos);
  std::ifstream in(dump);
  std::string first;
  std::getline(in, first);
  CHECK(nlohmann::json::parse(first)["n"] == 1);
  std::filesystem::remove(dump);
}

TEST_CASE("compare emits csv") {
  const auto r = run({"compare", "--family", "t", "--n", "20,40"});
  CHECK(r.code == kExitPass);
  CHECK(r.out.rfind("n,family,quantity,exact,estimate,scaled_residual,error_order\n", 0) == 0);
}

TEST_CASE("cache build, reuse and validation") {
  const auto path = temp_file("cache.csv");
  auto r = run({"cache", "--family", "sstar", "--n", "20", "--cache", path.string()});
  CHECK(r.code == kExitPass);
  CHECK(r.out.find("rows_after=20") != std::string::npos);

  r = run({"table", "--family", "sstar", "--n", "25", "--cache", path.string(), "--format", "csv"});
  CHECK(r.code == kExitPass);
  r = run({"cache", "--family", "sstar", "--n", "1", "--cache", path.string()});
  CHECK(r.out.find("rows_before=25") != std::string::npos);

  CHECK(run({"cache", "--family", "s", "--n", "3", "--cache", path.string()}).code == kExitUsage);

  {
    std::ofstream bad(path, std::ios::app);
    bad << "sstar,99,1,1\n";
  }
  r = run({"cache", "--family", "sstar", "--n", "3", "--cache", path.string()});
  CHECK(r.code == kExitCheckFailed);
  std::filesystem::remove(path);
}

TEST_CASE("environment overrides") {
  setenv("PHYLOCOUNT_FORMAT", "csv", 1);
  setenv("PHYLOCOUNT_N", "3", 1);
  auto r = run({"table", "--family", "s"});
  CHECK(r.code == kExitPass);
  CHECK(r.out == "family,n,k_min,k_max,row,sum\ns,3,1,3,\"1,3,1\",5\n");
  r = run({"table", "--family", "s", "--n", "2", "--format", "plain"});
  CHECK(r.out == "family=s n=2 k_min=1 k_max=2 row=1,1 sum=2\n");
  unsetenv("PHYLOCOUNT_FORMAT");
  unsetenv("PHYLOCOUNT_N");
}

TEST_CASE("output is deterministic") {
  const std::vector<std::string> args{"stats", "--family", "s", "--n", "10..20", "--format", "json"};
  CHECK(run(args).out == run(args).out);
}
