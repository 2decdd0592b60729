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

#include <set>
#include <sstream>

#include "doctest.h"
#include "phylocount/bigcount.hpp"
#include "phylocount/oracle.hpp"
#include "reference.hpp"

using namespace phylocount;
using namespace phylocount::oracle;

TEST_CASE("partition enumeration matches the explicit formulas") {
  for (int n = 1; n <= 10; ++n) {
    const auto all = enumerate_partitions(n);
    const auto free = enumerate_partitions(n, 2);
    for (int k = 1; k <= n; ++k) {
      CHECK(mpz_class(static_cast<unsigned long>(all[k])) == ref::stirling2(n, k));
      const unsigned long f = static_cast<size_t>(k) < free.size() ? free[k] : 0;
      CHECK(mpz_class(f) == ref::stirling2_star(n, k));
    }
  }
}

TEST_CASE("partitions are canonical and distinct") {
  std::set<std::string> seen;
  for_each_partition(5, 1, [&](const SetPartition& p) {
    CHECK(canonical(p) == p);
    CHECK(seen.insert(p.to_string()).second);
  });
  CHECK(seen.size() == 52);
  CHECK(seen.count("{1}{2,3}{4}{5}") == 1);
}

TEST_CASE("Becker bijection examples") {
  SetPartition a{3, {{1}, {2, 3}}};
  CHECK(becker_map(a).to_string() == "{1,4}{2,3}");
  SetPartition b{3, {{1}, {2}, {3}}};
  CHECK(becker_map(b).to_string() == "{1,2,3,4}");
  CHECK(becker_inverse(becker_map(a)) == canonical(a));
}

TEST_CASE("Becker bijection is one-to-one onto singleton-free partitions") {
  for (int n = 1; n <= 8; ++n) {
    std::set<std::string> images;
    for_each_partition(n, 1, [&](const SetPartition& p) {
      bool singleton = false;
      for (const auto& blk : p.blocks) singleton = singleton || blk.size() == 1;
      if (!singleton) return;
      const auto q = becker_map(p);
      for (const auto& blk : q.blocks) CHECK(blk.size() >= 2);
      images.insert(q.to_string());
      CHECK(becker_inverse(q) == canonical(p));
    });
    mpz_class expected = 0;
    for (int k = 1; k <= (n + 1) / 2; ++k) expected += ref::stirling2_star(n + 1, k);
    CHECK(mpz_class(static_cast<unsigned long>(images.size())) == expected);
  }
}

TEST_CASE("tree enumeration matches the reflected triangles") {
  for (int n = 1; n <= 7; ++n) {
    for (int k = 1; k <= n; ++k) {
      CHECK(mpz_class(static_cast<unsigned long>(enumerate_semilabeled(n, k))) ==
            ref::stirling2(n, n - k + 1));
      CHECK(mpz_class(static_cast<unsigned long>(enumerate_phylo(n, k))) ==
            ref::stirling2_star(n, n - k + 1));
    }
  }
  // Three labeled leaves: one star and three cherries.
  CHECK(enumerate_phylo_by_leaves(3, 1) == 1);
  CHECK(enumerate_phylo_by_leaves(3, 2) == 3);
  CHECK(enumerate_phylo_by_leaves(2, 1) == 1);
  std::uint64_t total = 0;
  for (int m = 1; m < 4; ++m) total += enumerate_phylo_by_leaves(4, m);
  CHECK(total == 26);
}

TEST_CASE("enumerated trees satisfy their defining properties") {
  for (const auto& t : phylo_trees(5, 3)) {
    CHECK(is_phylogenetic(t));
    CHECK(is_semilabeled(t));
    CHECK(t.vertex_count() == 5);
    CHECK(t.leaf_count() == 3);
  }
  std::set<std::string> seen;
  for (const auto& t : semilabeled_trees(4, 2)) CHECK(seen.insert(t.canonical()).second);
  CHECK(seen.size() == static_cast<size_t>(ref::stirling2(4, 3).get_ui()));
}

TEST_CASE("size caps") {
  CHECK_THROWS_AS(enumerate_partitions(kMaxPartitionSize + 1), SizeCapError);
  CHECK_THROWS_AS(enumerate_semilabeled(kMaxTreeVertices + 1, 2), SizeCapError);
}

TEST_CASE("json lines dumps") {
  std::ostringstream parts;
  dump_partitions(parts, 3, 1);
  int lines = 0;
  std::istringstream in(parts.str());
  for (std::string line; std::getline(in, line);) {
    CHECK(nlohmann::json::parse(line).contains("blocks"));
    ++lines;
  }
  CHECK(lines == 5);
  std::ostringstream trees;
  dump_trees(trees, 3, 3, true);  // the star on three leaves
  CHECK(nlohmann::json::parse(trees.str().substr(0, trees.str().find('\n')))["kind"] ==
        "phylogenetic");
}
