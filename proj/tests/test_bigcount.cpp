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

#include <sstream>

#include "doctest.h"
#include "phylocount/bigcount.hpp"
#include "reference.hpp"

using namespace phylocount;
using namespace phylocount::bigcount;

TEST_CASE("stirling rows match the explicit alternating-sum formula") {
  for (int n = 1; n <= 40; ++n) {
    const Row row = compute_row(Family::StirlingS, n);
    CHECK(row.k_min == 1);
    CHECK(row.k_max() == n);
    for (int k = 1; k <= n; ++k) CHECK(row.at(k) == ref::stirling2(n, k));
  }
}

TEST_CASE("singleton-free rows match inclusion-exclusion") {
  for (int n = 2; n <= 40; ++n) {
    const Row row = compute_row(Family::StirlingStar, n);
    CHECK(row.k_max() == n / 2);
    for (int k = 1; k <= n / 2; ++k) CHECK(row.at(k) == ref::stirling2_star(n, k));
  }
  CHECK(compute_row(Family::StirlingStar, 1).empty());
}

TEST_CASE("small rows quoted in the literature") {
  CHECK(compute_row(Family::StirlingStar, 4).values == std::vector<BigInt>{1, 3});
  CHECK(compute_row(Family::StirlingStar, 5).values == std::vector<BigInt>{1, 10});
  CHECK(compute_row(Family::Ttriangle, 4).values == std::vector<BigInt>{1, 10, 15});
  CHECK(tree_count_T(2, 1) == 1);
  for (int n = 2; n <= 30; ++n) CHECK(tree_count_T(n, 1) == 1);
  CHECK(bell_star(1) == 0);
}

TEST_CASE("row sums give the Bell, singleton-free Bell and Schroeder numbers") {
  const auto bell_ref = ref::bell_numbers(60);
  const auto b = sequence(SequenceKind::Bell, 60);
  for (int n = 1; n <= 60; ++n) CHECK(b[n] == bell_ref[static_cast<size_t>(n)]);

  const auto bs = sequence(SequenceKind::BellStar, 60);
  for (int n = 1; n <= 60; ++n) {
    BigInt total = 0;
    for (int k = 1; k <= n / 2; ++k) total += ref::stirling2_star(n, k);
    CHECK(bs[n] == total);
  }

  const auto t_ref = ref::schroeder_numbers(12);
  const auto t = sequence(SequenceKind::SchroederT, 12);
  for (int n = 1; n <= 12; ++n) {
    CHECK(t[n] == t_ref[static_cast<size_t>(n - 1)]);
    CHECK(compute_row(Family::Ttriangle, n).sum() == t[n]);
  }
  CHECK(t[1] == 1);
  CHECK(t[2] == 1);
  CHECK(t[3] == 4);
  CHECK(t[4] == 26);
}

TEST_CASE("tree counts equal shifted singleton-free counts") {
  for (int n = 2; n <= 25; ++n) {
    for (int m = 1; m < n; ++m) {
      CHECK(tree_count_T(n, m) == ref::stirling2_star(n + m - 1, m));
    }
  }
}

TEST_CASE("reflected families") {
  for (int n = 1; n <= 20; ++n) {
    for (int k = 1; k <= n; ++k) {
      CHECK(semilabeled_F(n, k) == ref::stirling2(n, n - k + 1));
      CHECK(phylo_F_star(n, k) == ref::stirling2_star(n, n - k + 1));
    }
  }
}

TEST_CASE("Becker count identity and the alternating sum") {
  const auto b = sequence(SequenceKind::Bell, 120);
  const auto bs = sequence(SequenceKind::BellStar, 121);
  for (int n = 1; n <= 120; ++n) CHECK(b[n] == bs[n + 1] + bs[n]);
  for (int n = 2; n <= 60; ++n) CHECK(bell_star_alternating(n) == bs[n]);
  CHECK_THROWS_AS(bell_star_alternating(1), DomainError);
}

TEST_CASE("row generator streams the same rows as compute_row") {
  for (Family f : {Family::StirlingS, Family::StirlingStar, Family::Ttriangle}) {
    RowGenerator gen(f);
    for (int n = 1; n <= 30; ++n) {
      const Row& row = gen.advance_to(n);
      const Row direct = compute_row(f, n);
      CHECK(row.n == n);
      CHECK(row.k_min == direct.k_min);
      CHECK(row.values == direct.values);
    }
    CHECK_THROWS_AS(gen.advance_to(3), DomainError);
  }
}

TEST_CASE("cache files round-trip and reject tampering") {
  CountTriangle tri(Family::StirlingStar);
  tri.row(25);
  std::stringstream buffer;
  tri.write_cache(buffer);
  const std::string text = buffer.str();

  std::stringstream in(text);
  CountTriangle back = CountTriangle::read_cache(in);
  CHECK(back.family() == Family::StirlingStar);
  CHECK(back.max_row() == 25);
  for (int n = 1; n <= 25; ++n) CHECK(back.row(n).values == tri.row(n).values);
  CHECK(back.at(30, 3) == ref::stirling2_star(30, 3));

  std::string bad = text;
  bad.replace(bad.find("sstar,5,"), 8, "sstar,6,");
  std::stringstream bad_in(bad);
  CHECK_THROWS_AS(CountTriangle::read_cache(bad_in), DomainError);

  std::stringstream empty;
  CHECK_THROWS_AS(CountTriangle::read_cache(empty), DomainError);
}

TEST_CASE("family tokens and argument checks") {
  for (Family f : {Family::StirlingS, Family::StirlingStar, Family::Ttriangle}) {
    CHECK(parse_family(family_token(f)) == f);
  }
  CHECK_THROWS_AS(parse_family("q"), DomainError);
  CHECK_THROWS_AS(bell(0), DomainError);
  CHECK_THROWS_AS(tree_count_via_partition(1, 1), DomainError);
  CHECK(stirling2(5, 7) == 0);
}
