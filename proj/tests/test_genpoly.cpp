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

#include <vector>

#include "doctest.h"
#include "phylocount/bigcount.hpp"
#include "phylocount/genpoly.hpp"
#include "reference.hpp"

using namespace phylocount;
using namespace phylocount::genpoly;

namespace {

Rational q(long a, long b) { return Rational(a) / b; }

// Number of sign changes of p on a fine rational grid over (lo, hi); a crude
// but independent count of the real roots there.
int grid_sign_changes(const IntPolynomial& p, const Rational& lo, const Rational& hi, int steps) {
  int changes = 0;
  int last = 0;
  for (int i = 0; i <= steps; ++i) {
    const Rational x = lo + (hi - lo) * i / steps;
    const int s = p.sign_at(x);
    if (s != 0 && last != 0 && s != last) ++changes;
    if (s != 0) last = s;
  }
  return changes;
}

}  // namespace

TEST_CASE("polynomial coefficients are the triangle rows") {
  const auto polys = s_star_polys(30);
  for (int n = 2; n <= 30; ++n) {
    for (int k = 0; k <= n; ++k) CHECK(polys[n].coeff(k) == ref::stirling2_star(n, k));
  }
  const auto trees = tree_polys(20);
  for (int n = 1; n <= 20; ++n) {
    CHECK(trees[n].coeff(0) == 0);
    for (int k = 1; k <= n; ++k) CHECK(trees[n].coeff(k) == bigcount::tree_count_T(n + 1, k));
  }
  CHECK(s_star_poly(4) == IntPolynomial{0, 1, 3});
  CHECK(s_star_poly(5) == IntPolynomial{0, 1, 10});
  CHECK(tree_poly(2) == IntPolynomial{0, 1, 3});
}

TEST_CASE("small polynomials have exact rational roots") {
  const Rational w = default_isolation_width();
  const auto r4 = isolate_real_roots(s_star_poly(4), -1, 1, w);
  REQUIRE(r4.size() == 2);
  CHECK(r4[0].exact());
  CHECK(r4[0].lo == q(-1, 3));
  CHECK(r4[1].lo == 0);

  const auto r5 = isolate_real_roots(s_star_poly(5), -1, 1, w);
  REQUIRE(r5.size() == 2);
  CHECK(r5[0].lo == q(-1, 10));
  CHECK(r5[1].lo == 0);
}

TEST_CASE("isolated intervals are certified") {
  // (x - 1/3)(x + 2)(x - 5)(2x + 7)
  const IntPolynomial p = IntPolynomial{-1, 3} * IntPolynomial{2, 1} * IntPolynomial{-5, 1} *
                          IntPolynomial{7, 2};
  const Rational w = q(1, 1 << 20);
  const auto roots = isolate_real_roots(p, -10, 10, w);
  REQUIRE(roots.size() == 4);
  CHECK(roots.ordered());
  const std::vector<Rational> expected{q(-7, 2), -2, q(1, 3), 5};
  for (size_t i = 0; i < 4; ++i) CHECK(roots[i].contains(expected[i]));

  const IntPolynomial irrational{-2, 0, 1};  // x^2 - 2
  const auto sq = isolate_real_roots(irrational, -2, 2, w);
  REQUIRE(sq.size() == 2);
  for (const auto& iv : sq.intervals) {
    CHECK_FALSE(iv.exact());
    CHECK(iv.width() <= w);
    CHECK(irrational.sign_at(iv.lo) * irrational.sign_at(iv.hi) < 0);
  }
  const auto fine = refine_root(irrational, sq[1], q(1, 1 << 30));
  CHECK(fine.width() <= q(1, 1 << 30));
  CHECK(fine.lo * fine.lo < 2);
  CHECK(fine.hi * fine.hi > 2);

  CHECK_THROWS_AS(isolate_real_roots(IntPolynomial{1, 0, 1}, -5, 5, w), IsolationError);
}

TEST_CASE("tree polynomials have one root at 0 and the rest in (-1, 0)") {
  const auto reports = verify_tree_roots_upto(40);
  REQUIRE(reports.size() == 40);
  for (const auto& rep : reports) {
    CHECK(rep.pass);
    CHECK(rep.degree == rep.n);
    CHECK(static_cast<int>(rep.roots.size()) == rep.n);
    CHECK(rep.roots.intervals.back().exact());
    CHECK(rep.roots.intervals.back().lo == 0);
    for (size_t i = 0; i + 1 < rep.roots.size(); ++i) {
      CHECK(rep.roots[i].lo > -1);
      CHECK(rep.roots[i].hi < 0);
    }
  }
  // Cross-check the root count against a brute-force sign scan.
  for (int n = 2; n <= 8; ++n) {
    CHECK(grid_sign_changes(tree_poly(n).divided_by_x(), -1, 0, 20000) == n - 1);
  }
}

TEST_CASE("interlacing chains") {
  const auto reports = verify_interlacing_upto(20);
  for (const auto& rep : reports) {
    INFO("n = " << rep.n << " " << rep.first_violation);
    CHECK(rep.pass);
    CHECK(static_cast<int>(rep.even.size()) == rep.n);
    CHECK(static_cast<int>(rep.lower_odd.size()) == rep.n - 1);
    CHECK(static_cast<int>(rep.upper_odd.size()) == rep.n);
  }
  const auto single = verify_interlacing(7, q(1, 1 << 24));
  CHECK(single.pass);
  for (const auto& iv : single.even.intervals) CHECK(iv.width() <= q(1, 1 << 24));
}

TEST_CASE("strict log-concavity and Newton's inequality") {
  const std::vector<BigInt> good{1, 4, 6, 4, 1};
  CHECK(check_slc(good));
  CHECK(check_newton(good, 5));
  const std::vector<BigInt> flat{1, 1, 1};
  const auto bad = check_slc(flat, 3);
  CHECK_FALSE(bad);
  REQUIRE(bad.first_failure.has_value());
  CHECK(*bad.first_failure == 4);
  // Strictly log-concave, yet too flat for a real-rooted cubic.
  const std::vector<BigInt> tight{100, 200, 101};
  CHECK(check_slc(tight));
  CHECK_FALSE(check_newton(tight, 3));
  for (int n = 3; n <= 60; ++n) {
    const auto row = bigcount::compute_row(bigcount::Family::StirlingS, n);
    CHECK(check_slc(row.values, 1));
    CHECK(check_newton(row.values, n));
  }
}

TEST_CASE("truncated bivariate series") {
  TruncatedSeries2 z(8);
  z.set(1, 0, 1);
  const auto e = z.exp();
  for (int n = 0; n <= 8; ++n) CHECK(e.coeff(n, 0) == Rational(1) / ref::factorial(n));

  const auto h = tree_bivariate_series(10);
  for (int n = 1; n <= 10; ++n) {
    for (int k = 1; k < n; ++k) {
      CHECK(h.coeff(n, k) * ref::factorial(n) == Rational(bigcount::tree_count_T(n, k)));
    }
  }
  CHECK(sgn(functional_equation_residual(12)) == 0);
}

TEST_CASE("json rendering of intervals") {
  const auto r = isolate_real_roots(s_star_poly(4), -1, 1, default_isolation_width());
  const auto j = to_json(r);
  REQUIRE(j.is_array());
  CHECK(j.size() == 2);
}
