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

// Independent reference values for the tests. Nothing here calls into the
// library: every quantity comes from a different formula than the one the
// library uses.

#ifndef PHYLOCOUNT_TESTS_REFERENCE_HPP_
#define PHYLOCOUNT_TESTS_REFERENCE_HPP_

#include <gmpxx.h>

#include <cmath>
#include <vector>

namespace ref {

inline mpz_class binom(long n, long k) {
  mpz_class r;
  if (k < 0 || k > n) return 0;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

inline mpz_class factorial(long n) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

inline mpz_class power(long base, long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(e));
  return r;
}

// S(n,k) = (1/k!) sum_j (-1)^j C(k,j) (k-j)^n.
inline mpz_class stirling2(long n, long k) {
  if (n == 0 && k == 0) return 1;
  if (k <= 0 || k > n) return 0;
  mpz_class total = 0;
  for (long j = 0; j <= k; ++j) {
    const mpz_class term = binom(k, j) * power(k - j, n);
    if (j % 2 == 0) {
      total += term;
    } else {
      total -= term;
    }
  }
  return total / factorial(k);
}

// Inclusion-exclusion over the set of singleton blocks.
inline mpz_class stirling2_star(long n, long k) {
  mpz_class total = 0;
  for (long j = 0; j <= k; ++j) {
    const mpz_class term = binom(n, j) * stirling2(n - j, k - j);
    if (j % 2 == 0) {
      total += term;
    } else {
      total -= term;
    }
  }
  return total;
}

// Bell numbers B_0..B_n from the Bell (Aitken) triangle.
inline std::vector<mpz_class> bell_numbers(long n) {
  std::vector<mpz_class> bell{1};
  std::vector<mpz_class> row{1};
  for (long i = 1; i <= n; ++i) {
    std::vector<mpz_class> next{row.back()};
    for (const auto& v : row) next.push_back(next.back() + v);
    bell.push_back(next.front());
    row = std::move(next);
  }
  return bell;
}

// Truncated power series in z with rational coefficients.
using Series = std::vector<mpq_class>;

inline Series mul(const Series& a, const Series& b) {
  Series c(a.size(), 0);
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; i + j < c.size(); ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

// exp(a) for a(0) = 0 by summing powers.
inline Series exp(const Series& a) {
  Series result(a.size(), 0);
  result[0] = 1;
  Series p = result;
  for (size_t k = 1; k < a.size(); ++k) {
    p = mul(p, a);
    for (auto& c : p) c /= static_cast<long>(k);
    for (size_t i = 0; i < a.size(); ++i) result[i] += p[i];
  }
  return result;
}

// t_1..t_n from A = z + (e^A - 1 - A), iterated to a fixed point; each
// round fixes at least one more coefficient.
inline std::vector<mpz_class> schroeder_numbers(long n) {
  Series a(static_cast<size_t>(n + 1), 0);
  for (long round = 0; round <= n; ++round) {
    Series e = exp(a);
    Series next(a.size(), 0);
    next[1] = 1;
    for (size_t i = 2; i < a.size(); ++i) next[i] = e[i] - a[i];
    a = std::move(next);
  }
  std::vector<mpz_class> t;
  for (long i = 1; i <= n; ++i) {
    const mpq_class v = a[static_cast<size_t>(i)] * factorial(i);
    t.push_back(v.get_num());
  }
  return t;
}

// Mean and variance of k under weights w[k - k_min], by direct summation.
struct Moments {
  mpq_class mean;
  mpq_class variance;
};

inline Moments moments(const std::vector<mpz_class>& w, long k_min) {
  mpz_class s0 = 0;
  mpz_class s1 = 0;
  mpz_class s2 = 0;
  for (size_t i = 0; i < w.size(); ++i) {
    const long k = k_min + static_cast<long>(i);
    s0 += w[i];
    s1 += w[i] * k;
    s2 += w[i] * k * k;
  }
  Moments m;
  m.mean = mpq_class(s1, s0);
  m.mean.canonicalize();
  mpq_class second(s2, s0);
  second.canonicalize();
  m.variance = second - m.mean * m.mean;
  return m;
}

}  // namespace ref

#endif  // PHYLOCOUNT_TESTS_REFERENCE_HPP_
