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

#ifndef PHYLOCOUNT_GENPOLY_HPP_
#define PHYLOCOUNT_GENPOLY_HPP_

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "phylocount/numeric.hpp"

namespace phylocount::genpoly {

// Dense polynomial with integer coefficients, constant term first. Trailing
// zeros are never stored, so the zero polynomial has no coefficients and
// degree -1.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<BigInt> coeffs);
  IntPolynomial(std::initializer_list<long> coeffs);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<BigInt>& coeffs() const { return coeffs_; }
  BigInt coeff(int k) const;
  const BigInt& leading() const { return coeffs_.back(); }

  // Multiplicity of x = 0 as a root.
  int zero_multiplicity() const;

  IntPolynomial derivative() const;
  IntPolynomial shifted(int k) const;  // times x^k
  // Exact division by x^k; throws if x^k does not divide.
  IntPolynomial divided_by_x(int k = 1) const;

  Rational evaluate(const Rational& x) const;
  int sign_at(const Rational& x) const;
  // b^d p(a/b) for x = a/b in lowest terms; an integer with the sign of p(x).
  BigInt scaled_value(const Rational& x) const;
  BigInt evaluate(const BigInt& x) const;

  IntPolynomial& operator+=(const IntPolynomial& other);
  IntPolynomial& operator-=(const IntPolynomial& other);
  IntPolynomial& operator*=(const BigInt& factor);
  friend IntPolynomial operator+(IntPolynomial a, const IntPolynomial& b) { return a += b; }
  friend IntPolynomial operator-(IntPolynomial a, const IntPolynomial& b) { return a -= b; }
  friend IntPolynomial operator*(IntPolynomial a, const BigInt& f) { return a *= f; }
  friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b);
  friend bool operator==(const IntPolynomial& a, const IntPolynomial& b) {
    return a.coeffs_ == b.coeffs_;
  }

  std::string to_string() const;

 private:
  void normalize();
  std::vector<BigInt> coeffs_;
};

// S_n(x) = sum_k S*(n,k) x^k, built from
//   S_1 = 0, S_2 = x, S_n = (n-1) x S_{n-2} + x S'_{n-1}.
IntPolynomial s_star_poly(int n);
// S_0 .. S_{n_max}; S_0 = 1 is an internal seed.
std::vector<IntPolynomial> s_star_polys(int n_max);

// P_n(x) = sum_k T(n+1,k) x^k, built from
//   P_0 = 1, P_n = n x P_{n-1} + (x + x^2) P'_{n-1}.
IntPolynomial tree_poly(int n);
std::vector<IntPolynomial> tree_polys(int n_max);

// Isolating interval for one real root. lo == hi marks an exact rational
// root; otherwise the root lies in the open interval (lo, hi) and the
// polynomial has opposite nonzero signs at the two ends.
struct RootInterval {
  Rational lo;
  Rational hi;

  bool exact() const { return lo == hi; }
  Rational width() const { return hi - lo; }
  bool contains(const Rational& x) const {
    return exact() ? x == lo : (lo < x && x < hi);
  }
};

// Every point of `a` lies strictly below every point of `b`.
bool strictly_below(const RootInterval& a, const RootInterval& b);

struct RootIntervals {
  std::vector<RootInterval> intervals;  // increasing

  size_t size() const { return intervals.size(); }
  const RootInterval& operator[](size_t i) const { return intervals[i]; }
  bool ordered() const;
};

class IsolationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Rational default_isolation_width();  // 2^-48

// Isolates every root of `p` inside [lo, hi] into intervals of width at most
// `width`. The polynomial must have deg(p) simple real roots in the bracket;
// anything less raises IsolationError. Roots of the derivative bracket the
// candidate intervals (Rolle); `seeds` are optional extra sample points that
// are tried first, e.g. roots of a polynomial known to interlace with p.
RootIntervals isolate_real_roots(const IntPolynomial& p, const Rational& lo,
                                 const Rational& hi, const Rational& width,
                                 std::span<const Rational> seeds = {});

// Narrows one isolating interval of a root of `p` to width at most `width`.
// Exact rational roots of `p` sitting on the interval ends are divided out
// first, so `iv` may come from isolate_real_roots on the same polynomial.
RootInterval refine_root(const IntPolynomial& p, const RootInterval& iv, const Rational& width);

// Cauchy-style bound: every real root lies in [-bound, bound].
Rational root_bound(const IntPolynomial& p);

struct InterlacingReport {
  int n = 0;
  bool pass = false;
  std::string first_violation;  // empty on pass
  RootIntervals lower_odd;      // S_{2n-1}
  RootIntervals even;           // S_{2n}
  RootIntervals upper_odd;      // S_{2n+1}
};

// Checks the two interlacing chains between the roots of S_{2n-1}, S_{2n}
// and S_{2n+1} (n >= 2) on certified isolating intervals.
InterlacingReport verify_interlacing(int n, const Rational& width = default_isolation_width());
std::vector<InterlacingReport> verify_interlacing_upto(
    int n_max, const Rational& width = default_isolation_width());

struct TreeRootsReport {
  int n = 0;
  bool pass = false;
  std::string failure;
  int degree = 0;
  RootIntervals roots;
};

// P_n has n simple roots: one at 0 and n-1 in the open interval (-1, 0).
TreeRootsReport verify_tree_roots(int n, const Rational& width = default_isolation_width());
std::vector<TreeRootsReport> verify_tree_roots_upto(
    int n_max, const Rational& width = default_isolation_width());

struct SequenceCheck {
  bool ok = true;
  std::optional<int> first_failure;  // index k of the first failing term
  explicit operator bool() const { return ok; }
};

// a_k^2 > a_{k-1} a_{k+1} for every interior k. `row[i]` is a_{k_min+i}.
SequenceCheck check_slc(std::span<const BigInt> row, int k_min = 0);

// Newton's inequality for sum_{k=1}^N C_k x^k with only real roots:
//   C_k^2 >= C_{k+1} C_{k-1} (k/(k-1)) ((N-k+1)/(N-k)),  k = 2..N-1.
// `row[i]` is C_{i+1} and must have exactly N entries.
SequenceCheck check_newton(std::span<const BigInt> row, int N);

// Bivariate power series sum_{n<=N} sum_j c[n][j] x^j z^n with exact
// rational coefficients; products and exp are truncated after z^N.
class TruncatedSeries2 {
 public:
  explicit TruncatedSeries2(int order);

  int order() const { return order_; }
  const std::vector<Rational>& coeff(int n) const { return c_.at(static_cast<size_t>(n)); }
  Rational coeff(int n, int j) const;
  void set(int n, int j, const Rational& value);

  TruncatedSeries2& operator+=(const TruncatedSeries2& other);
  TruncatedSeries2& operator-=(const TruncatedSeries2& other);
  friend TruncatedSeries2 operator+(TruncatedSeries2 a, const TruncatedSeries2& b) { return a += b; }
  friend TruncatedSeries2 operator-(TruncatedSeries2 a, const TruncatedSeries2& b) { return a -= b; }
  friend TruncatedSeries2 operator*(const TruncatedSeries2& a, const TruncatedSeries2& b);

  TruncatedSeries2 times_x() const;
  // exp of a series with zero constant term, via n E_n = sum_k k H_k E_{n-k}.
  TruncatedSeries2 exp() const;
  Rational max_abs_coefficient() const;

 private:
  int order_;
  std::vector<std::vector<Rational>> c_;  // c_[n][j]
};

// H(x,z) = sum_{n>=1} sum_k T(n,k) x^k z^n / n!, truncated after z^N.
TruncatedSeries2 tree_bivariate_series(int N);

// Max |coefficient| of z + x (e^H - 1 - H) - H through z^N.
Rational functional_equation_residual(int N);

nlohmann::json to_json(const RootIntervals& roots);
nlohmann::json to_json(const InterlacingReport& report);
nlohmann::json to_json(const TreeRootsReport& report);

}  // namespace phylocount::genpoly

#endif  // PHYLOCOUNT_GENPOLY_HPP_
