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

#include "phylocount/genpoly.hpp"


#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "phylocount/bigcount.hpp"

namespace phylocount::genpoly {

// ---------------------------------------------------------------------------
// IntPolynomial

IntPolynomial::IntPolynomial(std::vector<BigInt> coeffs) : coeffs_(std::move(coeffs)) {
  normalize();
}

IntPolynomial::IntPolynomial(std::initializer_list<long> coeffs) {
  for (long c : coeffs) coeffs_.emplace_back(c);
  normalize();
}

void IntPolynomial::normalize() {
  while (!coeffs_.empty() && sgn(coeffs_.back()) == 0) coeffs_.pop_back();
}

BigInt IntPolynomial::coeff(int k) const {
  if (k < 0 || k > degree()) return 0;
  return coeffs_[static_cast<size_t>(k)];
}

int IntPolynomial::zero_multiplicity() const {
  int k = 0;
  while (k <= degree() && sgn(coeffs_[static_cast<size_t>(k)]) == 0) ++k;
  return k;
}

IntPolynomial IntPolynomial::derivative() const {
  std::vector<BigInt> out;
  for (int k = 1; k <= degree(); ++k) {
    out.push_back(coeffs_[static_cast<size_t>(k)] * k);
  }
  return IntPolynomial(std::move(out));
}

IntPolynomial IntPolynomial::shifted(int k) const {
  if (is_zero() || k == 0) return *this;
  std::vector<BigInt> out(static_cast<size_t>(k), BigInt(0));
  out.insert(out.end(), coeffs_.begin(), coeffs_.end());
  return IntPolynomial(std::move(out));
}

IntPolynomial IntPolynomial::divided_by_x(int k) const {
  if (k > zero_multiplicity() && !is_zero()) {
    throw DomainError("divided_by_x: x^" + std::to_string(k) + " does not divide");
  }
  if (is_zero()) return *this;
  return IntPolynomial(std::vector<BigInt>(coeffs_.begin() + k, coeffs_.end()));
}

Rational IntPolynomial::evaluate(const Rational& x) const {
  Rational acc = 0;
  for (int k = degree(); k >= 0; --k) {
    acc = acc * x + Rational(coeffs_[static_cast<size_t>(k)]);
  }
  return acc;
}

BigInt IntPolynomial::evaluate(const BigInt& x) const {
  BigInt acc = 0;
  for (int k = degree(); k >= 0; --k) {
    acc = acc * x + coeffs_[static_cast<size_t>(k)];
  }
  return acc;
}

BigInt IntPolynomial::scaled_value(const Rational& x) const {
  if (is_zero()) return 0;
  // sum c_k a^k b^(d-k) = b^d p(a/b)
  const BigInt& a = x.get_num();
  const BigInt& b = x.get_den();
  const int d = degree();
  BigInt acc = coeffs_.back();
  if (b == 1) {
    for (int k = d - 1; k >= 0; --k) acc = acc * a + coeffs_[static_cast<size_t>(k)];
    return acc;
  }
  BigInt term;
  if (mpz_popcount(b.get_mpz_t()) == 1) {
    const auto shift = static_cast<mp_bitcnt_t>(mpz_scan1(b.get_mpz_t(), 0));
    for (int k = d - 1; k >= 0; --k) {
      acc *= a;
      mpz_mul_2exp(term.get_mpz_t(), coeffs_[static_cast<size_t>(k)].get_mpz_t(),
                   shift * static_cast<mp_bitcnt_t>(d - k));
      acc += term;
    }
    return acc;
  }
  BigInt power = 1;
  for (int k = d - 1; k >= 0; --k) {
    power *= b;
    acc = acc * a + coeffs_[static_cast<size_t>(k)] * power;
  }
  return acc;
}

int IntPolynomial::sign_at(const Rational& x) const { return sgn(scaled_value(x)); }

IntPolynomial& IntPolynomial::operator+=(const IntPolynomial& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size());
  for (size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  normalize();
  return *this;
}

IntPolynomial& IntPolynomial::operator-=(const IntPolynomial& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size());
  for (size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  normalize();
  return *this;
}

IntPolynomial& IntPolynomial::operator*=(const BigInt& factor) {
  for (auto& c : coeffs_) c *= factor;
  normalize();
  return *this;
}

IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<BigInt> out(a.coeffs_.size() + b.coeffs_.size() - 1, BigInt(0));
  for (size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (size_t j = 0; j < b.coeffs_.size(); ++j) {
      mpz_addmul(out[i + j].get_mpz_t(), a.coeffs_[i].get_mpz_t(), b.coeffs_[j].get_mpz_t());
    }
  }
  return IntPolynomial(std::move(out));
}

std::string IntPolynomial::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (int k = degree(); k >= 0; --k) {
    const BigInt& c = coeffs_[static_cast<size_t>(k)];
    if (sgn(c) == 0) continue;
    if (!first) out << (sgn(c) > 0 ? " + " : " - ");
    else if (sgn(c) < 0) out << "-";
    const BigInt mag = abs(c);
    if (mag != 1 || k == 0) out << mag.get_str(10);
    if (k >= 1) out << "x";
    if (k >= 2) out << "^" << k;
    first = false;
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Generating polynomials

std::vector<IntPolynomial> s_star_polys(int n_max) {
  std::vector<IntPolynomial> out;
  out.emplace_back(IntPolynomial{1});  // S_0
  if (n_max >= 1) out.emplace_back();  // S_1 = 0
  for (int n = 2; n <= n_max; ++n) {
    const IntPolynomial& two_back = out[static_cast<size_t>(n - 2)];
    const IntPolynomial& one_back = out[static_cast<size_t>(n - 1)];
    IntPolynomial next = (two_back * BigInt(n - 1)).shifted(1);
    next += one_back.derivative().shifted(1);
    out.push_back(std::move(next));
  }
  return out;
}

IntPolynomial s_star_poly(int n) {
  if (n < 1) throw DomainError("s_star_poly: n must be >= 1");
  return s_star_polys(n).back();
}

std::vector<IntPolynomial> tree_polys(int n_max) {
  std::vector<IntPolynomial> out;
  out.emplace_back(IntPolynomial{1});  // P_0
  const IntPolynomial x_plus_x2{0, 1, 1};
  for (int n = 1; n <= n_max; ++n) {
    const IntPolynomial& prev = out.back();
    IntPolynomial next = (prev * BigInt(n)).shifted(1);
    next += x_plus_x2 * prev.derivative();
    out.push_back(std::move(next));
  }
  return out;
}

IntPolynomial tree_poly(int n) {
  if (n < 0) throw DomainError("tree_poly: n must be >= 0");
  return tree_polys(n).back();
}

// ---------------------------------------------------------------------------
// Root isolation

bool strictly_below(const RootInterval& a, const RootInterval& b) {
  if (a.hi < b.lo) return true;
  // A shared endpoint is fine unless both roots sit exactly on it.
  return a.hi == b.lo && !(a.exact() && b.exact());
}

bool RootIntervals::ordered() const {
  for (size_t i = 1; i < intervals.size(); ++i) {
    if (!strictly_below(intervals[i - 1], intervals[i])) return false;
  }
  return true;
}

Rational default_isolation_width() {
  Rational w(1);
  mpq_div_2exp(w.get_mpq_t(), w.get_mpq_t(), 48);
  return w;
}

Rational root_bound(const IntPolynomial& p) {
  if (p.degree() < 1) return 1;
  BigInt largest = 0;
  for (int k = 0; k < p.degree(); ++k) largest = std::max(largest, BigInt(abs(p.coeff(k))));
  BigInt ratio;
  const BigInt lead = abs(p.leading());
  mpz_cdiv_q(ratio.get_mpz_t(), largest.get_mpz_t(), lead.get_mpz_t());
  return Rational(ratio + 1);
}

namespace {

// p / (b x - a) for the exact root a/b; throws unless the division is exact.
IntPolynomial divide_by_linear(const IntPolynomial& p, const Rational& root) {
  const BigInt& a = root.get_num();
  const BigInt& b = root.get_den();
  const int d = p.degree();
  std::vector<BigInt> q(static_cast<size_t>(d));
  BigInt carry = p.coeff(d);
  for (int i = d - 1; i >= 0; --i) {
    if (!mpz_divisible_p(carry.get_mpz_t(), b.get_mpz_t())) {
      throw IsolationError("exact root " + to_string(root) + " does not divide");
    }
    q[static_cast<size_t>(i)] = carry / b;
    carry = p.coeff(i) + a * q[static_cast<size_t>(i)];
  }
  if (sgn(carry) != 0) {
    throw IsolationError("exact root " + to_string(root) + " leaves a remainder");
  }
  return IntPolynomial(std::move(q));
}

struct Scan {
  std::optional<Rational> exact_root;
  std::vector<RootInterval> intervals;
};

// Sign changes of p between consecutive sorted sample points.
Scan scan(const IntPolynomial& p, const std::vector<Rational>& samples) {
  Scan out;
  int prev_sign = 0;
  for (size_t i = 0; i < samples.size(); ++i) {
    const int s = p.sign_at(samples[i]);
    if (s == 0) {
      out.exact_root = samples[i];
      return out;
    }
    if (i > 0 && s != prev_sign) out.intervals.push_back({samples[i - 1], samples[i]});
    prev_sign = s;
  }
  return out;
}

std::vector<Rational> sample_points(const Rational& lo, const Rational& hi,
                                    std::span<const Rational> extra) {
  std::vector<Rational> pts{lo, hi};
  for (const auto& x : extra) {
    if (lo < x && x < hi) pts.push_back(x);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

// Thrown by the seeds-only mode when the samples miss some roots.
struct SeedMiss {};

std::vector<RootInterval> isolate_core(const IntPolynomial& p, const Rational& lo,
                                       const Rational& hi, std::span<const Rational> seeds,
                                       bool seeds_only = false);

std::vector<RootInterval> deflate_and_isolate(const IntPolynomial& p, const Rational& root,
                                              const Rational& lo, const Rational& hi,
                                              std::vector<Rational> seeds, bool seeds_only) {
  const IntPolynomial q = divide_by_linear(p, root);
  if (q.sign_at(root) == 0) {
    throw IsolationError("root " + to_string(root) + " is not simple");
  }
  seeds.push_back(root);
  std::vector<RootInterval> out = isolate_core(q, lo, hi, seeds, seeds_only);
  out.push_back({root, root});
  std::sort(out.begin(), out.end(),
            [](const RootInterval& x, const RootInterval& y) { return x.lo < y.lo; });
  return out;
}

constexpr int kMaxRefineRounds = 4000;

std::vector<RootInterval> isolate_core(const IntPolynomial& p, const Rational& lo,
                                       const Rational& hi, std::span<const Rational> seeds,
                                       bool seeds_only) {
  const int d = p.degree();
  if (d < 0) throw IsolationError("cannot isolate the roots of the zero polynomial");
  if (d == 0) return {};
  if (d == 1) {
    const Rational root = Rational(-p.coeff(0)) / Rational(p.coeff(1));
    if (root < lo || root > hi) {
      throw IsolationError("linear root " + to_string(root) + " outside the bracket");
    }
    return {{root, root}};
  }

  if (!seeds.empty()) {
    const auto pts = sample_points(lo, hi, seeds);
    Scan s = scan(p, pts);
    if (s.exact_root) return deflate_and_isolate(p, *s.exact_root, lo, hi, pts, seeds_only);
    if (static_cast<int>(s.intervals.size()) == d) return s.intervals;
  }
  if (seeds_only) throw SeedMiss{};

  // Rolle: between consecutive critical points p is monotone, so sampling
  // at the isolating intervals of p' finds every simple root once those
  // intervals are narrow enough.
  const IntPolynomial dp = p.derivative();
  std::vector<RootInterval> crit = isolate_core(dp, lo, hi, {});
  for (int round = 0; round < kMaxRefineRounds; ++round) {
    std::vector<Rational> extra;
    for (const auto& c : crit) {
      extra.push_back(c.lo);
      extra.push_back(c.hi);
    }
    const auto pts = sample_points(lo, hi, extra);
    Scan s = scan(p, pts);
    if (s.exact_root) return deflate_and_isolate(p, *s.exact_root, lo, hi, pts, false);
    if (static_cast<int>(s.intervals.size()) == d) return s.intervals;
    for (auto& c : crit) {
      if (c.exact()) continue;
      const Rational mid = (c.lo + c.hi) / 2;
      const int sm = dp.sign_at(mid);
      if (sm == 0) {
        c = {mid, mid};
      } else if (sm == dp.sign_at(c.lo)) {
        c.lo = mid;
      } else {
        c.hi = mid;
      }
    }
  }
  throw IsolationError("found fewer than " + std::to_string(d) +
                       " simple real roots in the bracket");
}

// p(x) as sign * mantissa * 2^exponent, from the exact scaled Horner value.
struct Approx {
  int sign = 0;
  long double mantissa = 0;  // in [1, 2)
  long exponent = 0;
};

long double log2_of(const BigInt& v) {
  long e = 0;
  const double m = std::fabs(mpz_get_d_2exp(&e, v.get_mpz_t()));
  return static_cast<long double>(e) + std::log2(static_cast<long double>(m));
}

Approx approximate(const IntPolynomial& p, const Rational& x) {
  Approx out;
  const BigInt scaled = p.scaled_value(x);
  out.sign = sgn(scaled);
  if (out.sign == 0) return out;
  // p(x) = scaled / den^d
  const long double l2 =
      log2_of(scaled) - static_cast<long double>(std::max(p.degree(), 0)) * log2_of(x.get_den());
  const long double whole = std::floor(l2);
  out.exponent = static_cast<long>(whole);
  out.mantissa = std::exp2(l2 - whole);
  return out;
}

// Smallest L with span / 2^L <= width.
unsigned halvings_needed(const Rational& span, const Rational& width) {
  Rational q = span / width;
  unsigned l = 0;
  while (q > 1) {
    mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), 1);
    ++l;
  }
  return l;
}

// Quadratic interval refinement: a secant guess picks one of N grid cells,
// exact signs at the cell ends confirm it, and N squares on every success.
// Only exact sign evaluations decide the returned interval. The grid never
// gets finer than the target width, which keeps denominators short.
//
// Besides the absolute width, an interval must end up no wider than its
// distance from 0. Roots of S_n and P_n crowd towards 0 geometrically, and
// this keeps neighbouring tiny roots and their seeds apart.
class Refiner {
 public:
  Refiner(const IntPolynomial& p, const Rational& width) : p_(p), width_(width) {}

  RootInterval refine(RootInterval iv) const {
    if (iv.exact()) return iv;
    Approx va = approximate(p_, iv.lo);
    Approx vb = approximate(p_, iv.hi);
    unsigned log_cells = 2;
    for (;;) {
      const Rational span = iv.hi - iv.lo;
      const Rational gap = distance_from_zero(iv);
      const bool clear = sgn(gap) > 0;
      if (clear && span <= width_ && span <= gap) break;
      const unsigned cap = clear ? halvings_needed(span, gap < width_ ? gap : width_) : 62u;
      const unsigned lc = std::min(log_cells, cap);
      if (lc >= 2) {
        // t = va / (va - vb), in (0,1) because the signs differ.
        const long shift = vb.exponent - va.exponent;
        long double ratio = 0;  // |vb| / |va|
        if (shift > 16000) {
          ratio = std::numeric_limits<long double>::infinity();
        } else if (shift > -16000) {
          ratio = std::ldexp(vb.mantissa / va.mantissa, static_cast<int>(shift));
        }
        const long double t = 1.0L / (1.0L + ratio);
        const unsigned long cells = 1UL << lc;
        long j = std::lround(t * static_cast<long double>(cells));
        j = std::clamp(j, 1L, static_cast<long>(cells) - 1);
        Rational step = span;
        mpq_div_2exp(step.get_mpq_t(), step.get_mpq_t(), lc);
        const Rational x = iv.lo + step * j;
        const Approx vx = approximate(p_, x);
        if (vx.sign == 0) return {x, x};
        bool confirmed = false;
        if (vx.sign == va.sign) {
          const Rational y = x + step;
          const Approx vy = j + 1 == static_cast<long>(cells) ? vb : approximate(p_, y);
          if (vy.sign == 0) return {y, y};
          if (vy.sign != va.sign) {
            iv = {x, y};
            va = vx;
            vb = vy;
            confirmed = true;
          } else {
            iv.lo = y;
            va = vy;
          }
        } else {
          const Rational y = x - step;
          const Approx vy = j == 1 ? va : approximate(p_, y);
          if (vy.sign == 0) return {y, y};
          if (vy.sign == va.sign) {
            iv = {y, x};
            va = vy;
            vb = vx;
            confirmed = true;
          } else {
            iv.hi = y;
            vb = vy;
          }
        }
        log_cells = confirmed ? std::min(2 * log_cells, 62u) : std::max(log_cells / 2, 1u);
        continue;
      }
      const Rational mid = (iv.lo + iv.hi) / 2;
      const Approx vm = approximate(p_, mid);
      if (vm.sign == 0) return {mid, mid};
      if (vm.sign == va.sign) {
        iv.lo = mid;
        va = vm;
      } else {
        iv.hi = mid;
        vb = vm;
      }
      log_cells = std::max(log_cells, 2u);
    }
    return iv;
  }

 private:
  // 0 when the closed interval touches or contains 0.
  static Rational distance_from_zero(const RootInterval& iv) {
    if (sgn(iv.lo) > 0) return iv.lo;
    if (sgn(iv.hi) < 0) return -iv.hi;
    return 0;
  }

  const IntPolynomial& p_;
  Rational width_;
};

}  // namespace

namespace {

RootIntervals isolate_impl(const IntPolynomial& p, const Rational& lo, const Rational& hi,
                           const Rational& width, std::span<const Rational> seeds,
                           bool seeds_only) {
  if (sgn(width) <= 0) throw DomainError("isolation width must be positive");
  if (hi < lo) throw DomainError("empty bracket");
  if (p.is_zero()) throw IsolationError("cannot isolate the roots of the zero polynomial");

  std::vector<RootInterval> found;
  IntPolynomial rest = p;
  std::vector<Rational> samples(seeds.begin(), seeds.end());
  if (lo <= 0 && 0 <= hi && p.zero_multiplicity() > 0) {
    if (p.zero_multiplicity() > 1) throw IsolationError("x = 0 is a multiple root");
    rest = p.divided_by_x(1);
    found.push_back({Rational(0), Rational(0)});
    samples.push_back(Rational(0));
  }
  std::vector<RootInterval> core = isolate_core(rest, lo, hi, samples, seeds_only);

  // Refine against p with the exact rational roots divided out, so that
  // every remaining interval has nonzero signs at both ends.
  IntPolynomial reduced = rest;
  for (const auto& iv : core) {
    if (iv.exact()) reduced = divide_by_linear(reduced, iv.lo);
  }
  const Refiner refiner(reduced, width);
  for (auto& iv : core) found.push_back(refiner.refine(iv));

  std::sort(found.begin(), found.end(),
            [](const RootInterval& x, const RootInterval& y) { return x.lo < y.lo; });
  RootIntervals out{std::move(found)};
  if (static_cast<int>(out.size()) != p.degree() || !out.ordered()) {
    throw IsolationError("root certification failed: " + std::to_string(out.size()) +
                         " isolated roots for degree " + std::to_string(p.degree()));
  }
  return out;
}

}  // namespace

RootIntervals isolate_real_roots(const IntPolynomial& p, const Rational& lo,
                                 const Rational& hi, const Rational& width,
                                 std::span<const Rational> seeds) {
  return isolate_impl(p, lo, hi, width, seeds, false);
}

RootInterval refine_root(const IntPolynomial& p, const RootInterval& iv, const Rational& width) {
  if (sgn(width) <= 0) throw DomainError("isolation width must be positive");
  if (iv.exact()) return iv;
  IntPolynomial q = p;
  for (const Rational* end : {&iv.lo, &iv.hi}) {
    while (q.degree() > 0 && q.sign_at(*end) == 0) q = divide_by_linear(q, *end);
  }
  if (q.sign_at(iv.lo) * q.sign_at(iv.hi) >= 0) {
    throw IsolationError("interval " + to_string(iv.lo) + ".." + to_string(iv.hi) +
                         " does not bracket a sign change");
  }
  return Refiner(q, width).refine(iv);
}

// ---------------------------------------------------------------------------
// Root location and interlacing checks

namespace {

// Dyadic rational with the smallest denominator in the open interval.
Rational simplest_dyadic(const Rational& lo, const Rational& hi) {
  for (mp_bitcnt_t k = 0;; ++k) {
    Rational scaled = lo;
    mpq_mul_2exp(scaled.get_mpq_t(), scaled.get_mpq_t(), k);
    BigInt m;
    mpz_fdiv_q(m.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    Rational candidate(m + 1);
    mpq_div_2exp(candidate.get_mpq_t(), candidate.get_mpq_t(), k);
    if (candidate < hi) return candidate;
  }
}

// Sample points for the next polynomial of an interlacing chain: one point
// per root of the previous polynomial.
std::vector<Rational> chain_seeds(const RootIntervals& roots) {
  std::vector<Rational> pts;
  for (const auto& iv : roots.intervals) {
    pts.push_back(iv.exact() ? iv.lo : simplest_dyadic(iv.lo, iv.hi));
  }
  return pts;
}

// Isolates the roots of `p` using the roots of its predecessor `prev` in an
// interlacing chain as samples. When a sample lands on the wrong side of a
// close pair of roots, the predecessor intervals are tightened and the scan
// is retried before falling back to the full Rolle search.
RootIntervals chain_step(const IntPolynomial& p, const Rational& lo, const Rational& hi,
                         const Rational& width, const IntPolynomial* prev,
                         RootIntervals* prev_roots) {
  if (prev == nullptr || prev_roots == nullptr) return isolate_real_roots(p, lo, hi, width);
  constexpr int kTightenRounds = 6;
  for (int round = 0; round < kTightenRounds; ++round) {
    try {
      return isolate_impl(p, lo, hi, width, chain_seeds(*prev_roots), true);
    } catch (const SeedMiss&) {
    }
    for (auto& iv : prev_roots->intervals) {
      if (iv.exact()) continue;
      Rational target = iv.width();
      mpq_div_2exp(target.get_mpq_t(), target.get_mpq_t(), 16);
      iv = refine_root(*prev, iv, target);
    }
  }
  return isolate_real_roots(p, lo, hi, width, chain_seeds(*prev_roots));
}

std::string describe(const RootInterval& iv) {
  if (iv.exact()) return "{" + to_string(iv.lo) + "}";
  return "(" + to_string(iv.lo) + ", " + to_string(iv.hi) + ")";
}

struct Labeled {
  std::string label;
  RootInterval* interval;
  const IntPolynomial* poly;
};

// Refines the wider of two overlapping intervals until they separate. Distinct
// roots always separate eventually; the round cap only guards against a
// genuine coincidence, which the chain then reports.
bool separate(Labeled& a, Labeled& b) {
  constexpr int kMaxRounds = 512;
  for (int round = 0; round < kMaxRounds; ++round) {
    if (strictly_below(*a.interval, *b.interval)) return true;
    if (b.interval->hi < a.interval->lo) return false;
    Labeled& wide = a.interval->width() >= b.interval->width() ? a : b;
    if (wide.interval->exact()) return false;
    Rational target = wide.interval->width();
    mpq_div_2exp(target.get_mpq_t(), target.get_mpq_t(), 16);
    *wide.interval = refine_root(*wide.poly, *wide.interval, target);
  }
  return strictly_below(*a.interval, *b.interval);
}

// Empty string when the chain is strictly increasing.
std::string first_break(std::vector<Labeled>& chain) {
  for (size_t i = 1; i < chain.size(); ++i) {
    if (!separate(chain[i - 1], chain[i])) {
      return chain[i - 1].label + " < " + chain[i].label + " fails: " +
             describe(*chain[i - 1].interval) + " vs " + describe(*chain[i].interval);
    }
  }
  return {};
}

bool is_exact_zero(const RootInterval& iv) { return iv.exact() && sgn(iv.lo) == 0; }

std::string root_label(const char* name, int index, int poly) {
  return std::string(name) + "_" + std::to_string(index) + "^(" + std::to_string(poly) + ")";
}

void check_interlacing(InterlacingReport& r, const IntPolynomial& p_lower,
                        const IntPolynomial& p_even, const IntPolynomial& p_upper) {
  const int n = r.n;
  auto& alpha = r.lower_odd.intervals;
  auto& beta = r.even.intervals;
  auto& gamma = r.upper_odd.intervals;
  const auto fail = [&](std::string why) {
    r.pass = false;
    r.first_violation = std::move(why);
  };
  if (static_cast<int>(alpha.size()) != n - 1 || static_cast<int>(beta.size()) != n ||
      static_cast<int>(gamma.size()) != n) {
    fail("unexpected root counts");
    return;
  }
  // beta_1 < alpha_1 < ... < beta_{n-1} < alpha_{n-1} = 0 = beta_n
  std::vector<Labeled> chain;
  for (int i = 1; i <= n - 1; ++i) {
    chain.push_back({root_label("beta", i, 2 * n), &beta[static_cast<size_t>(i - 1)], &p_even});
    chain.push_back(
        {root_label("alpha", i, 2 * n - 1), &alpha[static_cast<size_t>(i - 1)], &p_lower});
  }
  if (auto why = first_break(chain); !why.empty()) return fail(why);
  if (!is_exact_zero(alpha.back())) return fail(root_label("alpha", n - 1, 2 * n - 1) + " != 0");
  if (!is_exact_zero(beta.back())) return fail(root_label("beta", n, 2 * n) + " != 0");

  // beta_1 < alpha'_1 < ... < beta_{n-1} < alpha'_{n-1} < beta_n = 0 = alpha'_n
  chain.clear();
  for (int i = 1; i <= n - 1; ++i) {
    chain.push_back({root_label("beta", i, 2 * n), &beta[static_cast<size_t>(i - 1)], &p_even});
    chain.push_back(
        {root_label("alpha", i, 2 * n + 1), &gamma[static_cast<size_t>(i - 1)], &p_upper});
  }
  chain.push_back({root_label("beta", n, 2 * n), &beta.back(), &p_even});
  if (auto why = first_break(chain); !why.empty()) return fail(why);
  if (!is_exact_zero(gamma.back())) return fail(root_label("alpha", n, 2 * n + 1) + " != 0");
  r.pass = true;
}

}  // namespace

std::vector<InterlacingReport> verify_interlacing_upto(int n_max, const Rational& width) {
  if (n_max < 2) throw DomainError("verify_interlacing: n must be >= 2");
  const int m_max = 2 * n_max + 1;
  const auto polys = s_star_polys(m_max);
  std::vector<std::optional<RootIntervals>> roots(static_cast<size_t>(m_max + 1));
  std::vector<std::string> errors(static_cast<size_t>(m_max + 1));
  for (int m = 2; m <= m_max; ++m) {
    const IntPolynomial& p = polys[static_cast<size_t>(m)];
    auto& prev = roots[static_cast<size_t>(m - 1)];
    try {
      roots[static_cast<size_t>(m)] =
          chain_step(p, -root_bound(p), 0, width, prev ? &polys[static_cast<size_t>(m - 1)] : nullptr,
                     prev ? &*prev : nullptr);
    } catch (const IsolationError& e) {
      errors[static_cast<size_t>(m)] = "S_" + std::to_string(m) + ": " + e.what();
    }
  }
  std::vector<InterlacingReport> out;
  for (int n = 2; n <= n_max; ++n) {
    InterlacingReport r;
    r.n = n;
    std::string error;
    for (int m : {2 * n - 1, 2 * n, 2 * n + 1}) {
      if (!roots[static_cast<size_t>(m)] && error.empty()) error = errors[static_cast<size_t>(m)];
    }
    if (!error.empty()) {
      r.first_violation = error;
    } else {
      r.lower_odd = *roots[static_cast<size_t>(2 * n - 1)];
      r.even = *roots[static_cast<size_t>(2 * n)];
      r.upper_odd = *roots[static_cast<size_t>(2 * n + 1)];
      check_interlacing(r, polys[static_cast<size_t>(2 * n - 1)],
                        polys[static_cast<size_t>(2 * n)], polys[static_cast<size_t>(2 * n + 1)]);
    }
    out.push_back(std::move(r));
  }
  return out;
}

InterlacingReport verify_interlacing(int n, const Rational& width) {
  return verify_interlacing_upto(n, width).back();
}

std::vector<TreeRootsReport> verify_tree_roots_upto(int n_max, const Rational& width) {
  if (n_max < 1) throw DomainError("verify_tree_roots: n must be >= 1");
  const auto polys = tree_polys(n_max);
  std::vector<TreeRootsReport> out;
  for (int n = 1; n <= n_max; ++n) {
    const IntPolynomial& p = polys[static_cast<size_t>(n)];
    TreeRootsReport r;
    r.n = n;
    r.degree = p.degree();
    try {
      const bool chained = !out.empty() && out.back().pass;
      r.roots = chain_step(p, -1, 0, width, chained ? &polys[static_cast<size_t>(n - 1)] : nullptr,
                           chained ? &out.back().roots : nullptr);
      r.pass = true;
      if (r.degree != n) {
        r.pass = false;
        r.failure = "degree " + std::to_string(r.degree) + " != " + std::to_string(n);
      }
      int zeros = 0;
      for (const auto& iv : r.roots.intervals) {
        if (is_exact_zero(iv)) {
          ++zeros;
          continue;
        }
        const bool inside = iv.exact() ? (-1 < iv.lo && iv.hi < 0) : (-1 <= iv.lo && iv.hi <= 0);
        if (!inside && r.pass) {
          r.pass = false;
          r.failure = "root outside (-1,0): " + describe(iv);
        }
      }
      if (zeros != 1 && r.pass) {
        r.pass = false;
        r.failure = "expected exactly one root at 0";
      }
    } catch (const IsolationError& e) {
      r.pass = false;
      r.failure = e.what();
    }
    out.push_back(std::move(r));
  }
  return out;
}

TreeRootsReport verify_tree_roots(int n, const Rational& width) {
  return verify_tree_roots_upto(n, width).back();
}

// ---------------------------------------------------------------------------
// Log-concavity

SequenceCheck check_slc(std::span<const BigInt> row, int k_min) {
  SequenceCheck out;
  BigInt lhs;
  BigInt rhs;
  for (size_t i = 1; i + 1 < row.size(); ++i) {
    lhs = row[i] * row[i];
    rhs = row[i - 1] * row[i + 1];
    if (!(lhs > rhs)) {
      out.ok = false;
      out.first_failure = k_min + static_cast<int>(i);
      return out;
    }
  }
  return out;
}

SequenceCheck check_newton(std::span<const BigInt> row, int N) {
  if (static_cast<int>(row.size()) != N) {
    throw DomainError("check_newton: row must hold C_1..C_N");
  }
  SequenceCheck out;
  BigInt lhs;
  BigInt rhs;
  for (int k = 2; k <= N - 1; ++k) {
    const BigInt& c_prev = row[static_cast<size_t>(k - 2)];
    const BigInt& c = row[static_cast<size_t>(k - 1)];
    const BigInt& c_next = row[static_cast<size_t>(k)];
    // C_k^2 (k-1)(N-k) >= C_{k+1} C_{k-1} k (N-k+1)
    lhs = c * c * static_cast<long>(k - 1) * static_cast<long>(N - k);
    rhs = c_next * c_prev * static_cast<long>(k) * static_cast<long>(N - k + 1);
    if (lhs < rhs) {
      out.ok = false;
      out.first_failure = k;
      return out;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Truncated bivariate series

namespace {

using XPoly = std::vector<Rational>;

void add_into(XPoly& acc, const XPoly& other, int sign = 1) {
  if (other.size() > acc.size()) acc.resize(other.size());
  for (size_t j = 0; j < other.size(); ++j) {
    if (sign > 0) {
      acc[j] += other[j];
    } else {
      acc[j] -= other[j];
    }
  }
}

void mul_add_into(XPoly& acc, const XPoly& a, const XPoly& b, const Rational& scale) {
  if (a.empty() || b.empty()) return;
  if (acc.size() < a.size() + b.size() - 1) acc.resize(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) acc[i + j] += scale * a[i] * b[j];
  }
}

}  // namespace

TruncatedSeries2::TruncatedSeries2(int order) : order_(order) {
  if (order < 0) throw DomainError("series order must be >= 0");
  c_.resize(static_cast<size_t>(order + 1));
}

Rational TruncatedSeries2::coeff(int n, int j) const {
  if (n < 0 || n > order_ || j < 0) return 0;
  const auto& row = c_[static_cast<size_t>(n)];
  return static_cast<size_t>(j) < row.size() ? row[static_cast<size_t>(j)] : Rational(0);
}

void TruncatedSeries2::set(int n, int j, const Rational& value) {
  if (n < 0 || n > order_ || j < 0) throw DomainError("series index out of range");
  auto& row = c_[static_cast<size_t>(n)];
  if (row.size() <= static_cast<size_t>(j)) row.resize(static_cast<size_t>(j + 1));
  row[static_cast<size_t>(j)] = value;
}

TruncatedSeries2& TruncatedSeries2::operator+=(const TruncatedSeries2& other) {
  for (int n = 0; n <= std::min(order_, other.order_); ++n) {
    add_into(c_[static_cast<size_t>(n)], other.c_[static_cast<size_t>(n)]);
  }
  return *this;
}

TruncatedSeries2& TruncatedSeries2::operator-=(const TruncatedSeries2& other) {
  for (int n = 0; n <= std::min(order_, other.order_); ++n) {
    add_into(c_[static_cast<size_t>(n)], other.c_[static_cast<size_t>(n)], -1);
  }
  return *this;
}

TruncatedSeries2 operator*(const TruncatedSeries2& a, const TruncatedSeries2& b) {
  TruncatedSeries2 out(std::min(a.order_, b.order_));
  const Rational one(1);
  for (int n = 0; n <= out.order_; ++n) {
    for (int i = 0; i <= n; ++i) {
      mul_add_into(out.c_[static_cast<size_t>(n)], a.c_[static_cast<size_t>(i)],
                   b.c_[static_cast<size_t>(n - i)], one);
    }
  }
  return out;
}

TruncatedSeries2 TruncatedSeries2::times_x() const {
  TruncatedSeries2 out(order_);
  for (int n = 0; n <= order_; ++n) {
    const auto& row = c_[static_cast<size_t>(n)];
    if (row.empty()) continue;
    auto& dst = out.c_[static_cast<size_t>(n)];
    dst.assign(1, Rational(0));
    dst.insert(dst.end(), row.begin(), row.end());
  }
  return out;
}

TruncatedSeries2 TruncatedSeries2::exp() const {
  for (const auto& v : c_[0]) {
    if (sgn(v) != 0) throw DomainError("exp needs a zero constant term in z");
  }
  TruncatedSeries2 out(order_);
  out.c_[0] = {Rational(1)};
  for (int n = 1; n <= order_; ++n) {
    auto& dst = out.c_[static_cast<size_t>(n)];
    for (int k = 1; k <= n; ++k) {
      mul_add_into(dst, c_[static_cast<size_t>(k)], out.c_[static_cast<size_t>(n - k)],
                   Rational(k) / n);
    }
  }
  return out;
}

Rational TruncatedSeries2::max_abs_coefficient() const {
  Rational best = 0;
  for (const auto& row : c_) {
    for (const auto& v : row) best = std::max(best, Rational(abs(v)));
  }
  return best;
}

TruncatedSeries2 tree_bivariate_series(int N) {
  if (N < 1) throw DomainError("series order must be >= 1");
  TruncatedSeries2 h(N);
  bigcount::RowGenerator rows(bigcount::Family::Ttriangle);  // starts at row 1
  for (int n = 1; n <= N; ++n) {
    const bigcount::Row& row = n == 1 ? rows.current() : rows.advance();
    const Rational inv_fact(BigInt(1), factorial(static_cast<unsigned long>(n)));
    for (int k = row.k_min; k <= row.k_max(); ++k) {
      h.set(n, k, Rational(row.at(k)) * inv_fact);
    }
  }
  return h;
}

Rational functional_equation_residual(int N) {
  const TruncatedSeries2 h = tree_bivariate_series(N);
  TruncatedSeries2 one(N);
  one.set(0, 0, 1);
  TruncatedSeries2 z(N);
  z.set(1, 0, 1);
  const TruncatedSeries2 rhs = z + (h.exp() - one - h).times_x();
  return (rhs - h).max_abs_coefficient();
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::json to_json(const RootIntervals& roots) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& iv : roots.intervals) {
    out.push_back({{"lo", to_string(iv.lo)}, {"hi", to_string(iv.hi)}, {"exact", iv.exact()}});
  }
  return out;
}

nlohmann::json to_json(const InterlacingReport& report) {
  return {{"n", report.n},
          {"pass", report.pass},
          {"first_violation", report.first_violation},
          {"degree_lower_odd", report.lower_odd.size()},
          {"degree_even", report.even.size()},
          {"degree_upper_odd", report.upper_odd.size()},
          {"roots_lower_odd", to_json(report.lower_odd)},
          {"roots_even", to_json(report.even)},
          {"roots_upper_odd", to_json(report.upper_odd)}};
}

nlohmann::json to_json(const TreeRootsReport& report) {
  return {{"n", report.n},
          {"pass", report.pass},
          {"failure", report.failure},
          {"degree", report.degree},
          {"roots", to_json(report.roots)}};
}

}  // namespace phylocount::genpoly
