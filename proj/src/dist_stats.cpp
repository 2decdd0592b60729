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

#include "phylocount/dist_stats.hpp"

#include <algorithm>
#include <cmath>

namespace phylocount::dist_stats {

using bigcount::Family;
using bigcount::Row;

std::string family_token(RowFamily family) {
  switch (family) {
    case RowFamily::S:
      return "s";
    case RowFamily::SStar:
      return "sstar";
    case RowFamily::F:
      return "f";
    case RowFamily::FStar:
      return "fstar";
    case RowFamily::T:
      break;
  }
  return "t";
}

RowFamily parse_family(const std::string& token) {
  if (token == "s") return RowFamily::S;
  if (token == "sstar") return RowFamily::SStar;
  if (token == "f") return RowFamily::F;
  if (token == "fstar") return RowFamily::FStar;
  if (token == "t") return RowFamily::T;
  throw DomainError("unknown family '" + token + "' (expected s, sstar, f, fstar or t)");
}

namespace {

Family base_family(RowFamily family) {
  switch (family) {
    case RowFamily::S:
    case RowFamily::F:
      return Family::StirlingS;
    case RowFamily::SStar:
    case RowFamily::FStar:
      return Family::StirlingStar;
    case RowFamily::T:
      break;
  }
  return Family::Ttriangle;
}

// Triangle row index holding distribution row n.
int base_index(RowFamily family, int n) { return family == RowFamily::T ? n + 1 : n; }

// F(n,k) = S(n, n-k+1): reverse the values and move the support.
Row reflect(RowFamily family, Row row, int n) {
  row.n = n;
  if ((family == RowFamily::F || family == RowFamily::FStar) && !row.empty()) {
    const int k_max = row.k_max();
    std::reverse(row.values.begin(), row.values.end());
    row.k_min = n - k_max + 1;
  }
  return row;
}

void check_index(int n) {
  if (n < 1) throw DomainError("row index must be >= 1, got " + std::to_string(n));
}

// a / b for positive integers of any size, to about one ulp.
double ratio(const BigInt& a, const BigInt& b) {
  long ea = 0;
  long eb = 0;
  const double ma = mpz_get_d_2exp(&ea, a.get_mpz_t());
  const double mb = mpz_get_d_2exp(&eb, b.get_mpz_t());
  return std::ldexp(ma / mb, static_cast<int>(ea - eb));
}

DistStats finish(RowFamily family, int n, Rational mean, Rational variance) {
  DistStats out;
  out.family = family;
  out.n = n;
  out.mean = std::move(mean);
  out.variance = std::move(variance);
  out.mean_f = to_double(out.mean);
  out.var_f = to_double(out.variance);
  return out;
}

}  // namespace

Row distribution_row(RowFamily family, int n) {
  check_index(n);
  return reflect(family, bigcount::compute_row(base_family(family), base_index(family, n)), n);
}

void for_each_row(RowFamily family, int first, int last,
                  const std::function<void(const Row&)>& visit) {
  check_index(first);
  if (last < first) return;
  bigcount::RowGenerator gen(base_family(family));
  gen.advance_to(base_index(family, first));
  for (int n = first;; ++n) {
    visit(reflect(family, gen.current(), n));
    if (n == last) break;
    gen.advance();
  }
}

DistStats row_stats_pgf(RowFamily family, const Row& row) {
  if (row.empty()) {
    throw DomainError("row " + std::to_string(row.n) + " of family " + family_token(family) +
                      " is empty");
  }
  BigInt a0 = 0;
  BigInt a1 = 0;  // A'(1)
  BigInt a2 = 0;  // A''(1)
  for (size_t i = 0; i < row.values.size(); ++i) {
    const long k = row.k_min + static_cast<long>(i);
    const BigInt& c = row.values[i];
    a0 += c;
    mpz_addmul_ui(a1.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(k));
    if (k >= 2) mpz_addmul_ui(a2.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(k * (k - 1)));
  }
  Rational mean(a1, a0);
  mean.canonicalize();
  Rational second(a2, a0);
  second.canonicalize();
  Rational variance = second + mean - mean * mean;
  return finish(family, row.n, std::move(mean), std::move(variance));
}

DistStats row_stats_pgf(RowFamily family, int n) {
  return row_stats_pgf(family, distribution_row(family, n));
}

DistStats stats_S_closed(int n) {
  check_index(n);
  const auto b = bigcount::sequence(bigcount::SequenceKind::Bell, n + 2);
  const Rational r1 = Rational(b[n + 1]) / b[n];
  const Rational r2 = Rational(b[n + 2]) / b[n];
  return finish(RowFamily::S, n, r1 - 1, r2 - r1 * r1 - 1);
}

DistStats stats_Sstar_closed(int n) {
  if (n < 4) throw DomainError("stats_Sstar_closed needs n >= 4, got " + std::to_string(n));
  const auto b = bigcount::sequence(bigcount::SequenceKind::BellStar, n + 2);
  const Rational base(b[n]);
  const Rational up1 = b[n + 1] / base;
  const Rational up2 = b[n + 2] / base;
  const Rational down1 = b[n - 1] / base;
  const Rational down2 = b[n - 2] / base;
  const Rational nn(n);
  const Rational mean = up1 - nn * down1;
  const Rational variance = up2 + 2 * nn * up1 * down1 + nn * (nn - 1) * down2 - up1 * up1 -
                            nn * nn * down1 * down1 - nn * down1 - (2 * nn + 1);
  return finish(RowFamily::SStar, n, mean, variance);
}

DistStats stats_T_closed(int n) {
  check_index(n);
  const auto t = bigcount::sequence(bigcount::SequenceKind::SchroederT, n + 3);
  const Rational q2 = Rational(t[n + 2]) / t[n + 1];
  const Rational q3 = Rational(t[n + 3]) / t[n + 1];
  const Rational mean = q2 / 2 - Rational(n + 1) / 2;
  Rational variance = q3 / 4 - q2 * q2 / 4 - q2 / 2 - Rational(n + 1) / 4;
  return finish(RowFamily::T, n, mean, std::move(variance));
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

LimitReport limit_report(RowFamily family, const Row& row) {
  const DistStats stats = row_stats_pgf(family, row);
  if (sgn(stats.variance) <= 0) {
    throw DomainError("row " + std::to_string(row.n) + " of family " + family_token(family) +
                      " has zero variance");
  }
  LimitReport out;
  out.family = family;
  out.n = row.n;
  out.mean = stats.mean;
  out.variance = stats.variance;
  const double sd = std::sqrt(stats.var_f);

  const BigInt total = row.sum();
  BigInt below = 0;
  size_t mode = 0;
  for (size_t i = 0; i < row.values.size(); ++i) {
    const BigInt& c = row.values[i];
    if (i > 0) {
      const int cmp = ::cmp(c, row.values[mode]);
      if (cmp > 0) {
        mode = i;
        out.mode_tie = false;
      } else if (cmp == 0) {
        out.mode_tie = true;
      }
    }
    if (sgn(c) == 0) continue;
    // F_n jumps at x_k from (mass below k) to (mass up to k).
    const double x = (static_cast<double>(row.k_min) + static_cast<double>(i) - stats.mean_f) / sd;
    const double phi = normal_cdf(x);
    const double left = sgn(below) == 0 ? 0.0 : ratio(below, total);
    below += c;
    const double right = below == total ? 1.0 : ratio(below, total);
    out.sup_cdf_distance = std::max({out.sup_cdf_distance, std::fabs(left - phi),
                                     std::fabs(right - phi)});
  }
  out.mode_index = row.k_min + static_cast<int>(mode);
  out.llt_value_at_mode = sd * ratio(row.values[mode], total);
  out.mode_offset = (static_cast<double>(out.mode_index) - stats.mean_f) / sd;
  return out;
}

LimitReport clt_distance(RowFamily family, int n) {
  return limit_report(family, distribution_row(family, n));
}

LimitReport llt_check(RowFamily family, int n) {
  return limit_report(family, distribution_row(family, n));
}

nlohmann::json to_json(const DistStats& stats) {
  return {{"family", family_token(stats.family)},
          {"n", stats.n},
          {"mean", to_string(stats.mean)},
          {"variance", to_string(stats.variance)},
          {"mean_float", stats.mean_f},
          {"variance_float", stats.var_f}};
}

nlohmann::json to_json(const LimitReport& report) {
  return {{"family", family_token(report.family)},
          {"n", report.n},
          {"mean", to_string(report.mean)},
          {"variance", to_string(report.variance)},
          {"clt_distance", report.sup_cdf_distance},
          {"llt_value", report.llt_value_at_mode},
          {"llt_error", std::fabs(report.llt_value_at_mode - kLltTarget)},
          {"mode_index", report.mode_index},
          {"mode_tie", report.mode_tie},
          {"mode_offset", report.mode_offset}};
}

}  // namespace phylocount::dist_stats
