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

#ifndef PHYLOCOUNT_DIST_STATS_HPP_
#define PHYLOCOUNT_DIST_STATS_HPP_

#include <functional>
#include <string>

#include "json.hpp"
#include "phylocount/bigcount.hpp"
#include "phylocount/numeric.hpp"

// Statistics of the row distributions P(Z_n = k) = A(n,k) / A_n(1).
//
// Row n of each family:
//   S, S*   k -> S(n,k), S*(n,k)
//   F, F*   k -> S(n,n-k+1), S*(n,n-k+1)
//   T       k -> T(n+1,k), the coefficients of P_n(x); n >= 1
namespace phylocount::dist_stats {

enum class RowFamily { S, SStar, F, FStar, T };

std::string family_token(RowFamily family);  // s, sstar, f, fstar, t
RowFamily parse_family(const std::string& token);

bigcount::Row distribution_row(RowFamily family, int n);

// Calls `visit` with rows first..last in order, stepping one recurrence at a
// time rather than recomputing each row.
void for_each_row(RowFamily family, int first, int last,
                  const std::function<void(const bigcount::Row&)>& visit);

struct DistStats {
  RowFamily family = RowFamily::S;
  int n = 0;
  Rational mean;
  Rational variance;
  double mean_f = 0;
  double var_f = 0;
};

// mean = A'(1)/A(1), variance = A''(1)/A(1) + mean - mean^2.
DistStats row_stats_pgf(RowFamily family, int n);
DistStats row_stats_pgf(RowFamily family, const bigcount::Row& row);

// Same quantities through ratios of Bell-type numbers.
DistStats stats_S_closed(int n);      // n >= 1
DistStats stats_Sstar_closed(int n);  // n >= 4
DistStats stats_T_closed(int n);      // n >= 1, row T(n+1, .)

struct LimitReport {
  RowFamily family = RowFamily::S;
  int n = 0;
  Rational mean;
  Rational variance;
  double sup_cdf_distance = 0;   // sup_x |F_n(x) - Phi(x)| of the standardized row
  double llt_value_at_mode = 0;  // D(Z_n) A(n,J_n) / A_n(1)
  int mode_index = 0;            // J_n, smallest maximizer
  bool mode_tie = false;         // a second maximizer exists
  double mode_offset = 0;        // (J_n - mean) / D(Z_n)
};

inline constexpr double kLltTarget = 0.39894228040143267794;  // 1/sqrt(2 pi)

// Standard normal CDF, via erfc.
double normal_cdf(double x);

// Both functions fill the whole report; they differ only in name so call
// sites read like the check they perform. Zero variance is a DomainError.
LimitReport limit_report(RowFamily family, const bigcount::Row& row);
LimitReport clt_distance(RowFamily family, int n);
LimitReport llt_check(RowFamily family, int n);

nlohmann::json to_json(const DistStats& stats);
nlohmann::json to_json(const LimitReport& report);

}  // namespace phylocount::dist_stats

#endif  // PHYLOCOUNT_DIST_STATS_HPP_
