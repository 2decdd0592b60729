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

#ifndef PHYLOCOUNT_ASYMPT_HPP_
#define PHYLOCOUNT_ASYMPT_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "phylocount/dist_stats.hpp"

namespace phylocount::asympt {

// rho = 2 ln 2 - 1, radius of convergence of sum t_n z^n / n!.
inline constexpr double kRho = 0.38629436111989061883;

enum class ErrorOrder { InvN, ROverN, InvLogN, NPowMinus9Halves, Heuristic };
std::string error_order_token(ErrorOrder order);

struct AsympEstimate {
  double value = 0;
  ErrorOrder error_order = ErrorOrder::Heuristic;
  bool log_scale = false;  // value is the natural log of the estimate
  int n = 0;
  double r = 0;    // r(n), when the formula uses it
  double rho = 0;  // when the formula uses it
};

struct MeanVariance {
  AsympEstimate mean;
  AsympEstimate variance;
};

struct ModeEstimate {
  double index = 0;      // J_n
  double log_value = 0;  // ln A(n, J_n)
};

// Solves w e^w = y for the principal branch, y >= -1/e, by Halley steps
// inside a shrinking bracket; bisection takes over whenever a step leaves
// the bracket.
double lambert_w0(double y);

// Positive root of r e^r = n.
double lambert_r(double n);

AsympEstimate bell_moser_wyman(int n);  // log scale, n >= 10
MeanVariance stats_S_asymp(int n);      // n >= 10
MeanVariance stats_salvy(int n);        // n >= 16; same formulas for S and S*
MeanVariance stats_Sstar_asymp(int n);  // n >= 10
ModeEstimate mode_Sstar_asymp(int n);   // n >= 10
MeanVariance stats_T_asymp(int n);      // n >= 4, row T(n+1, .)
ModeEstimate mode_T_asymp(int n);       // n >= 4

// ln t_n from n! / (sqrt(pi) rho^(n-1/2)) times the bracket truncated to
// `terms` terms (1 to 3). n >= 4.
AsympEstimate schroeder_t_asymp(int n, int terms = 3);

struct H1zCheck {
  double z = 0;
  double closed_form = 0;  // -W0(-e^((z-1)/2) / 2) + (z-1)/2
  double series = 0;       // sum_{n<=30} t_n z^n / n!
  double residual = 0;
  double tail_bound = 0;   // a_31 z^31 / (1 - z/rho), a_n = t_n / n!
};

H1zCheck h1z_numeric_check(double z);  // 0 < z < rho

// |exact - estimate| rescaled so that a correct error order keeps it bounded.
double scaled_residual(ErrorOrder order, int n, double exact, double estimate);

struct ConvergencePoint {
  int n = 0;
  std::string exact;  // exact value, base 10 ("p/q" for fractions)
  double exact_f = 0;
  double estimate = 0;
  double scaled_residual = 0;
};

struct ConvergenceRecord {
  dist_stats::RowFamily family = dist_stats::RowFamily::S;
  std::string quantity;
  ErrorOrder error_order = ErrorOrder::Heuristic;
  std::vector<ConvergencePoint> points;

  // Every scaled residual is at most factor times the first one.
  bool bounded(double factor = 3.0) const;
};

// Exact-versus-asymptotic records for every quantity the family has a
// formula for, one point per n. Log-scale quantities compare logarithms and
// report the relative error as their residual.
std::vector<ConvergenceRecord> compare_family(dist_stats::RowFamily family,
                                              const std::vector<int>& ns);

// n,family,quantity,exact,estimate,scaled_residual,error_order
void write_csv(std::ostream& out, const std::vector<ConvergenceRecord>& records,
               bool header = true);

}  // namespace phylocount::asympt

#endif  // PHYLOCOUNT_ASYMPT_HPP_
