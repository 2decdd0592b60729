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

#include "phylocount/asympt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "phylocount/bigcount.hpp"

namespace phylocount::asympt {

using dist_stats::RowFamily;

std::string error_order_token(ErrorOrder order) {
  switch (order) {
    case ErrorOrder::InvN:
      return "O(1/n)";
    case ErrorOrder::ROverN:
      return "O(r/n)";
    case ErrorOrder::InvLogN:
      return "O(1/ln n)";
    case ErrorOrder::NPowMinus9Halves:
      return "O(n^-9/2)";
    case ErrorOrder::Heuristic:
      break;
  }
  return "heuristic";
}

namespace {

// Root of f(w) = w e^w - y on [lo, hi], where f is increasing and changes
// sign. Halley steps; bisection when a step is not finite or escapes.
double solve_w_exp_w(double y, double lo, double hi, double guess) {
  double w = std::clamp(guess, lo, hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double ew = std::exp(w);
    const double f = w * ew - y;
    if (f == 0) return w;
    if (f < 0) {
      lo = w;
    } else {
      hi = w;
    }
    const double d1 = ew * (w + 1);
    const double d2 = ew * (w + 2);
    double next = w - 2 * f * d1 / (2 * d1 * d1 - f * d2);
    if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
    if (next == w || hi - lo <= 4 * std::numeric_limits<double>::epsilon() * std::fabs(w)) {
      return next;
    }
    w = next;
  }
  return w;
}

void require(bool ok, const char* what, int n) {
  if (!ok) throw DomainError(std::string(what) + ": n out of range (" + std::to_string(n) + ")");
}

AsympEstimate estimate(double value, ErrorOrder order, int n, double r = 0, double rho = 0,
                       bool log_scale = false) {
  AsympEstimate out;
  out.value = value;
  out.error_order = order;
  out.log_scale = log_scale;
  out.n = n;
  out.r = r;
  out.rho = rho;
  return out;
}

}  // namespace

double lambert_w0(double y) {
  const double branch = -1.0 / std::numbers::e;
  if (!(y >= branch)) throw DomainError("lambert_w0: argument below -1/e");
  if (y == 0) return 0;
  if (y < 0) {
    // Near the branch point w ~ -1 + sqrt(2 (1 + e y)).
    const double p = std::sqrt(std::max(0.0, 2 * (1 + std::numbers::e * y)));
    return solve_w_exp_w(y, -1.0, 0.0, -1 + p - p * p / 3);
  }
  const double guess = y < 3 ? std::log1p(y) * 0.6 : std::log(y) - std::log(std::log(y));
  return solve_w_exp_w(y, 0.0, std::max(1.0, std::log(y) + 1), guess);
}

double lambert_r(double n) {
  if (!(n > 0) || !std::isfinite(n)) throw DomainError("lambert_r: n must be positive");
  return lambert_w0(n);
}

AsympEstimate bell_moser_wyman(int n) {
  require(n >= 10, "bell_moser_wyman", n);
  const double r = lambert_r(n);
  const double nn = n;
  const double correction = r * r * (2 * r * r + 7 * r + 10) / (24 * nn * std::pow(r + 1, 3));
  const double log_value =
      -0.5 * std::log1p(r) + nn * (r + 1 / r - 1) - 1 + std::log1p(-correction);
  return estimate(log_value, ErrorOrder::InvN, n, r, 0, true);
}

MeanVariance stats_S_asymp(int n) {
  require(n >= 10, "stats_S_asymp", n);
  const double r = lambert_r(n);
  const double nn = n;
  const double mean = nn / r - 1 + r / (2 * (r + 1) * (r + 1));
  const double var = nn / (r * (r + 1)) + r * (r - 1) / (2 * std::pow(r + 1, 4)) - 1;
  return {estimate(mean, ErrorOrder::InvN, n, r), estimate(var, ErrorOrder::InvN, n, r)};
}

MeanVariance stats_salvy(int n) {
  require(n >= 16, "stats_salvy", n);
  const double nn = n;
  const double l = std::log(nn);
  const double ll = std::log(l);
  const double mean = nn / l + nn * ll / (l * l);
  const double var = nn / (l * l) + nn * (2 * ll - 1) / (l * l * l);
  return {estimate(mean, ErrorOrder::InvLogN, n), estimate(var, ErrorOrder::InvLogN, n)};
}

MeanVariance stats_Sstar_asymp(int n) {
  require(n >= 10, "stats_Sstar_asymp", n);
  const double r = lambert_r(n);
  const double nn = n;
  const double q = r + 1;
  const double mean = nn / r - r - 1 / (2 * r) + 1 / (2 * r * q * q);
  const double var = nn / (r * q) - r + 1 - 2 / q - 1 / (2 * q * q) - 1 / (2 * q * q * q) +
                     1 / (q * q * q * q);
  return {estimate(mean, ErrorOrder::InvN, n, r), estimate(var, ErrorOrder::InvN, n, r)};
}

ModeEstimate mode_Sstar_asymp(int n) {
  require(n >= 10, "mode_Sstar_asymp", n);
  const double r = lambert_r(n);
  ModeEstimate out;
  out.index = n / r;
  out.log_value = std::log(r) + log_of(bigcount::bell(n - 1)) -
                  0.5 * std::log(2 * static_cast<double>(n) * std::numbers::pi);
  return out;
}

namespace {
// 1/rho^2 - 2/rho - 1
double t_variance_slope() { return 1 / (kRho * kRho) - 2 / kRho - 1; }
}  // namespace

MeanVariance stats_T_asymp(int n) {
  require(n >= 4, "stats_T_asymp", n);
  const double nn = n;
  const double ln2 = std::numbers::ln2;
  const double mean = (1 - kRho) / (2 * kRho) * nn + (0.75 - ln2) / kRho;
  const double var =
      nn / 4 * t_variance_slope() + (1 + 4 * ln2 - 8 * ln2 * ln2) / (8 * kRho * kRho);
  return {estimate(mean, ErrorOrder::InvN, n, 0, kRho), estimate(var, ErrorOrder::InvN, n, 0, kRho)};
}

ModeEstimate mode_T_asymp(int n) {
  require(n >= 4, "mode_T_asymp", n);
  const double nn = n;
  ModeEstimate out;
  out.index = (1 - kRho) / (2 * kRho) * nn;
  out.log_value = std::lgamma(nn + 1) - std::log(std::numbers::pi * std::numbers::sqrt2 * nn) -
                  (nn + 0.5) * std::log(kRho) - 0.5 * std::log(t_variance_slope());
  return out;
}

AsympEstimate schroeder_t_asymp(int n, int terms) {
  require(n >= 4, "schroeder_t_asymp", n);
  if (terms < 1 || terms > 3) throw DomainError("schroeder_t_asymp: terms must be 1, 2 or 3");
  const double nn = n;
  const double bracket_terms[3] = {1 / (2 * std::pow(nn, 1.5)), 3 / (16 * std::pow(nn, 2.5)),
                                   25 / (256 * std::pow(nn, 3.5))};
  double bracket = 0;
  for (int i = 0; i < terms; ++i) bracket += bracket_terms[i];
  const double log_value = std::lgamma(nn + 1) - 0.5 * std::log(std::numbers::pi) -
                           (nn - 0.5) * std::log(kRho) + std::log(bracket);
  // The truncated bracket is only accurate to O(1/n) relative; see compare.
  return estimate(log_value, ErrorOrder::InvN, n, 0, kRho, true);
}

H1zCheck h1z_numeric_check(double z) {
  if (!(z > 0 && z < kRho)) throw DomainError("h1z_numeric_check: z must lie in (0, rho)");
  constexpr int kOrder = 30;
  H1zCheck out;
  out.z = z;
  const double half = 0.5 * (z - 1);
  out.closed_form = -lambert_w0(-0.5 * std::exp(half)) + half;
  const auto t = bigcount::sequence(bigcount::SequenceKind::SchroederT, kOrder + 1);
  // Horner in z over a_n = t_n / n!.
  double acc = 0;
  for (int n = kOrder; n >= 1; --n) {
    acc = acc * z + to_double(Rational(t[n]) / factorial(static_cast<unsigned long>(n)));
  }
  out.series = acc * z;
  out.residual = std::fabs(out.closed_form - out.series);
  const double a_next = to_double(Rational(t[kOrder + 1]) / factorial(kOrder + 1));
  out.tail_bound = a_next * std::pow(z, kOrder + 1) / (1 - z / kRho);
  return out;
}

double scaled_residual(ErrorOrder order, int n, double exact, double estimate) {
  const double diff = std::fabs(exact - estimate);
  switch (order) {
    case ErrorOrder::InvN:
      return diff * n;
    case ErrorOrder::ROverN:
      return diff * n / lambert_r(n);
    case ErrorOrder::InvLogN:
      return diff / std::fabs(exact) * std::log(static_cast<double>(n));
    case ErrorOrder::NPowMinus9Halves:
      return diff / std::fabs(exact) * std::pow(static_cast<double>(n), 3.0);
    case ErrorOrder::Heuristic:
      break;
  }
  return diff / std::fabs(exact);
}

bool ConvergenceRecord::bounded(double factor) const {
  if (points.empty()) return true;
  const double first = points.front().scaled_residual;
  return std::all_of(points.begin(), points.end(),
                     [&](const ConvergencePoint& p) { return p.scaled_residual <= factor * first; });
}

namespace {

class RecordSet {
 public:
  explicit RecordSet(RowFamily family) : family_(family) {}

  void add(const std::string& quantity, ErrorOrder order, ConvergencePoint point) {
    for (auto& rec : records_) {
      if (rec.quantity == quantity) {
        rec.points.push_back(std::move(point));
        return;
      }
    }
    records_.push_back({family_, quantity, order, {std::move(point)}});
  }

  void add_plain(const std::string& quantity, const AsympEstimate& est, const Rational& exact) {
    ConvergencePoint p;
    p.n = est.n;
    p.exact = to_string(exact);
    p.exact_f = to_double(exact);
    p.estimate = est.value;
    p.scaled_residual = scaled_residual(est.error_order, est.n, p.exact_f, p.estimate);
    add(quantity, est.error_order, std::move(p));
  }

  // Both sides as natural logs; the residual is the relative error of the
  // unlogged values, scaled per `order`.
  void add_log(const std::string& quantity, ErrorOrder order, int n, const BigInt& exact,
               double log_estimate) {
    ConvergencePoint p;
    p.n = n;
    p.exact = to_string(exact);
    p.exact_f = log_of(exact);
    p.estimate = log_estimate;
    const double rel = std::fabs(std::expm1(log_estimate - p.exact_f));
    p.scaled_residual = order == ErrorOrder::InvN ? rel * n : rel;
    add(quantity, order, std::move(p));
  }

  void add_mode_index(const std::string& quantity, int n, int exact, double est, double scale) {
    ConvergencePoint p;
    p.n = n;
    p.exact = std::to_string(exact);
    p.exact_f = exact;
    p.estimate = est;
    p.scaled_residual = std::fabs(exact - est) / scale;
    add(quantity, ErrorOrder::Heuristic, std::move(p));
  }

  std::vector<ConvergenceRecord> take() { return std::move(records_); }

 private:
  RowFamily family_;
  std::vector<ConvergenceRecord> records_;
};

AsympEstimate reflected(const AsympEstimate& mean, int n) {
  AsympEstimate out = mean;
  out.value = n + 1 - mean.value;
  return out;
}

}  // namespace

std::vector<ConvergenceRecord> compare_family(RowFamily family, const std::vector<int>& ns) {
  RecordSet set(family);
  for (int n : ns) {
    switch (family) {
      case RowFamily::S:
      case RowFamily::F: {
        const auto exact = dist_stats::stats_S_closed(n);
        const auto est = stats_S_asymp(n);
        if (family == RowFamily::S) {
          set.add_plain("mean", est.mean, exact.mean);
          set.add_plain("variance", est.variance, exact.variance);
          set.add_log("ln_bell", ErrorOrder::InvN, n, bigcount::bell(n),
                      bell_moser_wyman(n).value);
          if (n >= 16) {
            const auto salvy = stats_salvy(n);
            set.add_plain("salvy_mean", salvy.mean, exact.mean);
            set.add_plain("salvy_variance", salvy.variance, exact.variance);
          }
        } else {
          set.add_plain("mean", reflected(est.mean, n), Rational(n + 1) - exact.mean);
          set.add_plain("variance", est.variance, exact.variance);
        }
        break;
      }
      case RowFamily::SStar:
      case RowFamily::FStar: {
        const auto exact = dist_stats::stats_Sstar_closed(n);
        const auto est = stats_Sstar_asymp(n);
        if (family == RowFamily::FStar) {
          set.add_plain("mean", reflected(est.mean, n), Rational(n + 1) - exact.mean);
          set.add_plain("variance", est.variance, exact.variance);
          break;
        }
        set.add_plain("mean", est.mean, exact.mean);
        set.add_plain("variance", est.variance, exact.variance);
        if (n >= 16) {
          const auto salvy = stats_salvy(n);
          set.add_plain("salvy_mean", salvy.mean, exact.mean);
          set.add_plain("salvy_variance", salvy.variance, exact.variance);
        }
        const auto report = dist_stats::llt_check(family, n);
        const auto mode = mode_Sstar_asymp(n);
        const double r = lambert_r(n);
        set.add_mode_index("mode_index", n, report.mode_index, mode.index, std::sqrt(n) / r);
        set.add_log("ln_mode_value", ErrorOrder::Heuristic, n,
                    bigcount::stirling2_star(n, report.mode_index), mode.log_value);
        break;
      }
      case RowFamily::T: {
        const auto exact = dist_stats::stats_T_closed(n);
        const auto est = stats_T_asymp(n);
        set.add_plain("mean", est.mean, exact.mean);
        set.add_plain("variance", est.variance, exact.variance);
        const auto row = dist_stats::distribution_row(family, n);
        const auto report = dist_stats::limit_report(family, row);
        const auto mode = mode_T_asymp(n);
        set.add_mode_index("mode_index", n, report.mode_index, mode.index, std::sqrt(n));
        set.add_log("ln_mode_value", ErrorOrder::Heuristic, n, row.at(report.mode_index),
                    mode.log_value);
        set.add_log("ln_t", ErrorOrder::InvN, n, bigcount::schroeder_t(n),
                    schroeder_t_asymp(n).value);
        break;
      }
    }
  }
  return set.take();
}

void write_csv(std::ostream& out, const std::vector<ConvergenceRecord>& records, bool header) {
  if (header) out << "n,family,quantity,exact,estimate,scaled_residual,error_order\n";
  char buf[64];
  const auto fmt = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const auto& rec : records) {
    for (const auto& p : rec.points) {
      out << p.n << ',' << dist_stats::family_token(rec.family) << ',' << rec.quantity << ','
          << p.exact << ',' << fmt(p.estimate) << ',' << fmt(p.scaled_residual) << ','
          << error_order_token(rec.error_order) << '\n';
    }
  }
}

}  // namespace phylocount::asympt
