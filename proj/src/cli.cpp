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

#include "phylocount/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "phylocount/asympt.hpp"
#include "phylocount/bigcount.hpp"
#include "phylocount/dist_stats.hpp"
#include "phylocount/genpoly.hpp"
#include "phylocount/oracle.hpp"

namespace phylocount::cli {

namespace {

using nlohmann::ordered_json;
using dist_stats::RowFamily;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string family = "s";
  bool family_given = false;
  std::string n_text;
  std::vector<int> ns;
  Format format = Format::Plain;
  std::string cache_path;
  Rational width;
  bool unsafe_sizes = false;
  std::string suite;
  std::string dump_path;
};

// ---------------------------------------------------------------------------
// Record output. Every command builds a list of flat records; the three
// formats differ only in how the records are laid out.

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string render_cell(const ordered_json& v) {
  switch (v.type()) {
    case ordered_json::value_t::null:
      return "";
    case ordered_json::value_t::string:
      return v.get<std::string>();
    case ordered_json::value_t::boolean:
      return v.get<bool>() ? "true" : "false";
    case ordered_json::value_t::number_float:
      return format_double(v.get<double>());
    case ordered_json::value_t::array: {
      std::string joined;
      for (size_t i = 0; i < v.size(); ++i) {
        if (i > 0) joined += ',';
        joined += render_cell(v[i]);
      }
      return joined;
    }
    default:
      return v.dump();
  }
}

std::string csv_quote(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string quoted = "\"";
  for (char c : cell) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

class Report {
 public:
  void add(ordered_json record) { records_.push_back(std::move(record)); }
  bool empty() const { return records_.empty(); }

  void write(std::ostream& out, Format format) const {
    switch (format) {
      case Format::Json:
        write_json(out);
        break;
      case Format::Csv:
        write_csv(out);
        break;
      case Format::Plain:
        write_plain(out);
        break;
    }
  }

 private:
  std::vector<std::string> columns() const {
    std::vector<std::string> cols;
    for (const auto& r : records_) {
      for (const auto& [key, _] : r.items()) {
        if (std::find(cols.begin(), cols.end(), key) == cols.end()) cols.push_back(key);
      }
    }
    return cols;
  }

  void write_csv(std::ostream& out) const {
    const auto cols = columns();
    for (size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << csv_quote(cols[i]);
    out << '\n';
    for (const auto& r : records_) {
      for (size_t i = 0; i < cols.size(); ++i) {
        const auto it = r.find(cols[i]);
        out << (i ? "," : "") << (it == r.end() ? "" : csv_quote(render_cell(*it)));
      }
      out << '\n';
    }
  }

  void write_plain(std::ostream& out) const {
    for (const auto& r : records_) {
      bool first = true;
      for (const auto& [key, value] : r.items()) {
        if (value.is_null() || (value.is_string() && value.get<std::string>().empty())) continue;
        out << (first ? "" : " ") << key << '=' << render_cell(value);
        first = false;
      }
      out << '\n';
    }
  }

  // Floats go through %.17g by hand so the JSON and CSV renderings agree.
  static void write_value(std::ostream& out, const ordered_json& v) {
    if (v.is_number_float()) {
      const double x = v.get<double>();
      if (std::isfinite(x)) {
        out << format_double(x);
      } else {
        out << "null";
      }
    } else if (v.is_array()) {
      out << '[';
      for (size_t i = 0; i < v.size(); ++i) {
        if (i) out << ',';
        write_value(out, v[i]);
      }
      out << ']';
    } else if (v.is_object()) {
      out << '{';
      bool first = true;
      for (const auto& [key, value] : v.items()) {
        out << (first ? "" : ",") << ordered_json(key).dump() << ':';
        write_value(out, value);
        first = false;
      }
      out << '}';
    } else {
      out << v.dump();
    }
  }

  void write_json(std::ostream& out) const {
    out << "[\n";
    for (size_t i = 0; i < records_.size(); ++i) {
      out << "  ";
      write_value(out, records_[i]);
      out << (i + 1 < records_.size() ? ",\n" : "\n");
    }
    out << "]\n";
  }

  std::vector<ordered_json> records_;
};

ordered_json strings(const bigcount::Row& row) {
  ordered_json values = ordered_json::array();
  for (const auto& v : row.values) values.push_back(to_string(v));
  return values;
}

std::string interval_text(const genpoly::RootInterval& iv) {
  if (iv.exact()) return "{" + to_string(iv.lo) + "}";
  return "(" + to_string(iv.lo) + " " + to_string(iv.hi) + ")";
}

ordered_json intervals(const genpoly::RootIntervals& roots, Format format) {
  if (format == Format::Json) return ordered_json(genpoly::to_json(roots));
  std::string text;
  for (const auto& iv : roots.intervals) {
    if (!text.empty()) text += ';';
    text += interval_text(iv);
  }
  return text;
}

std::set<int> as_set(const std::vector<int>& ns) { return {ns.begin(), ns.end()}; }

bigcount::Family base_family(const std::string& token) {
  if (token == "s" || token == "sstar" || token == "t") return bigcount::parse_family(token);
  throw UsageError("family '" + token + "' has no stored triangle; use s, sstar or t");
}

// ---------------------------------------------------------------------------
// Cache files.

std::optional<bigcount::CountTriangle> load_cache(const std::string& path,
                                                  bigcount::Family family) {
  if (path.empty() || !std::filesystem::exists(path)) return std::nullopt;
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open cache file " + path);
  auto triangle = bigcount::CountTriangle::read_cache(in);
  if (triangle.family() != family) {
    throw UsageError("cache file " + path + " holds family '" +
                     bigcount::family_token(triangle.family()) + "'");
  }
  return triangle;
}

void store_cache(const std::string& path, const bigcount::CountTriangle& triangle) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw UsageError("cannot write cache file " + path);
    triangle.write_cache(out);
    if (!out) throw UsageError("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// table

int cmd_table(const RunConfig& cfg, Report& report) {
  const RowFamily family = dist_stats::parse_family(cfg.family);
  const auto emit = [&](const bigcount::Row& row, int n) {
    ordered_json r;
    r["family"] = cfg.family;
    r["n"] = n;
    r["k_min"] = row.k_min;
    r["k_max"] = row.k_max();
    r["row"] = strings(row);
    r["sum"] = to_string(row.sum());
    report.add(std::move(r));
  };

  if (family == RowFamily::F || family == RowFamily::FStar) {
    if (!cfg.cache_path.empty()) throw UsageError("--cache applies to s, sstar and t only");
    const auto wanted = as_set(cfg.ns);
    dist_stats::for_each_row(family, cfg.ns.front(), cfg.ns.back(), [&](const bigcount::Row& row) {
      if (wanted.count(row.n)) emit(row, row.n);
    });
    return kExitPass;
  }

  const bigcount::Family base = base_family(cfg.family);
  if (!cfg.cache_path.empty()) {
    auto triangle = load_cache(cfg.cache_path, base);
    if (!triangle) triangle.emplace(base);
    const int before = triangle->max_row();
    for (int n : cfg.ns) emit(triangle->row(n), n);
    if (triangle->max_row() > before || !std::filesystem::exists(cfg.cache_path)) {
      store_cache(cfg.cache_path, *triangle);
    }
    return kExitPass;
  }

  bigcount::RowGenerator gen(base);
  for (int n : cfg.ns) emit(gen.advance_to(n), n);
  return kExitPass;
}

// ---------------------------------------------------------------------------
// stats

std::optional<dist_stats::DistStats> closed_form(RowFamily family, int n) {
  dist_stats::DistStats s;
  switch (family) {
    case RowFamily::S:
    case RowFamily::F:
      s = dist_stats::stats_S_closed(n);
      break;
    case RowFamily::SStar:
    case RowFamily::FStar:
      if (n < 4) return std::nullopt;
      s = dist_stats::stats_Sstar_closed(n);
      break;
    case RowFamily::T:
      s = dist_stats::stats_T_closed(n);
      break;
  }
  if (family == RowFamily::F || family == RowFamily::FStar) s.mean = Rational(n + 1) - s.mean;
  return s;
}

int cmd_stats(const RunConfig& cfg, Report& report) {
  const RowFamily family = dist_stats::parse_family(cfg.family);
  const auto wanted = as_set(cfg.ns);
  bool all_agree = true;
  dist_stats::for_each_row(family, cfg.ns.front(), cfg.ns.back(), [&](const bigcount::Row& row) {
    const int n = row.n;
    if (!wanted.count(n)) return;
    ordered_json r;
    r["family"] = cfg.family;
    r["n"] = n;
    if (row.empty()) {
      r["status"] = "empty row";
      report.add(std::move(r));
      return;
    }
    const auto stats = dist_stats::row_stats_pgf(family, row);
    r["mean"] = to_string(stats.mean);
    r["variance"] = to_string(stats.variance);
    r["mean_float"] = stats.mean_f;
    r["variance_float"] = stats.var_f;
    const auto closed = closed_form(family, n);
    if (!closed) {
      r["closed_form"] = "n/a";
    } else if (closed->mean == stats.mean && closed->variance == stats.variance) {
      r["closed_form"] = "agree";
    } else {
      r["closed_form"] = "DISAGREE";
      all_agree = false;
    }
    if (sgn(stats.variance) > 0) {
      const auto lim = dist_stats::limit_report(family, row);
      r["clt_distance"] = lim.sup_cdf_distance;
      r["llt_value"] = lim.llt_value_at_mode;
      r["llt_error"] = std::abs(lim.llt_value_at_mode - dist_stats::kLltTarget);
      r["mode_index"] = lim.mode_index;
      r["mode_tie"] = lim.mode_tie;
      r["mode_offset"] = lim.mode_offset;
    }
    report.add(std::move(r));
  });
  return all_agree ? kExitPass : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// compare

int cmd_compare(const RunConfig& cfg, Report& report, std::ostream& out) {
  const auto records = asympt::compare_family(dist_stats::parse_family(cfg.family), cfg.ns);
  if (cfg.format != Format::Json) {
    asympt::write_csv(out, records);
    return kExitPass;
  }
  for (const auto& rec : records) {
    for (const auto& p : rec.points) {
      ordered_json r;
      r["n"] = p.n;
      r["family"] = cfg.family;
      r["quantity"] = rec.quantity;
      r["exact"] = p.exact;
      r["exact_float"] = p.exact_f;
      r["estimate"] = p.estimate;
      r["scaled_residual"] = p.scaled_residual;
      r["error_order"] = asympt::error_order_token(rec.error_order);
      r["bounded"] = rec.bounded();
      report.add(std::move(r));
    }
  }
  return kExitPass;
}

// ---------------------------------------------------------------------------
// verify

class Checks {
 public:
  Checks(std::string suite, Report& report) : suite_(std::move(suite)), report_(report) {}

  void add(const std::string& check, const std::string& family, int n, bool pass,
           const std::string& detail = "", ordered_json extra = ordered_json::object()) {
    ordered_json r;
    r["suite"] = suite_;
    r["check"] = check;
    r["family"] = family;
    r["n"] = n;
    r["status"] = pass ? "pass" : "FAIL";
    r["detail"] = detail;
    for (auto& [key, value] : extra.items()) r[key] = value;
    report_.add(std::move(r));
    ++total_;
    if (!pass) ++failed_;
  }

  void skip(const std::string& check, const std::string& family, int n, const std::string& why) {
    ordered_json r;
    r["suite"] = suite_;
    r["check"] = check;
    r["family"] = family;
    r["n"] = n;
    r["status"] = "skipped";
    r["detail"] = why;
    report_.add(std::move(r));
  }

  int total() const { return total_; }
  int failed() const { return failed_; }

 private:
  std::string suite_;
  Report& report_;
  int total_ = 0;
  int failed_ = 0;
};

void suite_roots(const RunConfig& cfg, Checks& checks) {
  const auto wanted = as_set(cfg.ns);
  const int n_max = cfg.ns.back();
  for (const auto& rep : genpoly::verify_tree_roots_upto(n_max, cfg.width)) {
    if (!wanted.count(rep.n)) continue;
    ordered_json extra;
    extra["roots"] = intervals(rep.roots, cfg.format);
    checks.add("tree_roots", "t", rep.n, rep.pass, rep.failure, std::move(extra));
  }
  if (n_max < 2) return;
  for (const auto& rep : genpoly::verify_interlacing_upto(n_max, cfg.width)) {
    if (!wanted.count(rep.n)) continue;
    ordered_json extra;
    extra["roots_lower"] = intervals(rep.lower_odd, cfg.format);
    extra["roots_even"] = intervals(rep.even, cfg.format);
    extra["roots_upper"] = intervals(rep.upper_odd, cfg.format);
    checks.add("interlacing", "sstar", rep.n, rep.pass, rep.first_violation, std::move(extra));
  }
}

std::string failure_detail(const genpoly::SequenceCheck& c) {
  if (c.ok || !c.first_failure) return "";
  return "first failure at k=" + std::to_string(*c.first_failure);
}

std::vector<RowFamily> suite_families(const RunConfig& cfg) {
  if (cfg.family_given) return {dist_stats::parse_family(cfg.family)};
  return {RowFamily::S, RowFamily::SStar, RowFamily::T};
}

void suite_slc(const RunConfig& cfg, Checks& checks) {
  const auto wanted = as_set(cfg.ns);
  for (RowFamily family : suite_families(cfg)) {
    const std::string token = dist_stats::family_token(family);
    dist_stats::for_each_row(family, cfg.ns.front(), cfg.ns.back(), [&](const bigcount::Row& row) {
      if (!wanted.count(row.n) || row.empty()) return;
      const auto slc = genpoly::check_slc(row.values, row.k_min);
      checks.add("slc", token, row.n, slc.ok, failure_detail(slc));
      // Newton's inequality needs the row to start at k = 1, which holds for
      // every real-rooted family here but not for the reflected ones.
      if (row.k_min == 1 && family != RowFamily::F && family != RowFamily::FStar) {
        const auto newton =
            genpoly::check_newton(row.values, static_cast<int>(row.values.size()));
        checks.add("newton", token, row.n, newton.ok, failure_detail(newton));
      }
    });
  }
}

void suite_limits(const RunConfig& cfg, Checks& checks) {
  if (cfg.ns.size() < 2) throw UsageError("the limits suite needs at least two values of n");
  const int lo = cfg.ns.front();
  const int hi = cfg.ns.back();
  for (RowFamily family : suite_families(cfg)) {
    const std::string token = dist_stats::family_token(family);
    const auto a = dist_stats::limit_report(family, dist_stats::distribution_row(family, lo));
    const auto b = dist_stats::limit_report(family, dist_stats::distribution_row(family, hi));
    const auto trend = [](double x, double y) {
      return format_double(x) + " -> " + format_double(y);
    };
    checks.add("clt_trend", token, hi, b.sup_cdf_distance < a.sup_cdf_distance,
               trend(a.sup_cdf_distance, b.sup_cdf_distance));
    const double ea = std::abs(a.llt_value_at_mode - dist_stats::kLltTarget);
    const double eb = std::abs(b.llt_value_at_mode - dist_stats::kLltTarget);
    checks.add("llt_trend", token, hi, eb < ea, trend(ea, eb));
    checks.add("mode_offset", token, hi, std::abs(b.mode_offset) < 0.5,
               format_double(b.mode_offset));
  }
}

void becker_bijection(int n, Checks& checks) {
  std::set<std::string> images;
  bool ok = true;
  std::string detail;
  oracle::for_each_partition(n, 1, [&](const oracle::SetPartition& p) {
    const bool has_singleton = std::any_of(p.blocks.begin(), p.blocks.end(),
                                           [](const auto& b) { return b.size() == 1; });
    if (!has_singleton || !ok) return;
    const auto q = oracle::becker_map(p);
    const bool singleton_free = std::all_of(q.blocks.begin(), q.blocks.end(),
                                            [](const auto& b) { return b.size() >= 2; });
    if (q.n != n + 1 || !singleton_free) {
      ok = false;
      detail = p.to_string() + " maps to " + q.to_string();
    } else if (!images.insert(q.to_string()).second) {
      ok = false;
      detail = "image " + q.to_string() + " repeats";
    } else if (!(oracle::becker_inverse(q) == oracle::canonical(p))) {
      ok = false;
      detail = "inverse fails on " + q.to_string();
    }
  });
  if (ok && BigInt(static_cast<unsigned long>(images.size())) != bigcount::bell_star(n + 1)) {
    ok = false;
    detail = std::to_string(images.size()) + " images";
  }
  checks.add("becker_bijection", "s", n, ok, detail);
}

void suite_identities(const RunConfig& cfg, Checks& checks) {
  const int n_max = cfg.ns.back();
  const auto bell = bigcount::sequence(bigcount::SequenceKind::Bell, n_max);
  const auto bell_star = bigcount::sequence(bigcount::SequenceKind::BellStar, n_max + 1);
  bigcount::CountTriangle t_tri(bigcount::Family::Ttriangle);
  bigcount::CountTriangle s_star_tri(bigcount::Family::StirlingStar);

  for (int n : cfg.ns) {
    if (n >= 2) {
      std::string detail;
      for (int m = 1; m < n && detail.empty(); ++m) {
        if (t_tri.at(n, m) != s_star_tri.at(n + m - 1, m)) {
          detail = "mismatch at m=" + std::to_string(m);
        }
      }
      checks.add("tree_partition", "t", n, detail.empty(), detail);
    }
    checks.add("becker_counts", "s", n, bell[n] == bell_star[n + 1] + bell_star[n]);
    if (n >= 2) {
      checks.add("alternating_sum", "sstar", n, bigcount::bell_star_alternating(n) == bell_star[n]);
    }
    if (n <= 10) becker_bijection(n, checks);
  }

  constexpr int kOrder = 12;
  const Rational residual = genpoly::functional_equation_residual(kOrder);
  checks.add("functional_equation", "t", kOrder, sgn(residual) == 0,
             "max residual " + to_string(residual));
}

int cmd_verify(const RunConfig& cfg, Report& report, std::ostream& out) {
  Checks checks(cfg.suite, report);
  if (cfg.suite == "roots") {
    suite_roots(cfg, checks);
  } else if (cfg.suite == "slc") {
    suite_slc(cfg, checks);
  } else if (cfg.suite == "limits") {
    suite_limits(cfg, checks);
  } else if (cfg.suite == "identities") {
    suite_identities(cfg, checks);
  } else {
    throw UsageError("unknown suite '" + cfg.suite + "'");
  }
  const bool pass = checks.failed() == 0;
  if (cfg.format == Format::Plain) {
    report.write(out, cfg.format);
    out << "verify " << cfg.suite << ": " << (pass ? "PASS" : "FAIL") << " ("
        << checks.total() - checks.failed() << "/" << checks.total() << " checks passed)\n";
    report = Report();
  }
  return pass ? kExitPass : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// oracle

int cmd_oracle(const RunConfig& cfg, Report& report, std::ostream& out) {
  const int n_max = cfg.ns.back();
  if (n_max > oracle::kMaxPartitionSize && !cfg.unsafe_sizes) {
    throw UsageError("partition enumeration is capped at n=" +
                     std::to_string(oracle::kMaxPartitionSize) + "; pass --unsafe-sizes");
  }
  std::ofstream dump;
  if (!cfg.dump_path.empty()) {
    dump.open(cfg.dump_path);
    if (!dump) throw UsageError("cannot write " + cfg.dump_path);
  }
  Checks checks("oracle", report);

  for (int n = 1; n <= n_max; ++n) {
    const auto all = oracle::enumerate_partitions(n, 1, cfg.unsafe_sizes);
    const auto free = oracle::enumerate_partitions(n, 2, cfg.unsafe_sizes);
    std::string detail;
    std::string detail_star;
    for (int k = 1; k <= n; ++k) {
      const auto k_idx = static_cast<size_t>(k);
      const unsigned long a = k_idx < all.size() ? all[k_idx] : 0;
      const unsigned long b = k_idx < free.size() ? free[k_idx] : 0;
      if (detail.empty() && BigInt(a) != bigcount::stirling2(n, k)) {
        detail = "k=" + std::to_string(k);
      }
      if (detail_star.empty() && BigInt(b) != bigcount::stirling2_star(n, k)) {
        detail_star = "k=" + std::to_string(k);
      }
    }
    checks.add("partitions", "s", n, detail.empty(), detail);
    checks.add("partitions", "sstar", n, detail_star.empty(), detail_star);
    if (dump.is_open()) oracle::dump_partitions(dump, n, 1, cfg.unsafe_sizes);

    if (n > oracle::kMaxTreeVertices && !cfg.unsafe_sizes) {
      checks.skip("trees", "f", n, "above the tree size cap");
      continue;
    }
    std::string detail_f;
    std::string detail_fstar;
    for (int k = 1; k <= n; ++k) {
      if (detail_f.empty() &&
          BigInt(static_cast<unsigned long>(oracle::enumerate_semilabeled(n, k, cfg.unsafe_sizes))) !=
              bigcount::semilabeled_F(n, k)) {
        detail_f = "k=" + std::to_string(k);
      }
      if (detail_fstar.empty() &&
          BigInt(static_cast<unsigned long>(oracle::enumerate_phylo(n, k, cfg.unsafe_sizes))) !=
              bigcount::phylo_F_star(n, k)) {
        detail_fstar = "k=" + std::to_string(k);
      }
      if (dump.is_open()) {
        oracle::dump_trees(dump, n, k, false, cfg.unsafe_sizes);
        oracle::dump_trees(dump, n, k, true, cfg.unsafe_sizes);
      }
    }
    checks.add("trees", "f", n, detail_f.empty(), detail_f);
    checks.add("trees", "fstar", n, detail_fstar.empty(), detail_fstar);

    // Trees with `leaves` labeled leaves and m internal vertices have
    // leaves + m - 1 non-root vertices.
    std::string detail_t;
    for (int leaves = 2; leaves <= n; ++leaves) {
      const int m = n + 1 - leaves;
      if (m < 1 || m >= leaves) continue;
      const auto count = oracle::enumerate_phylo_by_leaves(leaves, m, cfg.unsafe_sizes);
      if (detail_t.empty() &&
          BigInt(static_cast<unsigned long>(count)) != bigcount::tree_count_T(leaves, m)) {
        detail_t = "leaves=" + std::to_string(leaves) + " m=" + std::to_string(m);
      }
    }
    checks.add("trees", "t", n, detail_t.empty(), detail_t);
  }

  const bool pass = checks.failed() == 0;
  if (cfg.format == Format::Plain) {
    report.write(out, cfg.format);
    out << "oracle: " << (pass ? "PASS" : "FAIL") << " (" << checks.total() - checks.failed()
        << "/" << checks.total() << " checks passed)\n";
    report = Report();
  }
  return pass ? kExitPass : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// cache

int cmd_cache(const RunConfig& cfg, Report& report) {
  if (cfg.cache_path.empty()) throw UsageError("cache needs --cache PATH");
  const bigcount::Family family = base_family(cfg.family);
  std::optional<bigcount::CountTriangle> triangle;
  ordered_json r;
  r["family"] = cfg.family;
  r["path"] = cfg.cache_path;
  try {
    triangle = load_cache(cfg.cache_path, family);
  } catch (const DomainError& e) {
    r["status"] = "invalid";
    r["detail"] = e.what();
    report.add(std::move(r));
    return kExitCheckFailed;
  }
  const int before = triangle ? triangle->max_row() : 0;
  if (!triangle) triangle.emplace(family);
  triangle->row(cfg.ns.back());
  if (triangle->max_row() > before) store_cache(cfg.cache_path, *triangle);
  r["rows_before"] = before;
  r["rows_after"] = triangle->max_row();
  r["status"] = "valid";
  report.add(std::move(r));
  return kExitPass;
}

// ---------------------------------------------------------------------------

Format parse_format(const std::string& text) {
  if (text == "plain") return Format::Plain;
  if (text == "csv") return Format::Csv;
  if (text == "json") return Format::Json;
  throw UsageError("unknown format '" + text + "'");
}

struct Options {
  std::string family = "s";
  std::string n_text;
  std::string format = "plain";
  std::string cache_path;
  std::string width = "2^-48";
  bool unsafe_sizes = false;
  std::string suite;
  std::string dump_path;
};

CLI::App* add_command(CLI::App& app, const std::string& name, const std::string& help,
                      Options& o) {
  CLI::App* sub = app.add_subcommand(name, help);
  sub->add_option("--family", o.family, "s | sstar | f | fstar | t")
      ->envname("PHYLOCOUNT_FAMILY")
      ->check(CLI::IsMember({"s", "sstar", "f", "fstar", "t"}));
  sub->add_option("--n", o.n_text, "N, A..B or a comma list")->envname("PHYLOCOUNT_N");
  sub->add_option("--format", o.format, "plain | csv | json")
      ->envname("PHYLOCOUNT_FORMAT")
      ->check(CLI::IsMember({"plain", "csv", "json"}));
  return sub;
}

}  // namespace

std::vector<int> parse_n_spec(const std::string& text) {
  const auto parse_int = [&](const std::string& s) {
    size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (s.empty() || used != s.size()) throw DomainError("bad index '" + s + "' in '" + text + "'");
    if (value < 1) throw DomainError("indices start at 1, got " + s);
    return value;
  };
  std::vector<int> ns;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const auto dots = part.find("..");
    if (dots == std::string::npos) {
      ns.push_back(parse_int(part));
      continue;
    }
    const int a = parse_int(part.substr(0, dots));
    const int b = parse_int(part.substr(dots + 2));
    if (b < a) throw DomainError("empty range '" + part + "'");
    for (int n = a; n <= b; ++n) ns.push_back(n);
  }
  if (ns.empty()) throw DomainError("empty index selection");
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  return ns;
}

Rational parse_width(const std::string& text) {
  if (text.rfind("2^-", 0) == 0) {
    int k = 0;
    size_t used = 0;
    try {
      k = std::stoi(text.substr(3), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || 3 + used != text.size() || k < 1 || k > 4096) {
      throw DomainError("bad width '" + text + "'");
    }
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, static_cast<unsigned long>(k));
    return Rational(BigInt(1), den);
  }
  Rational w;
  try {
    w = parse_rational(text);
  } catch (const std::exception&) {
    throw DomainError("bad width '" + text + "'");
  }
  if (sgn(w) <= 0) throw DomainError("width must be positive");
  return w;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Exact and asymptotic counts for set partitions and phylogenetic trees",
               "phylocount");
  app.require_subcommand(1);
  Options o;

  auto* table = add_command(app, "table", "exact triangle rows and row sums", o);
  table->add_option("--cache", o.cache_path, "row cache file")->envname("PHYLOCOUNT_CACHE");

  add_command(app, "stats", "exact mean, variance and limit-theorem metrics", o);
  add_command(app, "compare", "exact values against asymptotic formulas", o);

  auto* verify = add_command(app, "verify", "run a verification suite", o);
  verify->add_option("--suite", o.suite, "roots | slc | limits | identities")
      ->envname("PHYLOCOUNT_SUITE")
      ->required()
      ->check(CLI::IsMember({"roots", "slc", "limits", "identities"}));
  verify->add_option("--width", o.width, "isolating interval width, e.g. 2^-48")
      ->envname("PHYLOCOUNT_WIDTH");

  auto* orc = add_command(app, "oracle", "brute-force enumeration against the recurrences", o);
  orc->add_flag("--unsafe-sizes", o.unsafe_sizes, "lift the enumeration size caps")
      ->envname("PHYLOCOUNT_UNSAFE_SIZES");
  orc->add_option("--dump", o.dump_path, "write enumerated objects as JSON lines")
      ->envname("PHYLOCOUNT_DUMP");

  auto* cache = add_command(app, "cache", "build, extend and validate a row cache", o);
  cache->add_option("--cache", o.cache_path, "row cache file")->envname("PHYLOCOUNT_CACHE");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  RunConfig cfg;
  Report report;
  try {
    cfg.command = app.get_subcommands().front()->get_name();
    const CLI::App* sub = app.get_subcommands().front();
    cfg.family = o.family;
    cfg.family_given = sub->get_option("--family")->count() > 0 || std::getenv("PHYLOCOUNT_FAMILY");
    cfg.format = parse_format(o.format);
    cfg.cache_path = o.cache_path;
    cfg.unsafe_sizes = o.unsafe_sizes;
    cfg.suite = o.suite;
    cfg.dump_path = o.dump_path;
    if (o.n_text.empty()) throw UsageError("--n is required");
    cfg.n_text = o.n_text;
    cfg.ns = parse_n_spec(o.n_text);
    cfg.width = parse_width(o.width);

    int code = kExitPass;
    if (cfg.command == "table") {
      code = cmd_table(cfg, report);
    } else if (cfg.command == "stats") {
      code = cmd_stats(cfg, report);
    } else if (cfg.command == "compare") {
      code = cmd_compare(cfg, report, out);
    } else if (cfg.command == "verify") {
      code = cmd_verify(cfg, report, out);
    } else if (cfg.command == "oracle") {
      code = cmd_oracle(cfg, report, out);
    } else if (cfg.command == "cache") {
      code = cmd_cache(cfg, report);
    }
    if (!report.empty()) report.write(out, cfg.format);
    return code;
  } catch (const UsageError& e) {
    err << "phylocount: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "phylocount: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "phylocount: " << e.what() << '\n';
    return kExitCheckFailed;
  }
}

}  // namespace phylocount::cli
