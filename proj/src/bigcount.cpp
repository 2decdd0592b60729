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

#include "phylocount/bigcount.hpp"

#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

namespace phylocount::bigcount {

namespace {

int first_row(Family family) { return family == Family::Ttriangle ? 1 : 0; }

// Pointer to A(n,k) inside `row`, or nullptr outside the stored support.
const BigInt* entry(const Row& row, int k) {
  const int i = k - row.k_min;
  if (i < 0 || i >= static_cast<int>(row.values.size())) return nullptr;
  return &row.values[static_cast<size_t>(i)];
}

void add_scaled(BigInt& acc, const BigInt* term, unsigned long factor) {
  if (term != nullptr && factor != 0) {
    mpz_addmul_ui(acc.get_mpz_t(), term->get_mpz_t(), factor);
  }
}

Row base_row(Family family) {
  // S(0,0) = S*(0,0) = 1 and T(1,0) = 1 (the single-leaf tree). None of
  // these are reachable through the public accessors.
  Row row;
  row.n = first_row(family);
  row.k_min = 0;
  row.values = {BigInt(1)};
  return row;
}

void require_positive_n(int n, const char* what) {
  if (n < 1) {
    throw DomainError(std::string(what) + ": n must be >= 1, got " +
                      std::to_string(n));
  }
}

}  // namespace

std::string family_token(Family family) {
  switch (family) {
    case Family::StirlingS:
      return "s";
    case Family::StirlingStar:
      return "sstar";
    case Family::Ttriangle:
      return "t";
  }
  return "?";
}

Family parse_family(const std::string& token) {
  if (token == "s") return Family::StirlingS;
  if (token == "sstar") return Family::StirlingStar;
  if (token == "t") return Family::Ttriangle;
  throw DomainError("unknown triangle family '" + token + "'");
}

std::pair<int, int> support(Family family, int n) {
  switch (family) {
    case Family::StirlingS:
      if (n == 0) return {0, 0};
      return {1, n};
    case Family::StirlingStar:
      if (n == 0) return {0, 0};
      return {1, n / 2};
    case Family::Ttriangle:
      if (n == 1) return {0, 0};
      return {1, n - 1};
  }
  return {1, 0};
}

BigInt Row::at(int k) const {
  const BigInt* p = entry(*this, k);
  return p == nullptr ? BigInt(0) : *p;
}

BigInt Row::sum() const {
  BigInt total = 0;
  for (const auto& v : values) total += v;
  return total;
}

Row next_row(Family family, const Row& prev, const Row& prev2) {
  Row row;
  row.n = prev.n + 1;
  const int n = row.n;
  const auto [k_min, k_max] = support(family, n);
  row.k_min = k_min;
  if (k_max < k_min) return row;
  row.values.resize(static_cast<size_t>(k_max - k_min + 1));
  for (int k = k_min; k <= k_max; ++k) {
    BigInt& out = row.values[static_cast<size_t>(k - k_min)];
    const auto uk = static_cast<unsigned long>(k);
    switch (family) {
      case Family::StirlingS:
        // S(n,k) = S(n-1,k-1) + k S(n-1,k)
        add_scaled(out, entry(prev, k - 1), 1);
        add_scaled(out, entry(prev, k), uk);
        break;
      case Family::StirlingStar:
        // S*(n,k) = (n-1) S*(n-2,k-1) + k S*(n-1,k)
        add_scaled(out, entry(prev2, k - 1), static_cast<unsigned long>(n - 1));
        add_scaled(out, entry(prev, k), uk);
        break;
      case Family::Ttriangle:
        // T(n,k) = (n+k-2) T(n-1,k-1) + k T(n-1,k)
        add_scaled(out, entry(prev, k - 1), static_cast<unsigned long>(n + k - 2));
        add_scaled(out, entry(prev, k), uk);
        break;
    }
  }
  return row;
}

RowGenerator::RowGenerator(Family family)
    : family_(family), current_(base_row(family)) {
  previous_.n = current_.n - 1;
}

const Row& RowGenerator::advance() {
  Row next = next_row(family_, current_, previous_);
  previous_ = std::move(current_);
  current_ = std::move(next);
  return current_;
}

const Row& RowGenerator::advance_to(int n) {
  if (n < current_.n) {
    throw DomainError("RowGenerator cannot move backwards");
  }
  while (current_.n < n) advance();
  return current_;
}

Row compute_row(Family family, int n) {
  if (n < first_row(family)) {
    throw DomainError("compute_row: row index out of range");
  }
  RowGenerator gen(family);
  return gen.advance_to(n);
}

CountTriangle::CountTriangle(Family family)
    : family_(family), mutex_(std::make_unique<std::mutex>()) {
  rows_.push_back(base_row(family));
}

CountTriangle::CountTriangle(CountTriangle&& other) noexcept = default;
CountTriangle& CountTriangle::operator=(CountTriangle&& other) noexcept = default;

int CountTriangle::max_row() const {
  std::lock_guard lock(*mutex_);
  return first_row(family_) + static_cast<int>(rows_.size()) - 1;
}

void CountTriangle::extend_to(int n) {
  std::lock_guard lock(*mutex_);
  const int base = first_row(family_);
  while (base + static_cast<int>(rows_.size()) - 1 < n) {
    const Row& prev = rows_.back();
    static const Row kEmpty;
    const Row& prev2 = rows_.size() >= 2 ? rows_[rows_.size() - 2] : kEmpty;
    rows_.push_back(next_row(family_, prev, prev2));
  }
}

const Row& CountTriangle::row(int n) {
  const int base = first_row(family_);
  if (n < base) throw DomainError("CountTriangle::row: index out of range");
  extend_to(n);
  std::lock_guard lock(*mutex_);
  return rows_[static_cast<size_t>(n - base)];
}

BigInt CountTriangle::at(int n, int k) { return row(n).at(k); }

void CountTriangle::write_cache(std::ostream& out) const {
  std::lock_guard lock(*mutex_);
  for (const auto& row : rows_) {
    if (row.n < 1) continue;  // hidden base row
    out << family_token(family_) << ',' << row.n << ',' << row.k_min;
    for (const auto& v : row.values) out << ',' << v.get_str(10);
    out << '\n';
  }
}

CountTriangle CountTriangle::read_cache(std::istream& in) {
  std::string line;
  std::optional<CountTriangle> triangle;
  int expected_n = 0;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    const auto fail = [&](const std::string& why) {
      return DomainError("cache line " + std::to_string(line_no) + ": " + why);
    };
    if (fields.size() < 3) throw fail("expected family,n,k_min,values...");
    const Family family = parse_family(fields[0]);
    int n = 0;
    int k_min = 0;
    try {
      n = std::stoi(fields[1]);
      k_min = std::stoi(fields[2]);
    } catch (const std::exception&) {
      throw fail("malformed row header");
    }
    if (!triangle) {
      triangle.emplace(family);
      expected_n = 1;
    }
    if (family != triangle->family_) throw fail("mixed families");
    if (n != expected_n) throw fail("rows must be consecutive starting at n=1");
    const auto [s_min, s_max] = support(family, n);
    Row row;
    row.n = n;
    row.k_min = k_min;
    for (size_t i = 3; i < fields.size(); ++i) {
      BigInt v;
      if (v.set_str(fields[i], 10) != 0 || sgn(v) <= 0) {
        throw fail("bad value '" + fields[i] + "'");
      }
      row.values.push_back(std::move(v));
    }
    if (k_min != s_min || row.k_max() != std::max(s_max, s_min - 1)) {
      throw fail("row does not match the family's support");
    }
    if (family == Family::Ttriangle && n == 1) {
      triangle->rows_[0] = std::move(row);
    } else {
      triangle->rows_.push_back(std::move(row));
    }
    ++expected_n;
  }
  if (!triangle) throw DomainError("empty cache file");
  return std::move(*triangle);
}

namespace {

CountTriangle& shared_triangle(Family family) {
  static CountTriangle s(Family::StirlingS);
  static CountTriangle s_star(Family::StirlingStar);
  static CountTriangle t(Family::Ttriangle);
  switch (family) {
    case Family::StirlingS:
      return s;
    case Family::StirlingStar:
      return s_star;
    case Family::Ttriangle:
      break;
  }
  return t;
}

struct SequenceState {
  explicit SequenceState(Family family) : generator(family) {}
  std::mutex mutex;
  RowGenerator generator;
  std::vector<BigInt> values;  // values[i] is the n = i + 1 term
};

SequenceState& shared_sequence(SequenceKind kind) {
  static SequenceState bell_state(Family::StirlingS);
  static SequenceState bell_star_state(Family::StirlingStar);
  static SequenceState t_state(Family::Ttriangle);
  switch (kind) {
    case SequenceKind::Bell:
      return bell_state;
    case SequenceKind::BellStar:
      return bell_star_state;
    case SequenceKind::SchroederT:
      break;
  }
  return t_state;
}

}  // namespace

BigSequence sequence(SequenceKind kind, int n_max) {
  SequenceState& state = shared_sequence(kind);
  std::lock_guard lock(state.mutex);
  if (kind == SequenceKind::SchroederT && state.values.empty()) {
    state.values.push_back(state.generator.current().sum());  // t_1
  }
  while (static_cast<int>(state.values.size()) < n_max) {
    state.values.push_back(state.generator.advance().sum());
  }
  BigSequence out{kind, {}};
  out.values.assign(state.values.begin(),
                    state.values.begin() + std::max(n_max, 0));
  return out;
}

namespace {

BigInt sequence_term(SequenceKind kind, int n) {
  SequenceState& state = shared_sequence(kind);
  {
    std::lock_guard lock(state.mutex);
    if (static_cast<int>(state.values.size()) >= n) {
      return state.values[static_cast<size_t>(n - 1)];
    }
  }
  return sequence(kind, n)[n];
}

}  // namespace

BigInt stirling2(int n, int k) {
  require_positive_n(n, "stirling2");
  if (k < 1 || k > n) return 0;
  return shared_triangle(Family::StirlingS).at(n, k);
}

BigInt stirling2_star(int n, int k) {
  require_positive_n(n, "stirling2_star");
  if (k < 1 || 2 * k > n) return 0;
  return shared_triangle(Family::StirlingStar).at(n, k);
}

BigInt tree_count_T(int n, int m) {
  if (n < 2 || m < 1) {
    throw DomainError("tree_count_T: need n >= 2 and m >= 1");
  }
  if (m >= n) return 0;
  return shared_triangle(Family::Ttriangle).at(n, m);
}

BigInt tree_count_via_partition(int n, int m) {
  if (n < 2 || m < 1) {
    throw DomainError("tree_count_via_partition: need n >= 2 and m >= 1");
  }
  return stirling2_star(n + m - 1, m);
}

BigInt semilabeled_F(int n, int k) {
  require_positive_n(n, "semilabeled_F");
  if (k < 1 || k > n) return 0;
  return stirling2(n, n - k + 1);
}

BigInt phylo_F_star(int n, int k) {
  require_positive_n(n, "phylo_F_star");
  if (k < 1 || k > n) return 0;
  return stirling2_star(n, n - k + 1);
}

BigInt bell(int n) {
  require_positive_n(n, "bell");
  return sequence_term(SequenceKind::Bell, n);
}

BigInt bell_star(int n) {
  require_positive_n(n, "bell_star");
  return sequence_term(SequenceKind::BellStar, n);
}

BigInt schroeder_t(int n) {
  require_positive_n(n, "schroeder_t");
  return sequence_term(SequenceKind::SchroederT, n);
}

BigInt bell_star_alternating(int n) {
  if (n < 2) throw DomainError("bell_star_alternating: n must be >= 2");
  const BigSequence b = sequence(SequenceKind::Bell, n - 1);
  BigInt total = 0;
  for (int i = 1; i <= n - 1; ++i) {
    if ((n - 1 - i) % 2 == 0) {
      total += b[i];
    } else {
      total -= b[i];
    }
  }
  return total;
}

}  // namespace phylocount::bigcount
