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

#ifndef PHYLOCOUNT_BIGCOUNT_HPP_
#define PHYLOCOUNT_BIGCOUNT_HPP_

#include <deque>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "phylocount/numeric.hpp"

// Exact counting arrays for set partitions and phylogenetic trees.
//
//   S(n,k)   partitions of an n-set into k classes
//   S*(n,k)  partitions of an n-set into k classes of size >= 2
//   T(n,m)   rooted phylogenetic trees, n labeled leaves, m internal vertices
//
// together with the reflected views F(n,k) = S(n,n-k+1) and
// F*(n,k) = S*(n,n-k+1), and the row sums B_n, B*_n, t_n. Every sequence is
// indexed from 1.
namespace phylocount::bigcount {

enum class Family { StirlingS, StirlingStar, Ttriangle };

std::string family_token(Family family);  // "s", "sstar", "t"
Family parse_family(const std::string& token);

// Inclusive support [k_min, k_max] of row n; empty when k_max < k_min.
// Row 0 (S, S*) and row 1 of T are base rows.
std::pair<int, int> support(Family family, int n);

struct Row {
  int n = 0;
  int k_min = 0;
  std::vector<BigInt> values;  // values[i] = A(n, k_min + i)

  int k_max() const { return k_min + static_cast<int>(values.size()) - 1; }
  bool empty() const { return values.empty(); }
  BigInt at(int k) const;  // zero outside the support
  BigInt sum() const;
};

// Steps a triangle forward one row at a time keeping only the rows the
// recurrence needs. Used for rows too large to keep a whole triangle of.
class RowGenerator {
 public:
  explicit RowGenerator(Family family);

  Family family() const { return family_; }
  const Row& current() const { return current_; }
  const Row& advance();
  const Row& advance_to(int n);

 private:
  Family family_;
  Row previous_;
  Row current_;
};

// One recurrence step. `prev2` is only read for StirlingStar.
Row next_row(Family family, const Row& prev, const Row& prev2);

// Row n computed from scratch without touching any cache.
Row compute_row(Family family, int n);

// Lazily extended triangle. Rows are immutable once published, and the
// references returned by row() stay valid for the triangle's lifetime.
class CountTriangle {
 public:
  explicit CountTriangle(Family family);
  CountTriangle(CountTriangle&& other) noexcept;
  CountTriangle& operator=(CountTriangle&& other) noexcept;

  Family family() const { return family_; }
  const Row& row(int n);
  BigInt at(int n, int k);
  int max_row() const;

  // One record per row: `family,n,k_min,v1,v2,...` in base 10.
  void write_cache(std::ostream& out) const;
  static CountTriangle read_cache(std::istream& in);

 private:
  void extend_to(int n);

  Family family_;
  std::deque<Row> rows_;  // rows_[i] holds row first_row + i
  std::unique_ptr<std::mutex> mutex_;
};

BigInt stirling2(int n, int k);
BigInt stirling2_star(int n, int k);
BigInt tree_count_T(int n, int m);
BigInt tree_count_via_partition(int n, int m);
BigInt semilabeled_F(int n, int k);
BigInt phylo_F_star(int n, int k);

enum class SequenceKind { Bell, BellStar, SchroederT };

struct BigSequence {
  SequenceKind kind;
  std::vector<BigInt> values;  // values[0] is the n = 1 term

  const BigInt& operator[](int n) const { return values.at(n - 1); }
  int size() const { return static_cast<int>(values.size()); }
};

// Row sums of the matching triangle for n = 1..n_max. Cached process-wide.
BigSequence sequence(SequenceKind kind, int n_max);

BigInt bell(int n);
BigInt bell_star(int n);
BigInt schroeder_t(int n);

// sum_{i=1}^{n-1} (-1)^{n-1-i} B_i, which equals B*_n.
BigInt bell_star_alternating(int n);

}  // namespace phylocount::bigcount

#endif  // PHYLOCOUNT_BIGCOUNT_HPP_
