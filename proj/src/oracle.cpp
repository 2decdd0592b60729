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

#include "phylocount/oracle.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <ostream>
#include <tuple>

namespace phylocount::oracle {

namespace {

void check_partition_size(int n, bool unsafe) {
  if (n < 1) throw DomainError("partition size must be >= 1");
  if (n > kMaxPartitionSize && !unsafe) {
    throw SizeCapError("partition enumeration is capped at n = " +
                       std::to_string(kMaxPartitionSize) + " (got " + std::to_string(n) +
                       "); pass the unsafe-sizes override to go further");
  }
}

void check_tree_size(int n, int k, bool unsafe) {
  if (n < 1 || k < 1) throw DomainError("tree enumeration needs n >= 1 and k >= 1");
  if (n > kMaxTreeVertices && !unsafe) {
    throw SizeCapError("tree enumeration is capped at " + std::to_string(kMaxTreeVertices) +
                       " non-root vertices (got " + std::to_string(n) +
                       "); pass the unsafe-sizes override to go further");
  }
  if (k > 30) throw SizeCapError("too many leaf labels");
}

}  // namespace

std::string SetPartition::to_string() const {
  std::string out;
  for (const auto& block : blocks) {
    out += '{';
    for (size_t i = 0; i < block.size(); ++i) {
      if (i > 0) out += ',';
      out += std::to_string(block[i]);
    }
    out += '}';
  }
  return out;
}

SetPartition canonical(SetPartition p) {
  for (auto& block : p.blocks) std::sort(block.begin(), block.end());
  std::sort(p.blocks.begin(), p.blocks.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return p;
}

void for_each_partition(int n, int min_block, const std::function<void(const SetPartition&)>& visit,
                        bool unsafe_sizes) {
  check_partition_size(n, unsafe_sizes);
  // Restricted growth strings: a[0] = 0, a[i] <= max(a[0..i-1]) + 1.
  std::vector<int> a(static_cast<size_t>(n), 0);
  std::vector<int> prefix_max(static_cast<size_t>(n), 0);
  SetPartition p;
  p.n = n;
  for (;;) {
    const int blocks = prefix_max.back() + 1;
    p.blocks.assign(static_cast<size_t>(blocks), {});
    for (int i = 0; i < n; ++i) p.blocks[static_cast<size_t>(a[static_cast<size_t>(i)])].push_back(i + 1);
    const bool keep = std::all_of(p.blocks.begin(), p.blocks.end(), [&](const auto& b) {
      return static_cast<int>(b.size()) >= min_block;
    });
    if (keep) visit(p);

    int i = n - 1;
    while (i > 0 && a[static_cast<size_t>(i)] > prefix_max[static_cast<size_t>(i - 1)]) --i;
    if (i == 0) return;
    ++a[static_cast<size_t>(i)];
    prefix_max[static_cast<size_t>(i)] =
        std::max(prefix_max[static_cast<size_t>(i - 1)], a[static_cast<size_t>(i)]);
    for (int j = i + 1; j < n; ++j) {
      a[static_cast<size_t>(j)] = 0;
      prefix_max[static_cast<size_t>(j)] = prefix_max[static_cast<size_t>(i)];
    }
  }
}

std::vector<std::uint64_t> enumerate_partitions(int n, int min_block_size, bool unsafe_sizes) {
  std::vector<std::uint64_t> counts(static_cast<size_t>(std::max(n, 0) + 1), 0);
  for_each_partition(
      n, min_block_size, [&](const SetPartition& p) { ++counts[p.blocks.size()]; }, unsafe_sizes);
  return counts;
}

SetPartition becker_map(const SetPartition& p) {
  SetPartition out;
  out.n = p.n + 1;
  std::vector<int> merged;
  for (const auto& block : p.blocks) {
    if (block.size() == 1) {
      merged.push_back(block.front());
    } else {
      out.blocks.push_back(block);
    }
  }
  if (merged.empty()) throw DomainError("becker_map: " + p.to_string() + " has no singleton");
  merged.push_back(p.n + 1);
  out.blocks.push_back(std::move(merged));
  return canonical(std::move(out));
}

SetPartition becker_inverse(const SetPartition& q) {
  if (q.n < 2) throw DomainError("becker_inverse: need a partition of at least 2 elements");
  SetPartition out;
  out.n = q.n - 1;
  bool found = false;
  for (const auto& block : q.blocks) {
    if (block.size() < 2) {
      throw DomainError("becker_inverse: " + q.to_string() + " has a singleton");
    }
    if (std::find(block.begin(), block.end(), q.n) == block.end()) {
      out.blocks.push_back(block);
      continue;
    }
    found = true;
    for (int x : block) {
      if (x != q.n) out.blocks.push_back({x});
    }
  }
  if (!found) throw DomainError("becker_inverse: element " + std::to_string(q.n) + " missing");
  return canonical(std::move(out));
}

// ---------------------------------------------------------------------------
// Trees

namespace {

std::string canonical_tree(const Tree& t) {
  if (t.is_leaf()) return std::to_string(t.label);
  std::vector<std::string> parts;
  for (const auto& c : t.children) parts.push_back(canonical_tree(c));
  std::sort(parts.begin(), parts.end());
  std::string out = "(";
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += ',';
    out += parts[i];
  }
  return out + ")";
}

int count_vertices(const Tree& t) {
  int total = 1;
  for (const auto& c : t.children) total += count_vertices(c);
  return total;
}

int count_leaves(const Tree& t) {
  if (t.is_leaf()) return 1;
  int total = 0;
  for (const auto& c : t.children) total += count_leaves(c);
  return total;
}

void collect_labels(const Tree& t, std::vector<int>& labels) {
  if (t.is_leaf()) labels.push_back(t.label);
  for (const auto& c : t.children) collect_labels(c, labels);
}

bool internal_ok(const Tree& t, size_t min_children) {
  if (t.is_leaf()) return t.label > 0;
  if (t.label != 0 || t.children.size() < min_children) return false;
  return std::all_of(t.children.begin(), t.children.end(),
                     [&](const Tree& c) { return internal_ok(c, min_children); });
}

// Generates every subtree with leaf-label set `mask` and exactly `v` vertices.
class TreeFactory {
 public:
  explicit TreeFactory(bool phylo) : min_children_(phylo ? 2 : 1) {}

  const std::vector<Tree>& trees(std::uint32_t mask, int v) {
    const auto key = std::make_pair(mask, v);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<Tree> out;
    const int leaves = std::popcount(mask);
    if (v == 1 && leaves == 1) {
      out.push_back(Tree{std::countr_zero(mask) + 1, {}});
    } else if (v > leaves) {
      for (auto& forest : forests(mask, v - 1, min_children_)) {
        out.push_back(Tree{0, std::move(forest)});
      }
    }
    return memo_.emplace(key, std::move(out)).first->second;
  }

  // Unordered lists of at least `min_parts` subtrees whose label sets
  // partition `mask` and whose sizes add up to `v`.
  std::vector<std::vector<Tree>> forests(std::uint32_t mask, int v, int min_parts) {
    std::vector<std::vector<Tree>> out;
    if (mask == 0) {
      if (v == 0 && min_parts <= 0) out.emplace_back();
      return out;
    }
    const std::uint32_t low = mask & (~mask + 1);
    const std::uint32_t others = mask ^ low;
    // Every subset of `others`, joined with the lowest label.
    for (std::uint32_t sub = others;; sub = (sub - 1) & others) {
      const std::uint32_t block = sub | low;
      const std::uint32_t rest = mask ^ block;
      const int rest_leaves = std::popcount(rest);
      for (int vi = std::popcount(block); vi <= v - rest_leaves; ++vi) {
        const std::vector<Tree> heads = trees(block, vi);
        if (heads.empty()) continue;
        auto tails = forests(rest, v - vi, min_parts - 1);
        for (const auto& head : heads) {
          for (const auto& tail : tails) {
            std::vector<Tree> forest = tail;
            forest.push_back(head);
            out.push_back(std::move(forest));
          }
        }
      }
      if (sub == 0) break;
    }
    return out;
  }

  int root_min_children() const { return min_children_; }

 private:
  int min_children_;
  std::map<std::pair<std::uint32_t, int>, std::vector<Tree>> memo_;
};

std::vector<RootedTree> enumerate_trees(int n, int k, bool phylo, bool unsafe) {
  check_tree_size(n, k, unsafe);
  std::map<std::string, RootedTree> classes;
  if (k <= n) {
    TreeFactory factory(phylo);
    const std::uint32_t all = (k == 32) ? ~0u : ((1u << k) - 1);
    for (auto& forest : factory.forests(all, n, factory.root_min_children())) {
      RootedTree t{std::move(forest)};
      std::string key = t.canonical();
      classes.emplace(std::move(key), std::move(t));
    }
  }
  std::vector<RootedTree> out;
  out.reserve(classes.size());
  for (auto& [key, tree] : classes) out.push_back(std::move(tree));
  return out;
}

nlohmann::json tree_json(const Tree& t) {
  if (t.is_leaf()) return t.label;
  nlohmann::json out = nlohmann::json::array();
  std::vector<std::pair<std::string, const Tree*>> order;
  for (const auto& c : t.children) order.emplace_back(canonical_tree(c), &c);
  std::sort(order.begin(), order.end());
  for (const auto& [key, child] : order) out.push_back(tree_json(*child));
  return out;
}

}  // namespace

int RootedTree::vertex_count() const {
  int total = 0;
  for (const auto& t : subtrees) total += count_vertices(t);
  return total;
}

int RootedTree::leaf_count() const {
  int total = 0;
  for (const auto& t : subtrees) total += count_leaves(t);
  return total;
}

std::string RootedTree::canonical() const {
  return "R" + canonical_tree(Tree{0, subtrees});
}

bool is_semilabeled(const RootedTree& tree) {
  if (tree.subtrees.empty()) return false;
  for (const auto& t : tree.subtrees) {
    if (!internal_ok(t, 1)) return false;
  }
  std::vector<int> labels;
  for (const auto& t : tree.subtrees) collect_labels(t, labels);
  std::sort(labels.begin(), labels.end());
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != static_cast<int>(i) + 1) return false;
  }
  return true;
}

bool is_phylogenetic(const RootedTree& tree) {
  if (!is_semilabeled(tree) || tree.subtrees.size() < 2) return false;
  return std::all_of(tree.subtrees.begin(), tree.subtrees.end(),
                     [](const Tree& t) { return internal_ok(t, 2); });
}

std::vector<RootedTree> semilabeled_trees(int n, int k, bool unsafe_sizes) {
  return enumerate_trees(n, k, false, unsafe_sizes);
}

std::vector<RootedTree> phylo_trees(int n, int k, bool unsafe_sizes) {
  return enumerate_trees(n, k, true, unsafe_sizes);
}

std::uint64_t enumerate_semilabeled(int n, int k, bool unsafe_sizes) {
  return semilabeled_trees(n, k, unsafe_sizes).size();
}

std::uint64_t enumerate_phylo(int n, int k, bool unsafe_sizes) {
  return phylo_trees(n, k, unsafe_sizes).size();
}

std::uint64_t enumerate_phylo_by_leaves(int n_leaves, int m_internal, bool unsafe_sizes) {
  if (n_leaves < 1 || m_internal < 1) {
    throw DomainError("enumerate_phylo_by_leaves needs positive sizes");
  }
  return enumerate_phylo(n_leaves + m_internal - 1, n_leaves, unsafe_sizes);
}

nlohmann::json to_json(const SetPartition& p) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : p.blocks) blocks.push_back(b);
  return {{"n", p.n}, {"blocks", blocks}};
}

nlohmann::json to_json(const RootedTree& t) {
  return {{"vertices", t.vertex_count()},
          {"leaves", t.leaf_count()},
          {"tree", tree_json(Tree{0, t.subtrees})}};
}

void dump_partitions(std::ostream& out, int n, int min_block, bool unsafe_sizes) {
  for_each_partition(
      n, min_block, [&](const SetPartition& p) { out << to_json(p).dump() << '\n'; },
      unsafe_sizes);
}

void dump_trees(std::ostream& out, int n, int k, bool phylo, bool unsafe_sizes) {
  for (const auto& t : enumerate_trees(n, k, phylo, unsafe_sizes)) {
    nlohmann::json j = to_json(t);
    j["kind"] = phylo ? "phylogenetic" : "semilabeled";
    out << j.dump() << '\n';
  }
}

}  // namespace phylocount::oracle
