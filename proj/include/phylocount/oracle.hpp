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

#ifndef PHYLOCOUNT_ORACLE_HPP_
#define PHYLOCOUNT_ORACLE_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "phylocount/numeric.hpp"

// Brute-force enumeration of set partitions and rooted trees, for checking
// the recurrences at small sizes.
//
// Tree convention: the root is a marker, not a vertex. n counts the non-root
// vertices (labeled leaves plus unlabeled internal vertices). A semilabeled
// tree allows internal vertices with a single child; a phylogenetic tree
// needs at least two children at the root and at every internal vertex.
namespace phylocount::oracle {

inline constexpr int kMaxPartitionSize = 12;
inline constexpr int kMaxTreeVertices = 9;

class SizeCapError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Blocks sorted internally and ordered by their smallest element.
struct SetPartition {
  int n = 0;
  std::vector<std::vector<int>> blocks;

  bool operator==(const SetPartition&) const = default;
  std::string to_string() const;  // e.g. "{1}{2,3}"
};

SetPartition canonical(SetPartition p);

// Visits every partition of {1..n} whose blocks all have size >= min_block.
void for_each_partition(int n, int min_block, const std::function<void(const SetPartition&)>& visit,
                        bool unsafe_sizes = false);

// counts[k] = number of such partitions with k blocks, k = 0..n.
std::vector<std::uint64_t> enumerate_partitions(int n, int min_block_size = 1,
                                                bool unsafe_sizes = false);

// Merges every singleton with the new element n+1. Requires a singleton.
SetPartition becker_map(const SetPartition& p);
// Removes n+1 and turns the rest of its block into singletons. Requires a
// singleton-free partition whose block holding n+1 has size >= 2.
SetPartition becker_inverse(const SetPartition& q);

struct Tree {
  int label = 0;  // leaf label, 0 for internal vertices
  std::vector<Tree> children;

  bool is_leaf() const { return children.empty(); }
};

// A rooted tree hangs its subtrees off the root marker.
struct RootedTree {
  std::vector<Tree> subtrees;

  int vertex_count() const;  // non-root vertices
  int leaf_count() const;
  std::string canonical() const;  // children sorted, labels embedded
};

// Structural checks, independent of how the trees were generated.
bool is_semilabeled(const RootedTree& tree);
bool is_phylogenetic(const RootedTree& tree);

// All isomorphism classes with n non-root vertices and k labeled leaves.
std::vector<RootedTree> semilabeled_trees(int n, int k, bool unsafe_sizes = false);
std::vector<RootedTree> phylo_trees(int n, int k, bool unsafe_sizes = false);

std::uint64_t enumerate_semilabeled(int n, int k, bool unsafe_sizes = false);  // F(n,k)
std::uint64_t enumerate_phylo(int n, int k, bool unsafe_sizes = false);        // F*(n,k)
// T(n_leaves, m_internal), the root counted among the internal vertices.
std::uint64_t enumerate_phylo_by_leaves(int n_leaves, int m_internal, bool unsafe_sizes = false);

nlohmann::json to_json(const SetPartition& p);  // blocks as integer arrays
nlohmann::json to_json(const RootedTree& t);     // nested arrays, leaves as labels

// One JSON document per line.
void dump_partitions(std::ostream& out, int n, int min_block, bool unsafe_sizes = false);
void dump_trees(std::ostream& out, int n, int k, bool phylo, bool unsafe_sizes = false);

}  // namespace phylocount::oracle

#endif  // PHYLOCOUNT_ORACLE_HPP_
