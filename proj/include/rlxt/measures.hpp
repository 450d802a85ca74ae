#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rlxt/trie.hpp"
#include "rlxt/types.hpp"

namespace rlxt {

// log2 of the binomial coefficient, via lgamma.
double log2_binomial(std::uint64_t n, std::uint64_t k);

struct EntropyContext {
  LabelString context;              // length k, '#'-padded
  std::uint64_t nodes = 0;          // n'
  std::vector<std::uint64_t> uses;  // n'_c for c in 1..sigma-1 (index 0 unused)
  double bits = 0;
};

struct EntropyReport {
  std::uint32_t k = 0;
  double bits = 0;
  std::vector<EntropyContext> contexts;  // in co-lex order of first occurrence
};

// Worst-case k-th order entropy: nodes grouped by their length-k context,
// each group costing sum_c log2 C(n', n'_c).
EntropyReport entropy_hk(const LabeledTrie& trie, const ColexOrder& colex, std::uint32_t k);

// Number of c-run breaks over all labels.
std::uint64_t run_breaks(const LabeledTrie& trie, const ColexOrder& colex);

struct EntropyBound {
  std::uint32_t k = 0;
  double entropy = 0;
  double bound = 0;  // entropy + sigma^(k+1)
  bool holds = false;
};

struct EntropyBoundsReport {
  std::uint64_t r = 0;
  std::vector<EntropyBound> per_k;
  double two_h0_plus_one = 0;
  bool two_h0_holds = false;
  bool ok() const;
};

// Relative tolerance used when comparing entropies.
inline constexpr double kEntropyTolerance = 1e-9;

EntropyBoundsReport check_entropy_bounds(const LabeledTrie& trie, const ColexOrder& colex,
                                         std::uint32_t k_max);

using Edge = std::pair<NodeId, NodeId>;  // (parent, child) pre-order ids

// Edges (u_i, child_c(u_i)) for every c-run break i.
std::vector<Edge> gamma_r(const LabeledTrie& trie, const ColexOrder& colex);

enum class AttractorMode { kCompleteSubtrees, kAllConnected };
inline constexpr NodeId kAllConnectedLimit = 12;

// Every candidate subtree with at least one edge has an occurrence touching
// `edges`. Throws SizeError in all-connected mode when n > 12.
bool verify_attractor(const LabeledTrie& trie, const std::vector<Edge>& edges, AttractorMode mode);

enum class Relation { kSameOut, kIsomorphic, kIsomorphicSameLabel };
const char* relation_name(Relation r);

struct QuotientReport {
  Relation relation = Relation::kSameOut;
  std::vector<std::pair<ColexRank, ColexRank>> classes;  // maximal convex runs
  std::uint64_t omega = 0;  // sum of out-degrees of each class's last node
};

QuotientReport quotient(const LabeledTrie& trie, const ColexOrder& colex, Relation relation);

// Canonical id per node; equal ids iff complete subtrees are isomorphic.
std::vector<std::uint32_t> subtree_classes(const LabeledTrie& trie);

}  // namespace rlxt
