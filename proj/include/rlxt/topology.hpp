#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rlxt/bitvector.hpp"
#include "rlxt/types.hpp"

namespace rlxt {

class Alphabet;
class LabeledTrie;
class MarkSet;

// Balanced-parentheses topology of a pre-order numbered tree. Open parens are
// 1 bits; the i-th open paren is node i. Excess queries use 512-bit blocks
// with a min-excess segment tree on top and byte tables inside blocks.
class BpsTopology {
 public:
  BpsTopology() : BpsTopology(BitVec::from_string("10")) {}
  explicit BpsTopology(const LabeledTrie& trie);
  // Throws FormatError when `parens` is not one balanced tree.
  explicit BpsTopology(BitVec parens);

  NodeId size() const { return n_; }
  const BitVec& parens() const { return parens_; }

  std::uint64_t open(NodeId u) const;
  std::uint64_t close(NodeId u) const;
  NodeId node_at(std::uint64_t open_pos) const { return static_cast<NodeId>(parens_.rank1(open_pos)); }

  NodeId parent(NodeId u) const;  // kNoNode for the root
  std::uint32_t depth(NodeId u) const;
  NodeId subtree_end(NodeId u) const;
  std::uint32_t degree(NodeId u) const;
  // k-th child (1-based) in pre-order.
  NodeId cbr(NodeId u, std::uint32_t k) const;
  // Sibling rank of u among its parent's children, 1-based.
  std::uint32_t sr(NodeId u) const;
  NodeId lca(NodeId u, NodeId v) const;
  // Ancestor l levels above u.
  NodeId laq(NodeId u, std::uint32_t l) const;
  // Image of descendant v of u inside the subtree of u2 (assumed isomorphic).
  NodeId isd(NodeId u, NodeId v, NodeId u2) const;
  bool is_ancestor(NodeId a, NodeId u) const;  // reflexive

  std::optional<NodeId> next_marked_in_subtree(const MarkSet& marks, NodeId u) const;
  NodeId lowest_covering_ancestor(const MarkSet& marks, NodeId u) const;

  // parent[u] for u in 1..n (index 0 unused, parent[1] = 0).
  std::vector<NodeId> parents() const;

  std::uint64_t size_in_bits() const;
  friend bool operator==(const BpsTopology& a, const BpsTopology& b) {
    return a.parens_ == b.parens_;
  }

 private:
  struct MinCount {
    std::int64_t min;
    std::uint64_t count;
  };

  void check(NodeId u) const;
  void build();
  std::int64_t excess(std::uint64_t q) const;
  std::uint8_t byte_at(std::uint64_t bit_index) const;
  // Smallest q > p with excess(q) <= t.
  std::optional<std::uint64_t> fwd_le(std::uint64_t p, std::int64_t t) const;
  // Largest q < p with excess(q) <= t.
  std::optional<std::uint64_t> bwd_le(std::uint64_t p, std::int64_t t) const;
  // Minimum of excess(q) over a <= q <= b and its multiplicity.
  MinCount range_min(std::uint64_t a, std::uint64_t b) const;
  // Position of the k-th q in [a, b] with excess(q) == m, where m is the range minimum.
  std::uint64_t select_min(std::uint64_t a, std::uint64_t b, std::int64_t m, std::uint64_t k) const;
  MinCount scan_min(std::uint64_t a, std::uint64_t b) const;
  std::optional<std::uint64_t> scan_fwd(std::uint64_t a, std::uint64_t b, std::int64_t t) const;
  std::optional<std::uint64_t> scan_bwd(std::uint64_t a, std::uint64_t b, std::int64_t t) const;
  std::optional<std::uint64_t> scan_select(std::uint64_t a, std::uint64_t b, std::int64_t m,
                                           std::uint64_t& k) const;
  std::vector<std::uint64_t> cover_blocks(std::uint64_t b1, std::uint64_t b2) const;

  NodeId n_ = 1;
  BitVec parens_;
  std::uint64_t nblocks_ = 0;
  std::uint64_t leaves_ = 1;          // segment tree leaf count (power of two)
  std::vector<MinCount> tree_;        // 1-based heap layout
};

// Subset of nodes flagged at their open parenthesis.
class MarkSet {
 public:
  MarkSet() = default;
  MarkSet(const BpsTopology& topo, std::span<const NodeId> nodes);

  bool contains_open(std::uint64_t pos) const { return bits_.access(pos); }
  const SparseBitVec& bits() const { return bits_; }
  std::uint64_t size_in_bits() const { return bits_.size_in_bits(); }

 private:
  SparseBitVec bits_;
};

// `labels[u]` for u in 1..n; index 0 unused.
LabeledTrie rebuild_trie(const BpsTopology& topo, std::span<const Label> labels,
                         const Alphabet& alphabet);

}  // namespace rlxt
