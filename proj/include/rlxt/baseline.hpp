#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rlxt/bitvector.hpp"
#include "rlxt/rl_xbwt.hpp"
#include "rlxt/trie.hpp"
#include "rlxt/types.hpp"
#include "rlxt/wavelet.hpp"

namespace rlxt {

class Sections;

// Plain XBWT navigation: the out-labels of all nodes in co-lex order
// flattened into one sequence (edge positions 1..n-1), with a 0^deg 1
// boundary per node.
class XbwtNav {
 public:
  XbwtNav() : XbwtNav(LabeledTrie(), colex_sort(LabeledTrie())) {}
  XbwtNav(const LabeledTrie& trie, const ColexOrder& colex);

  NodeId size() const { return n_; }
  std::size_t sigma() const { return labels_ + 1; }
  const WaveletSeq& flat() const { return flat_; }
  const std::vector<std::uint32_t>& c_array() const { return c_; }

  // Edge positions of node i are (edges_before(i), edges_before(i+1)].
  std::uint64_t edges_before(ColexRank i) const;
  std::uint32_t degree(ColexRank i) const;
  Label label(ColexRank i) const;
  Label edge_label(std::uint64_t e) const { return static_cast<Label>(flat_.access(e) + 1); }
  // Co-lex rank of the node entered by edge e.
  ColexRank edge_target(std::uint64_t e) const;
  // Edge position entering node i (i > 1).
  std::uint64_t incoming_edge(ColexRank i) const;
  ColexRank edge_source(std::uint64_t e) const;

  ColexRank parent(ColexRank i) const;
  ColexRank child(ColexRank i, Label c) const;
  std::optional<ColexRange> backward_extend(ColexRange range, Label c) const;

  std::uint64_t size_in_bits() const;
  void save(Writer& w) const;
  static XbwtNav load(Reader& r);

  friend bool operator==(const XbwtNav& a, const XbwtNav& b) {
    return a.n_ == b.n_ && a.labels_ == b.labels_ && a.flat_ == b.flat_ && a.bounds_ == b.bounds_;
  }

 private:
  XbwtNav(int) {}
  void check(ColexRank i) const;
  void derive_c();

  NodeId n_ = 1;
  std::uint32_t labels_ = 0;
  WaveletSeq flat_;  // label c stored as c-1
  BitVec bounds_;
  std::vector<std::uint32_t> c_;
};

// A component: root plus the pieces hanging from children first..last of it.
struct CoverGroup {
  NodeId root = 0;
  NodeId first_child = 0;
  NodeId last_child = 0;
};

struct TreeCover {
  std::uint32_t t = 1;
  std::vector<bool> is_root;  // pre-order, index 0 unused
  std::vector<CoverGroup> groups;

  std::vector<NodeId> roots() const;
  // Members of each group (root included) in pre-order.
  std::vector<std::vector<NodeId>> components(const LabeledTrie& trie) const;
};

// Greedy bottom-up clustering: a component closes as soon as its pieces reach
// t nodes, and its parent node becomes a root shared with the component above.
TreeCover build_cover(const LabeledTrie& trie, std::uint32_t t);

// Sampled locate: pre-order ids stored at cover roots; every other node walks
// up to its root and replays a pre-order tour of its component.
class SampledIndex {
 public:
  SampledIndex() : SampledIndex(LabeledTrie(), 1) {}
  SampledIndex(const LabeledTrie& trie, std::uint32_t t);

  NodeId size() const { return nav_.size(); }
  std::uint32_t t() const { return t_; }
  const Alphabet& alphabet() const { return alphabet_; }
  const XbwtNav& nav() const { return nav_; }
  std::uint64_t roots() const { return roots_.ones(); }

  NodeId preorder(ColexRank i) const;
  std::optional<ColexRange> range(std::span<const Label> pattern) const;
  std::vector<NodeId> locate(std::span<const Label> pattern) const;
  std::uint64_t count(std::span<const Label> pattern) const;
  std::vector<NodeId> locate(std::string_view pattern) const;
  std::uint64_t count(std::string_view pattern) const;

  LabeledTrie reconstruct() const;
  // Bits of the sampling structures (roots, samples, sizes, groups).
  std::uint64_t sampling_bits() const;
  std::uint64_t size_in_bits() const { return nav_.size_in_bits() + sampling_bits(); }

  void save(Sections& out) const;
  static SampledIndex load(const Sections& in);

  friend bool operator==(const SampledIndex& a, const SampledIndex& b) {
    return a.t_ == b.t_ && a.alphabet_ == b.alphabet_ && a.nav_ == b.nav_ &&
           a.roots_ == b.roots_ && a.root_pre_ == b.root_pre_ && a.root_size_ == b.root_size_ &&
           a.group_starts_ == b.group_starts_ && a.group_offset_ == b.group_offset_;
  }

 private:
  SampledIndex(int) {}
  NodeId tour(ColexRank root, std::uint64_t first_edge, std::uint64_t last_edge,
              std::uint64_t pre, ColexRank target) const;

  std::uint32_t t_ = 1;
  Alphabet alphabet_;
  XbwtNav nav_;
  SparseBitVec roots_;                  // co-lex ranks of cover roots
  std::vector<NodeId> root_pre_;        // pre-order id per root
  std::vector<std::uint32_t> root_size_;  // subtree size per root
  SparseBitVec group_starts_;           // edge entering the first child of each group
  std::vector<std::uint32_t> group_offset_;  // nodes in earlier sibling subtrees
};

}  // namespace rlxt
