#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rlxt/types.hpp"

namespace rlxt {

// Maps input bytes onto the dense effective alphabet 1..sigma-1 (byte order),
// with code 0 reserved for the root sentinel.
class Alphabet {
 public:
  Alphabet();
  // `bytes_used[b]` tells whether byte b labels at least one edge. Byte 0 is ignored.
  static Alphabet from_used(const std::array<bool, 256>& bytes_used);
  static Alphabet from_bytes(std::vector<std::uint8_t> code_to_byte);

  // Number of codes including the sentinel.
  std::size_t sigma() const { return code_to_byte_.size(); }
  std::uint8_t byte_of(Label code) const { return code_to_byte_.at(code); }
  // 0 when the byte does not occur.
  Label code_of(std::uint8_t byte) const { return byte_to_code_[byte]; }
  std::optional<LabelString> encode(std::string_view bytes) const;
  std::string decode(std::span<const Label> codes) const;
  const std::vector<std::uint8_t>& bytes() const { return code_to_byte_; }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<std::uint8_t> code_to_byte_;  // index 0 is the sentinel
  std::array<Label, 256> byte_to_code_{};
};

// An edge-labeled trie with nodes numbered 1..n in pre-order; children of a
// node are sorted by label, which coincides with their pre-order.
class LabeledTrie {
 public:
  LabeledTrie();

  // Prefix closure of `lines`, duplicates removed. Throws FormatError on a NUL byte.
  static LabeledTrie from_strings(std::span<const std::string> lines);
  // Edge k (0-based) defines node k+2: (parent pre-order id, label byte).
  static LabeledTrie from_edges(NodeId n, std::span<const std::pair<NodeId, std::uint8_t>> edges);
  // `parent[u]` and `label[u]` for u in 1..n (index 0 unused), labels already dense.
  static LabeledTrie from_parents(std::vector<NodeId> parent, std::vector<Label> label,
                                  Alphabet alphabet);

  NodeId size() const { return n_; }
  std::size_t sigma() const { return alphabet_.sigma(); }
  const Alphabet& alphabet() const { return alphabet_; }

  NodeId parent(NodeId u) const;
  Label label(NodeId u) const;
  std::span<const NodeId> children(NodeId u) const;
  NodeId child(NodeId u, Label c) const;  // kNoNode when absent
  LabelString out(NodeId u) const;
  std::size_t out_degree(NodeId u) const { return children(u).size(); }
  // Largest pre-order id inside the subtree of u.
  NodeId subtree_end(NodeId u) const { return check(u), subtree_end_[u]; }
  std::uint32_t depth(NodeId u) const { return check(u), depth_[u]; }
  std::uint32_t height() const;
  // Labels on the path root -> u (empty for the root).
  LabelString path_label(NodeId u) const;

  // Root-to-leaf strings; building from them reproduces this trie.
  std::vector<std::string> leaf_strings() const;
  // (parent, label byte) for nodes 2..n.
  std::vector<std::pair<NodeId, std::uint8_t>> edges() const;

  friend bool operator==(const LabeledTrie& a, const LabeledTrie& b) {
    return a.n_ == b.n_ && a.parent_ == b.parent_ && a.label_ == b.label_ &&
           a.alphabet_ == b.alphabet_;
  }

 private:
  void check(NodeId u) const;
  void finalize();

  NodeId n_ = 1;
  std::vector<NodeId> parent_;  // index 0 unused; parent_[1] = 0
  std::vector<Label> label_;    // label_[1] = sentinel
  std::vector<std::uint32_t> child_offset_;
  std::vector<NodeId> child_ids_;
  std::vector<NodeId> subtree_end_;
  std::vector<std::uint32_t> depth_;
  Alphabet alphabet_;
};

// Format A: LF-terminated byte lines. Throws FormatError on NUL bytes.
std::vector<std::string> read_lines(std::istream& in);
LabeledTrie read_strings_trie(std::istream& in);
// Format B: first line n, then n-1 lines "parent<TAB>label_byte_decimal".
LabeledTrie read_edges_trie(std::istream& in);
void write_edges_trie(std::ostream& out, const LabeledTrie& trie);

// Bidirectional permutation between pre-order ids and co-lex ranks.
class ColexOrder {
 public:
  ColexOrder() = default;
  explicit ColexOrder(std::vector<NodeId> colex_to_pre);

  NodeId size() const { return static_cast<NodeId>(colex_to_pre_.size()) - 1; }
  NodeId node_at(ColexRank i) const { return colex_to_pre_.at(i); }
  ColexRank rank_of(NodeId u) const { return pre_to_colex_.at(u); }
  // 1-based view: position 0 is unused.
  const std::vector<NodeId>& colex_to_pre() const { return colex_to_pre_; }
  const std::vector<ColexRank>& pre_to_colex() const { return pre_to_colex_; }

 private:
  std::vector<NodeId> colex_to_pre_;
  std::vector<ColexRank> pre_to_colex_;
};

// Iterative bucket refinement on (label, parent bucket) until every node is
// in its own bucket. Root is always rank 1.
ColexOrder colex_sort(const LabeledTrie& trie);

// Every node whose root path is suffixed by `pattern`, by scanning all nodes;
// result is ordered by co-lex rank.
std::vector<NodeId> oracle_locate(const LabeledTrie& trie, const ColexOrder& colex,
                                  std::span<const Label> pattern);
std::vector<NodeId> oracle_locate(const LabeledTrie& trie, std::span<const Label> pattern);

// Complete subtrees rooted at u and v are isomorphic (same labeled shape).
bool is_isomorphic(const LabeledTrie& trie, NodeId u, NodeId v);

}  // namespace rlxt
