#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rlxt/bitvector.hpp"
#include "rlxt/types.hpp"
#include "rlxt/wavelet.hpp"

namespace rlxt {

class Alphabet;
class LabeledTrie;
class ColexOrder;

// One maximal block of equal out-sets: out = (previous out - del) + add.
struct XbwtTriple {
  LabelString add;
  LabelString del;
  std::uint32_t length = 0;

  friend bool operator==(const XbwtTriple&, const XbwtTriple&) = default;
};

// Closed co-lex interval [lo, hi].
struct ColexRange {
  ColexRank lo = 0;
  ColexRank hi = 0;

  std::uint64_t width() const { return hi - lo + 1; }
  friend bool operator==(const ColexRange&, const ColexRange&) = default;
};

// First node of a c-run, the matching c+ occurrence of S', and the number of
// nodes before it whose out-set contains c.
struct RunHead {
  ColexRank colex = 0;
  NodeId node = 0;
  std::uint32_t partial_rank = 0;

  friend bool operator==(const RunHead&, const RunHead&) = default;
};

// Run-length XBWT: block triples, the S' delta sequence over
// {c-} < {c+} < '/', block boundaries, the C array and per-run samples.
class RlXbwt {
 public:
  RlXbwt();
  RlXbwt(const LabeledTrie& trie, const ColexOrder& colex);

  NodeId size() const { return n_; }
  std::size_t sigma() const { return labels_ + 1; }
  const std::vector<XbwtTriple>& triples() const { return triples_; }
  std::size_t blocks() const { return triples_.size(); }
  const SparseBitVec& block_starts() const { return block_starts_; }
  const WaveletSeq& sprime() const { return sprime_; }
  // c_array()[c] = nodes whose incoming label is smaller than c; size sigma+1.
  const std::vector<std::uint32_t>& c_array() const { return c_; }

  std::uint32_t minus(Label c) const { return c - 1u; }
  std::uint32_t plus(Label c) const { return labels_ + c - 1u; }
  std::uint32_t slash() const { return 2 * labels_; }
  // S' rendered with the given alphabet, e.g. "a+b+c+/a-c-/".
  std::string sprime_string(const Alphabet& alphabet) const;

  std::uint64_t runs() const;
  std::uint64_t runs(Label c) const;
  const RunHead& run_head(Label c, std::uint64_t k) const;  // k-th c-run, 1-based

  std::uint64_t block_of(ColexRank i) const;
  bool contains(ColexRank i, Label c) const;
  LabelString out(ColexRank i) const;
  std::uint64_t rank(Label c, ColexRank i) const;
  std::optional<ColexRank> successor(Label c, ColexRank i) const;
  // Rank of label c among the sorted out-labels of node i.
  std::uint32_t cr(ColexRank i, Label c) const;
  std::optional<ColexRange> backward_extend(ColexRange range, Label c) const;
  // Pre-order id of the node starting the c-run that begins at co-lex rank i.
  NodeId run_head_node(Label c, ColexRank i) const;

  std::uint64_t size_in_bits() const;

  void save_triples(Writer& w) const;
  void save_sprime(Writer& w) const;
  void save_run_heads(Writer& w) const;
  static RlXbwt load(Reader& triples, Reader& sprime, Reader& heads);

  friend bool operator==(const RlXbwt& a, const RlXbwt& b) {
    return a.n_ == b.n_ && a.labels_ == b.labels_ && a.triples_ == b.triples_ &&
           a.heads_ == b.heads_;
  }

 private:
  void check_rank(ColexRank i) const;
  bool valid_label(Label c) const { return c >= 1 && c <= labels_; }
  // Derives S', boundaries, C, run offsets and partial ranks from the triples.
  void derive(const std::vector<NodeId>& head_nodes);
  // Close position in S' of block q (1-based).
  std::uint64_t slash_pos(std::uint64_t q) const { return sprime_.select(slash(), q); }

  NodeId n_ = 1;
  std::uint32_t labels_ = 0;  // sigma - 1
  std::vector<XbwtTriple> triples_;
  SparseBitVec block_starts_;
  WaveletSeq sprime_;
  std::vector<std::uint32_t> c_;
  std::vector<std::uint64_t> run_offset_;  // size labels_+2
  std::vector<RunHead> heads_;
};

}  // namespace rlxt
