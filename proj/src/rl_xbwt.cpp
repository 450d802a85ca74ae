#include "rlxt/rl_xbwt.hpp"

#include <algorithm>
#include <string>

#include "rlxt/errors.hpp"
#include "rlxt/serialize.hpp"
#include "rlxt/trie.hpp"

namespace rlxt {

RlXbwt::RlXbwt() : triples_{XbwtTriple{{}, {}, 1}} { derive({}); }

RlXbwt::RlXbwt(const LabeledTrie& trie, const ColexOrder& colex)
    : n_(trie.size()), labels_(static_cast<std::uint32_t>(trie.sigma() - 1)) {
  std::vector<std::vector<NodeId>> heads(labels_ + 1);
  std::vector<bool> prev(labels_ + 1, false);
  std::vector<bool> cur(labels_ + 1, false);
  for (ColexRank i = 1; i <= n_; ++i) {
    const NodeId u = colex.node_at(i);
    std::fill(cur.begin(), cur.end(), false);
    for (NodeId v : trie.children(u)) cur[trie.label(v)] = true;
    if (i == 1 || cur != prev) {
      XbwtTriple t;
      for (Label c = 1; c <= labels_; ++c) {
        if (cur[c] && !prev[c]) {
          t.add.push_back(c);
          heads[c].push_back(u);
        }
        if (!cur[c] && prev[c]) t.del.push_back(c);
      }
      triples_.push_back(std::move(t));
      prev.swap(cur);
    }
    ++triples_.back().length;
  }
  std::vector<NodeId> flat;
  for (Label c = 1; c <= labels_; ++c) flat.insert(flat.end(), heads[c].begin(), heads[c].end());
  derive(flat);
}

void RlXbwt::derive(const std::vector<NodeId>& head_nodes) {
  std::vector<std::uint32_t> seq;
  std::vector<std::uint32_t> starts;
  std::vector<std::vector<RunHead>> runs(labels_ + 1);
  std::vector<bool> on(labels_ + 1, false);
  std::vector<std::uint32_t> count(labels_ + 1, 0);
  std::uint64_t pos = 1;
  for (const auto& t : triples_) {
    if (t.length == 0) throw FormatError("empty block in run-length XBWT");
    starts.push_back(static_cast<std::uint32_t>(pos));
    for (std::size_t k = 0; k < t.add.size(); ++k) {
      const Label c = t.add[k];
      if (!valid_label(c) || on[c] || (k > 0 && t.add[k - 1] >= c)) {
        throw FormatError("inconsistent ADD set in run-length XBWT");
      }
      on[c] = true;
      seq.push_back(plus(c));
      runs[c].push_back(RunHead{static_cast<ColexRank>(pos), 0, count[c]});
    }
    for (std::size_t k = 0; k < t.del.size(); ++k) {
      const Label c = t.del[k];
      if (!valid_label(c) || !on[c] || (k > 0 && t.del[k - 1] >= c)) {
        throw FormatError("inconsistent DEL set in run-length XBWT");
      }
      seq.push_back(minus(c));
    }
    for (Label c : t.del) on[c] = false;
    seq.push_back(slash());
    for (Label c = 1; c <= labels_; ++c) {
      if (on[c]) count[c] += t.length;
    }
    pos += t.length;
  }
  if (pos - 1 != n_) throw FormatError("block lengths do not sum to the node count");

  block_starts_ = SparseBitVec(n_, std::move(starts));
  sprime_ = WaveletSeq(seq, 2 * labels_ + 1);
  c_.assign(labels_ + 2, 0);
  c_[1] = 1;
  for (Label c = 1; c <= labels_; ++c) c_[c + 1] = c_[c] + count[c];
  if (c_[labels_ + 1] != n_) throw FormatError("label counts do not match the node count");

  run_offset_.assign(labels_ + 2, 0);
  heads_.clear();
  for (Label c = 1; c <= labels_; ++c) {
    run_offset_[c + 1] = run_offset_[c] + runs[c].size();
    heads_.insert(heads_.end(), runs[c].begin(), runs[c].end());
  }
  if (!head_nodes.empty() || !heads_.empty()) {
    if (head_nodes.size() != heads_.size()) throw FormatError("run-head table size mismatch");
    for (std::size_t k = 0; k < heads_.size(); ++k) heads_[k].node = head_nodes[k];
  }
}

std::string RlXbwt::sprime_string(const Alphabet& alphabet) const {
  std::string s;
  for (std::uint64_t p = 1; p <= sprime_.size(); ++p) {
    const std::uint32_t x = sprime_.access(p);
    if (x == slash()) {
      s.push_back('/');
    } else if (x >= labels_) {
      s.push_back(static_cast<char>(alphabet.byte_of(static_cast<Label>(x - labels_ + 1))));
      s.push_back('+');
    } else {
      s.push_back(static_cast<char>(alphabet.byte_of(static_cast<Label>(x + 1))));
      s.push_back('-');
    }
  }
  return s;
}

std::uint64_t RlXbwt::runs() const { return heads_.size(); }

std::uint64_t RlXbwt::runs(Label c) const {
  if (!valid_label(c)) return 0;
  return run_offset_[c + 1] - run_offset_[c];
}

const RunHead& RlXbwt::run_head(Label c, std::uint64_t k) const {
  if (k == 0 || k > runs(c)) throw BoundsError("run index out of range");
  return heads_[run_offset_[c] + k - 1];
}

void RlXbwt::check_rank(ColexRank i) const {
  if (i == 0 || i > n_) throw BoundsError("co-lex rank " + std::to_string(i) + " out of range");
}

std::uint64_t RlXbwt::block_of(ColexRank i) const {
  check_rank(i);
  return block_starts_.rank1(i);
}

bool RlXbwt::contains(ColexRank i, Label c) const {
  const std::uint64_t j = slash_pos(block_of(i));
  if (!valid_label(c)) return false;
  return sprime_.rank(plus(c), j) > sprime_.rank(minus(c), j);
}

LabelString RlXbwt::out(ColexRank i) const {
  LabelString s;
  for (Label c = 1; c <= labels_; ++c) {
    if (contains(i, c)) s.push_back(c);
  }
  return s;
}

std::uint64_t RlXbwt::rank(Label c, ColexRank i) const {
  if (!valid_label(c)) throw BoundsError("label " + std::to_string(c) + " outside alphabet");
  if (i == 0) return 0;
  const std::uint64_t j = slash_pos(block_of(i));
  const std::uint64_t k = sprime_.rank(plus(c), j);
  if (k == 0) return 0;
  const RunHead& h = run_head(c, k);
  if (sprime_.rank(minus(c), j) < k) {
    // (A) the run opened by the k-th c+ is still open at block(i).
    return h.partial_rank + (i - h.colex + 1);
  }
  // (B) it was closed by the k-th c-, at the start of a later block.
  const std::uint64_t del = sprime_.select(minus(c), k);
  const std::uint64_t end = block_starts_.select1(sprime_.rank(slash(), del) + 1);
  return h.partial_rank + (end - h.colex);
}

std::optional<ColexRank> RlXbwt::successor(Label c, ColexRank i) const {
  const std::uint64_t j = slash_pos(block_of(i));
  if (!valid_label(c)) return std::nullopt;
  const std::uint64_t k = sprime_.rank(plus(c), j);
  if (k > 0 && sprime_.rank(minus(c), j) < k) return i;
  if (k < runs(c)) return run_head(c, k + 1).colex;
  return std::nullopt;
}

std::uint32_t RlXbwt::cr(ColexRank i, Label c) const {
  const std::uint64_t j = slash_pos(block_of(i));
  if (!valid_label(c) || sprime_.rank(plus(c), j) <= sprime_.rank(minus(c), j)) {
    throw DomainError("label " + std::to_string(c) + " does not leave co-lex node " +
                      std::to_string(i));
  }
  return static_cast<std::uint32_t>(sprime_.range_rank(plus(1), plus(c), j) -
                                    sprime_.range_rank(minus(1), minus(c), j));
}

std::optional<ColexRange> RlXbwt::backward_extend(ColexRange range, Label c) const {
  if (range.lo == 0 || range.lo > range.hi || range.hi > n_) {
    throw BoundsError("invalid co-lex range");
  }
  if (!valid_label(c)) return std::nullopt;
  const auto lo = static_cast<ColexRank>(c_[c] + rank(c, range.lo - 1) + 1);
  const auto hi = static_cast<ColexRank>(c_[c] + rank(c, range.hi));
  if (lo > hi) return std::nullopt;
  return ColexRange{lo, hi};
}

NodeId RlXbwt::run_head_node(Label c, ColexRank i) const {
  const std::uint64_t k = sprime_.rank(plus(c), slash_pos(block_of(i)));
  if (k == 0 || run_head(c, k).colex != i) {
    throw DomainError("co-lex rank " + std::to_string(i) + " does not start a run");
  }
  return run_head(c, k).node;
}

std::uint64_t RlXbwt::size_in_bits() const {
  std::uint64_t triple_bits = 0;
  for (const auto& t : triples_) triple_bits += 8 * (t.add.size() + t.del.size()) + 16 + 32;
  return triple_bits + block_starts_.size_in_bits() + sprime_.size_in_bits() + 32 * c_.size() +
         64 * run_offset_.size() + 96 * heads_.size();
}

void RlXbwt::save_triples(Writer& w) const {
  w.u32(n_);
  w.u32(labels_);
  w.varint(triples_.size());
  for (const auto& t : triples_) {
    w.varint(t.add.size());
    for (Label c : t.add) w.u8(c);
    w.varint(t.del.size());
    for (Label c : t.del) w.u8(c);
    w.varint(t.length);
  }
}

void RlXbwt::save_sprime(Writer& w) const { sprime_.save(w); }

void RlXbwt::save_run_heads(Writer& w) const {
  std::vector<NodeId> nodes;
  nodes.reserve(heads_.size());
  for (const auto& h : heads_) nodes.push_back(h.node);
  w.u32_vector(nodes);
}

RlXbwt RlXbwt::load(Reader& triples, Reader& sprime, Reader& heads) {
  RlXbwt x;
  x.n_ = triples.u32();
  x.labels_ = triples.u32();
  if (x.n_ == 0 || x.labels_ > 255) throw FormatError("bad run-length XBWT header");
  const std::uint64_t count = triples.varint();
  if (count == 0 || count > x.n_) throw FormatError("bad block count");
  x.triples_.assign(count, {});
  for (auto& t : x.triples_) {
    auto read_set = [&](LabelString& s) {
      const std::uint64_t len = triples.varint();
      if (len > x.labels_) throw FormatError("label set larger than the alphabet");
      s.resize(len);
      for (auto& c : s) c = triples.u8();
    };
    read_set(t.add);
    read_set(t.del);
    const std::uint64_t len = triples.varint();
    if (len == 0 || len > x.n_) throw FormatError("bad block length");
    t.length = static_cast<std::uint32_t>(len);
  }
  x.derive(heads.u32_vector<NodeId>());
  for (const auto& h : x.heads_) {
    if (h.node == 0 || h.node > x.n_) throw FormatError("run head outside the tree");
  }
  if (WaveletSeq::load(sprime) != x.sprime_) {
    throw FormatError("S' section disagrees with the block triples");
  }
  return x;
}

}  // namespace rlxt
