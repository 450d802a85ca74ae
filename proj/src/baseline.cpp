#include "rlxt/baseline.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "rlxt/errors.hpp"
#include "rlxt/index_file.hpp"
#include "rlxt/serialize.hpp"

namespace rlxt {

namespace {

constexpr std::uint32_t kMeta = section_tag("META");
constexpr std::uint32_t kNav = section_tag("NAVI");
constexpr std::uint32_t kCover = section_tag("COVR");

}  // namespace

XbwtNav::XbwtNav(const LabeledTrie& trie, const ColexOrder& colex)
    : n_(trie.size()), labels_(static_cast<std::uint32_t>(trie.sigma() - 1)) {
  std::vector<std::uint32_t> seq;
  seq.reserve(n_ - 1);
  std::vector<bool> bounds;
  bounds.reserve(2 * static_cast<std::size_t>(n_) - 1);
  for (ColexRank i = 1; i <= n_; ++i) {
    for (NodeId v : trie.children(colex.node_at(i))) {
      seq.push_back(trie.label(v) - 1u);
      bounds.push_back(false);
    }
    bounds.push_back(true);
  }
  flat_ = WaveletSeq(seq, std::max<std::uint32_t>(labels_, 1));
  bounds_ = BitVec(bounds);
  derive_c();
}

void XbwtNav::derive_c() {
  c_.assign(labels_ + 2, 0);
  c_[1] = 1;
  for (Label c = 1; c <= labels_; ++c) c_[c + 1] = c_[c] + static_cast<std::uint32_t>(flat_.rank(c - 1u, flat_.size()));
  if (c_[labels_ + 1] != n_) throw FormatError("XBWT label counts do not match the node count");
}

void XbwtNav::check(ColexRank i) const {
  if (i == 0 || i > n_) throw BoundsError("co-lex rank " + std::to_string(i) + " out of range");
}

std::uint64_t XbwtNav::edges_before(ColexRank i) const {
  check(i);
  return i == 1 ? 0 : bounds_.select1(i - 1) - (i - 1);
}

std::uint32_t XbwtNav::degree(ColexRank i) const {
  const std::uint64_t end = bounds_.select1(i) - i;
  return static_cast<std::uint32_t>(end - edges_before(i));
}

Label XbwtNav::label(ColexRank i) const {
  check(i);
  const auto it = std::lower_bound(c_.begin(), c_.end(), i);
  return static_cast<Label>(it - c_.begin() - 1);
}

ColexRank XbwtNav::edge_target(std::uint64_t e) const {
  const Label c = edge_label(e);
  return static_cast<ColexRank>(c_[c] + flat_.rank(c - 1u, e));
}

std::uint64_t XbwtNav::incoming_edge(ColexRank i) const {
  const Label c = label(i);
  if (c == kSentinel) throw DomainError("the root has no incoming edge");
  return flat_.select(c - 1u, i - c_[c]);
}

ColexRank XbwtNav::edge_source(std::uint64_t e) const {
  return static_cast<ColexRank>(bounds_.rank1(bounds_.select0(e)) + 1);
}

ColexRank XbwtNav::parent(ColexRank i) const {
  if (i == 1) throw DomainError("the root has no parent");
  return edge_source(incoming_edge(i));
}

ColexRank XbwtNav::child(ColexRank i, Label c) const {
  const std::uint64_t b = edges_before(i);
  const std::uint64_t e = b + degree(i);
  if (c >= 1 && c <= labels_) {
    const std::uint64_t k1 = flat_.rank(c - 1u, e);
    if (k1 > flat_.rank(c - 1u, b)) return static_cast<ColexRank>(c_[c] + k1);
  }
  throw DomainError("label " + std::to_string(c) + " does not leave co-lex node " +
                    std::to_string(i));
}

std::optional<ColexRange> XbwtNav::backward_extend(ColexRange range, Label c) const {
  if (range.lo == 0 || range.lo > range.hi || range.hi > n_) {
    throw BoundsError("invalid co-lex range");
  }
  if (c == 0 || c > labels_) return std::nullopt;
  const std::uint64_t before = range.lo == 1 ? 0 : edges_before(range.lo);
  const std::uint64_t upto = edges_before(range.hi) + degree(range.hi);
  const auto lo = static_cast<ColexRank>(c_[c] + flat_.rank(c - 1u, before) + 1);
  const auto hi = static_cast<ColexRank>(c_[c] + flat_.rank(c - 1u, upto));
  if (lo > hi) return std::nullopt;
  return ColexRange{lo, hi};
}

std::uint64_t XbwtNav::size_in_bits() const {
  return flat_.size_in_bits() + bounds_.size_in_bits() + 32 * c_.size() + 64;
}

void XbwtNav::save(Writer& w) const {
  w.u32(n_);
  w.u32(labels_);
  flat_.save(w);
  bounds_.save(w);
}

XbwtNav XbwtNav::load(Reader& r) {
  XbwtNav x(0);
  x.n_ = r.u32();
  x.labels_ = r.u32();
  if (x.n_ == 0 || x.labels_ > 255) throw FormatError("bad XBWT header");
  x.flat_ = WaveletSeq::load(r);
  x.bounds_ = BitVec::load(r);
  if (x.flat_.size() != x.n_ - 1u || x.bounds_.ones() != x.n_ ||
      x.bounds_.size() != 2 * static_cast<std::uint64_t>(x.n_) - 1 ||
      x.flat_.sigma() != std::max<std::uint32_t>(x.labels_, 1)) {
    throw FormatError("XBWT tables disagree with the header");
  }
  x.derive_c();
  return x;
}

std::vector<NodeId> TreeCover::roots() const {
  std::vector<NodeId> out;
  for (NodeId u = 1; u < is_root.size(); ++u) {
    if (is_root[u]) out.push_back(u);
  }
  return out;
}

std::vector<std::vector<NodeId>> TreeCover::components(const LabeledTrie& trie) const {
  std::vector<std::vector<NodeId>> out;
  for (const auto& g : groups) {
    std::vector<NodeId> members{g.root};
    std::vector<NodeId> stack;
    for (NodeId c : trie.children(g.root)) {
      if (c < g.first_child || c > g.last_child) continue;
      stack.push_back(c);
      while (!stack.empty()) {
        const NodeId x = stack.back();
        stack.pop_back();
        members.push_back(x);
        if (is_root[x]) continue;
        auto kids = trie.children(x);
        stack.insert(stack.end(), kids.rbegin(), kids.rend());
      }
    }
    out.push_back(std::move(members));
  }
  return out;
}

TreeCover build_cover(const LabeledTrie& trie, std::uint32_t t) {
  const NodeId n = trie.size();
  if (t == 0 || t > n) throw DomainError("cover parameter t must be in 1..n");
  TreeCover cover;
  cover.t = t;
  cover.is_root.assign(static_cast<std::size_t>(n) + 1, false);
  std::vector<std::uint32_t> acc(static_cast<std::size_t>(n) + 1, 0);
  for (NodeId v = n; v >= 1; --v) {
    auto kids = trie.children(v);
    std::uint32_t s = 0;
    std::size_t start = 0;
    for (std::size_t k = 0; k < kids.size(); ++k) {
      s += cover.is_root[kids[k]] ? 1 : acc[kids[k]];
      if (s >= t) {
        cover.is_root[v] = true;
        cover.groups.push_back({v, kids[start], kids[k]});
        s = 0;
        start = k + 1;
      }
    }
    if (start < kids.size()) {
      if (cover.is_root[v] || v == 1 || 1 + s >= t) {
        cover.is_root[v] = true;
        cover.groups.push_back({v, kids[start], kids.back()});
      } else {
        acc[v] = 1 + s;
      }
    } else if (!cover.is_root[v]) {
      acc[v] = 1;
      if (t <= 1 || v == 1) cover.is_root[v] = true;
    }
  }
  return cover;
}

SampledIndex::SampledIndex(const LabeledTrie& trie, std::uint32_t t)
    : t_(t), alphabet_(trie.alphabet()) {
  const ColexOrder colex = colex_sort(trie);
  nav_ = XbwtNav(trie, colex);
  const TreeCover cover = build_cover(trie, t);

  std::vector<std::uint32_t> roots;
  for (NodeId u : cover.roots()) roots.push_back(colex.rank_of(u));
  std::sort(roots.begin(), roots.end());
  for (ColexRank i : roots) {
    const NodeId u = colex.node_at(i);
    root_pre_.push_back(u);
    root_size_.push_back(trie.subtree_end(u) - u + 1);
  }
  roots_ = SparseBitVec(trie.size(), std::move(roots));

  std::vector<std::pair<std::uint32_t, std::uint32_t>> starts;
  for (const auto& g : cover.groups) {
    const auto e = static_cast<std::uint32_t>(nav_.incoming_edge(colex.rank_of(g.first_child)));
    starts.emplace_back(e, g.first_child - g.root - 1);
  }
  std::sort(starts.begin(), starts.end());
  std::vector<std::uint32_t> pos;
  for (const auto& [e, off] : starts) {
    pos.push_back(e);
    group_offset_.push_back(off);
  }
  group_starts_ = SparseBitVec(trie.size() - 1u, std::move(pos));
}

NodeId SampledIndex::tour(ColexRank root, std::uint64_t first_edge, std::uint64_t last_edge,
                          std::uint64_t pre, ColexRank target) const {
  struct Frame {
    std::uint64_t next;
    std::uint64_t last;
  };
  std::vector<Frame> stack{{first_edge, last_edge}};
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next > f.last) {
      stack.pop_back();
      continue;
    }
    const ColexRank x = nav_.edge_target(f.next++);
    if (x == target) return static_cast<NodeId>(pre);
    if (roots_.access(x)) {
      pre += root_size_[roots_.rank1(x) - 1];
      continue;
    }
    ++pre;
    const std::uint64_t b = nav_.edges_before(x);
    const std::uint32_t d = nav_.degree(x);
    if (d > 0) stack.push_back({b + 1, b + d});
  }
  throw std::logic_error("co-lex rank " + std::to_string(target) +
                         " not found in the component of root " + std::to_string(root));
}

NodeId SampledIndex::preorder(ColexRank i) const {
  if (i == 0 || i > size()) throw BoundsError("co-lex rank " + std::to_string(i) + " out of range");
  if (roots_.access(i)) return root_pre_[roots_.rank1(i) - 1];
  ColexRank x = i;
  while (true) {
    const std::uint64_t e = nav_.incoming_edge(x);
    const ColexRank p = nav_.edge_source(e);
    if (roots_.access(p)) {
      const std::uint64_t gs = *group_starts_.pred1(e);
      const std::uint64_t k = group_starts_.rank1(gs) - 1;
      const std::uint64_t pend = nav_.edges_before(p) + nav_.degree(p);
      const auto next = group_starts_.succ1(gs + 1);
      const std::uint64_t ge = next && *next <= pend ? *next - 1 : pend;
      const std::uint64_t pre = root_pre_[roots_.rank1(p) - 1] + 1 + group_offset_[k];
      return tour(p, gs, ge, pre, i);
    }
    x = p;
  }
}

std::optional<ColexRange> SampledIndex::range(std::span<const Label> pattern) const {
  std::optional<ColexRange> r = ColexRange{1, size()};
  for (Label c : pattern) {
    r = nav_.backward_extend(*r, c);
    if (!r) return std::nullopt;
  }
  return r;
}

std::vector<NodeId> SampledIndex::locate(std::span<const Label> pattern) const {
  const auto r = range(pattern);
  if (!r) return {};
  std::vector<NodeId> out;
  out.reserve(r->width());
  for (ColexRank i = r->lo; i <= r->hi; ++i) out.push_back(preorder(i));
  return out;
}

std::uint64_t SampledIndex::count(std::span<const Label> pattern) const {
  const auto r = range(pattern);
  return r ? r->width() : 0;
}

std::vector<NodeId> SampledIndex::locate(std::string_view pattern) const {
  const auto codes = alphabet_.encode(pattern);
  if (!codes) return {};
  return locate(std::span<const Label>(*codes));
}

std::uint64_t SampledIndex::count(std::string_view pattern) const {
  const auto codes = alphabet_.encode(pattern);
  if (!codes) return 0;
  return count(std::span<const Label>(*codes));
}

LabeledTrie SampledIndex::reconstruct() const {
  const NodeId n = size();
  std::vector<NodeId> parent{0, 0};
  std::vector<Label> label{kSentinel, kSentinel};
  parent.reserve(n + 1);
  label.reserve(n + 1);
  struct Frame {
    NodeId id;
    std::uint64_t next;
    std::uint64_t last;
  };
  std::vector<Frame> frames{{1, 1, static_cast<std::uint64_t>(nav_.degree(1))}};
  while (!frames.empty()) {
    Frame& f = frames.back();
    if (f.next > f.last) {
      frames.pop_back();
      continue;
    }
    const std::uint64_t e = f.next++;
    const auto id = static_cast<NodeId>(parent.size());
    parent.push_back(f.id);
    label.push_back(nav_.edge_label(e));
    const ColexRank x = nav_.edge_target(e);
    const std::uint64_t b = nav_.edges_before(x);
    frames.push_back({id, b + 1, b + nav_.degree(x)});
  }
  return LabeledTrie::from_parents(std::move(parent), std::move(label), alphabet_);
}

std::uint64_t SampledIndex::sampling_bits() const {
  return roots_.size_in_bits() + 32 * root_pre_.size() + 32 * root_size_.size() +
         group_starts_.size_in_bits() + 32 * group_offset_.size();
}

void SampledIndex::save(Sections& out) const {
  {
    Writer w;
    w.u32(size());
    w.u32(t_);
    w.u8_vector(alphabet_.bytes());
    out.put(kMeta, w.take());
  }
  {
    Writer w;
    nav_.save(w);
    out.put(kNav, w.take());
  }
  {
    Writer w;
    roots_.save(w);
    w.u32_vector(root_pre_);
    w.u32_vector(root_size_);
    group_starts_.save(w);
    w.u32_vector(group_offset_);
    out.put(kCover, w.take());
  }
}

SampledIndex SampledIndex::load(const Sections& in) {
  SampledIndex x(0);
  NodeId n = 0;
  {
    Reader r(in.get(kMeta));
    n = r.u32();
    x.t_ = r.u32();
    x.alphabet_ = Alphabet::from_bytes(r.u8_vector());
    r.expect_done();
  }
  {
    Reader r(in.get(kNav));
    x.nav_ = XbwtNav::load(r);
    r.expect_done();
  }
  if (x.nav_.size() != n || x.nav_.sigma() != x.alphabet_.sigma() || x.t_ == 0 || x.t_ > n) {
    throw FormatError("XBWT disagrees with the header");
  }
  {
    Reader r(in.get(kCover));
    x.roots_ = SparseBitVec::load(r);
    x.root_pre_ = r.u32_vector<NodeId>();
    x.root_size_ = r.u32_vector<std::uint32_t>();
    x.group_starts_ = SparseBitVec::load(r);
    x.group_offset_ = r.u32_vector<std::uint32_t>();
    r.expect_done();
  }
  if (x.roots_.size() != n || x.root_pre_.size() != x.roots_.ones() ||
      x.root_size_.size() != x.roots_.ones() || x.group_starts_.size() != n - 1u ||
      x.group_offset_.size() != x.group_starts_.ones() || !x.roots_.access(1)) {
    throw FormatError("cover tables disagree");
  }
  for (std::size_t k = 0; k < x.root_pre_.size(); ++k) {
    if (x.root_pre_[k] == 0 || x.root_pre_[k] > n || x.root_size_[k] == 0 ||
        x.root_size_[k] > n - x.root_pre_[k] + 1) {
      throw FormatError("cover sample outside the tree");
    }
  }
  return x;
}

}  // namespace rlxt
