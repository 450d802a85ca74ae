#include "rlxt/rindex.hpp"

#include <algorithm>
#include <string>

#include "rlxt/errors.hpp"
#include "rlxt/index_file.hpp"
#include "rlxt/serialize.hpp"

namespace rlxt {

namespace {

constexpr std::uint32_t kMeta = section_tag("META");
constexpr std::uint32_t kTopo = section_tag("TOPO");
constexpr std::uint32_t kLabels = section_tag("LABL");
constexpr std::uint32_t kColex = section_tag("COLX");
constexpr std::uint32_t kTriples = section_tag("XBWT");
constexpr std::uint32_t kSprime = section_tag("SPRM");
constexpr std::uint32_t kHeads = section_tag("HEAD");
constexpr std::uint32_t kColors = section_tag("COLR");
constexpr std::uint32_t kSamples = section_tag("SMPL");
constexpr std::uint32_t kIsc = section_tag("ISCT");

bool contains(const LabelString& s, Label c) { return std::binary_search(s.begin(), s.end(), c); }

}  // namespace

const char* phi_case_name(PhiCase c) {
  switch (c) {
    case PhiCase::kSampled: return "sampled";
    case PhiCase::kCase1: return "case-1";
    case PhiCase::kCase2_1: return "case-2.1";
    case PhiCase::kCase2_2_1: return "case-2.2.1";
    case PhiCase::kCase2_2_2: return "case-2.2.2";
  }
  return "unknown";
}

RIndex::RIndex(const LabeledTrie& trie)
    : n_(trie.size()), alphabet_(trie.alphabet()), topo_(trie) {
  const ColexOrder colex = colex_sort(trie);
  labels_.assign(static_cast<std::size_t>(n_) + 1, kSentinel);
  for (NodeId u = 2; u <= n_; ++u) labels_[u] = trie.label(u);
  pre_to_colex_ = colex.pre_to_colex();
  last_ = colex.node_at(n_);
  xbwt_ = RlXbwt(trie, colex);

  std::vector<LabelString> out(static_cast<std::size_t>(n_) + 1);
  for (NodeId u = 1; u <= n_; ++u) out[u] = trie.out(u);

  std::vector<std::uint32_t> red;
  std::vector<std::uint32_t> blue;
  std::vector<std::uint8_t> flags(static_cast<std::size_t>(n_) + 1, 0);
  auto succ = [&](NodeId u) { return colex.node_at(colex.rank_of(u) + 1); };
  for (ColexRank i = 1; i < n_; ++i) {
    const NodeId u = colex.node_at(i);
    const NodeId v = colex.node_at(i + 1);
    const bool r = out[u] != out[v];
    const bool b = trie.label(u) != trie.label(v);
    if (r) red.push_back(u);
    if (b) blue.push_back(u);
    if (r || b) flags[u] |= kSampleType1;
    for (Label c : out[u]) {
      if (contains(out[v], c)) continue;
      const NodeId w = trie.child(u, c);
      if (colex.rank_of(w) < n_) flags[w] |= kSampleType2;
    }
  }
  std::sort(red.begin(), red.end());
  std::sort(blue.begin(), blue.end());
  red_ = SparseBitVec(n_, red);
  blue_ = SparseBitVec(n_, blue);

  std::vector<std::uint32_t> sampled;
  for (NodeId u = 1; u <= n_; ++u) {
    if (flags[u] == 0) continue;
    sampled.push_back(u);
    sample_values_.push_back(succ(u));
    sample_flags_.push_back(flags[u]);
  }
  sampled_ = SparseBitVec(n_, std::move(sampled));

  std::vector<bool> bits;
  std::vector<bool> bounds;
  for (NodeId u : red) {
    const NodeId v = succ(u);
    for (Label c : out[u]) bits.push_back(contains(out[v], c));
    bounds.insert(bounds.end(), out[u].size(), false);
    bounds.push_back(true);
    for (Label c : out[v]) bits.push_back(contains(out[u], c));
    bounds.insert(bounds.end(), out[v].size(), false);
    bounds.push_back(true);
  }
  isc_bits_ = BitVec(bits);
  isc_bounds_ = BitVec(bounds);
  build_derived();
}

void RIndex::build_derived() {
  std::vector<NodeId> colored(red_.positions().begin(), red_.positions().end());
  colored.insert(colored.end(), blue_.positions().begin(), blue_.positions().end());
  colored_ = MarkSet(topo_, colored);
}

void RIndex::check(NodeId u) const {
  if (u == 0 || u > n_) throw BoundsError("node id " + std::to_string(u) + " out of range");
}

std::optional<PhiSample> RIndex::sample(NodeId u) const {
  check(u);
  if (!sampled_.access(u)) return std::nullopt;
  const std::uint64_t k = sampled_.rank1(u) - 1;
  return PhiSample{u, sample_values_[k], sample_flags_[k]};
}

std::vector<PhiSample> RIndex::samples() const {
  std::vector<PhiSample> out;
  for (std::size_t k = 0; k < sample_values_.size(); ++k) {
    out.push_back({sampled_.positions()[k], sample_values_[k], sample_flags_[k]});
  }
  return out;
}

NodeId RIndex::stored_phi(NodeId u) const {
  if (!sampled_.access(u)) {
    throw DomainError("node " + std::to_string(u) + " carries no phi sample");
  }
  return sample_values_[sampled_.rank1(u) - 1];
}

NodeId RIndex::climb_case1(NodeId u) const {
  if (red_.access(u) || blue_.access(u)) return stored_phi(u);
  const auto j = topo_.next_marked_in_subtree(colored_, u);
  if (!j) throw DomainError("node " + std::to_string(u) + " has no colored descendant");
  return topo_.laq(stored_phi(*j), topo_.depth(*j) - topo_.depth(u));
}

NodeId RIndex::phi(NodeId u, PhiCase* taken) const {
  check(u);
  if (u == last_) {
    throw NoSuccessorError("node " + std::to_string(u) + " is last in co-lex order");
  }
  auto report = [&](PhiCase c) {
    if (taken) *taken = c;
  };
  if (red_.access(u) || blue_.access(u)) {
    report(PhiCase::kSampled);
    return stored_phi(u);
  }
  if (auto j = topo_.next_marked_in_subtree(colored_, u)) {
    report(PhiCase::kCase1);
    return topo_.laq(stored_phi(*j), topo_.depth(*j) - topo_.depth(u));
  }
  const NodeId j = topo_.lowest_covering_ancestor(colored_, u);
  const NodeId k = topo_.laq(u, topo_.depth(u) - topo_.depth(j) - 1);
  NodeId k_next;
  if (!red_.access(j)) {
    report(PhiCase::kCase2_1);
    k_next = topo_.cbr(climb_case1(j), topo_.sr(k));
  } else if (auto s = sample(k); s && (s->flags & kSampleType2)) {
    report(PhiCase::kCase2_2_1);
    k_next = s->value;
  } else {
    report(PhiCase::kCase2_2_2);
    k_next = topo_.cbr(stored_phi(j), isc(j, topo_.sr(k)));
  }
  return k == u ? k_next : topo_.isd(k, u, k_next);
}

std::uint32_t RIndex::isc(NodeId u, std::uint32_t k) const {
  check(u);
  if (!red_.access(u)) throw DomainError("node " + std::to_string(u) + " is not a run-break node");
  const std::uint64_t t = red_.rank1(u);
  auto seg_end = [&](std::uint64_t s) { return s == 0 ? 0 : isc_bounds_.select1(s) - s; };
  const std::uint64_t start1 = seg_end(2 * t - 2);
  const std::uint64_t start2 = seg_end(2 * t - 1);
  if (k == 0 || start1 + k > start2) {
    throw DomainError("node " + std::to_string(u) + " has no child " + std::to_string(k));
  }
  if (!isc_bits_.access(start1 + k)) {
    throw DomainError("child " + std::to_string(k) + " of node " + std::to_string(u) +
                      " has no counterpart at the co-lex successor");
  }
  const std::uint64_t r = isc_bits_.rank1(start1 + k) - isc_bits_.rank1(start1);
  return static_cast<std::uint32_t>(isc_bits_.select1(isc_bits_.rank1(start2) + r) - start2);
}

std::optional<Toehold> RIndex::toehold(std::span<const Label> pattern) const {
  ColexRange range{1, n_};
  NodeId node = 1;
  for (Label c : pattern) {
    const auto i = xbwt_.successor(c, range.lo);
    if (!i || *i > range.hi) return std::nullopt;
    const NodeId base = *i == range.lo ? node : xbwt_.run_head_node(c, *i);
    node = topo_.cbr(base, xbwt_.cr(*i, c));
    range = *xbwt_.backward_extend(range, c);
  }
  return Toehold{range, node};
}

std::vector<NodeId> RIndex::locate(std::span<const Label> pattern) const {
  const auto t = toehold(pattern);
  if (!t) return {};
  std::vector<NodeId> out;
  out.reserve(t->range.width());
  out.push_back(t->first);
  for (std::uint64_t k = 1; k < t->range.width(); ++k) out.push_back(phi(out.back()));
  return out;
}

std::uint64_t RIndex::count(std::span<const Label> pattern) const {
  std::optional<ColexRange> range = ColexRange{1, n_};
  for (Label c : pattern) {
    range = xbwt_.backward_extend(*range, c);
    if (!range) return 0;
  }
  return range->width();
}

std::vector<NodeId> RIndex::locate(std::string_view pattern) const {
  const auto codes = alphabet_.encode(pattern);
  if (!codes) return {};
  return locate(std::span<const Label>(*codes));
}

std::uint64_t RIndex::count(std::string_view pattern) const {
  const auto codes = alphabet_.encode(pattern);
  if (!codes) return 0;
  return count(std::span<const Label>(*codes));
}

LabeledTrie RIndex::reconstruct() const { return rebuild_trie(topo_, labels_, alphabet_); }

SpaceReport RIndex::space() const {
  SpaceReport s;
  s.topology = topo_.size_in_bits();
  s.labels = 8 * labels_.size() + 8 * alphabet_.sigma();
  s.colex = 32 * pre_to_colex_.size();
  s.rl_xbwt = xbwt_.size_in_bits();
  s.colors = red_.size_in_bits() + blue_.size_in_bits() + colored_.size_in_bits();
  s.samples = sampled_.size_in_bits() + 32 * sample_values_.size() + 8 * sample_flags_.size();
  s.isc = isc_bits_.size_in_bits() + isc_bounds_.size_in_bits();
  return s;
}

void RIndex::corrupt_phi_sample_for_testing() {
  if (sample_values_.empty() || n_ < 2) return;
  NodeId& v = sample_values_.front();
  v = v == n_ ? 1 : v + 1;
}

void RIndex::save(Sections& out) const {
  {
    Writer w;
    w.u32(n_);
    w.u8_vector(alphabet_.bytes());
    out.put(kMeta, w.take());
  }
  {
    Writer w;
    topo_.parens().save(w);
    out.put(kTopo, w.take());
  }
  {
    Writer w;
    w.u8_vector(std::vector<std::uint8_t>(labels_.begin() + 1, labels_.end()));
    out.put(kLabels, w.take());
  }
  {
    Writer w;
    w.u32_vector(std::vector<ColexRank>(pre_to_colex_.begin() + 1, pre_to_colex_.end()));
    out.put(kColex, w.take());
  }
  Writer triples;
  Writer sprime;
  Writer heads;
  xbwt_.save_triples(triples);
  xbwt_.save_sprime(sprime);
  xbwt_.save_run_heads(heads);
  out.put(kTriples, triples.take());
  out.put(kSprime, sprime.take());
  {
    Writer w;
    red_.save(w);
    blue_.save(w);
    out.put(kColors, w.take());
  }
  {
    Writer w;
    sampled_.save(w);
    w.u32_vector(sample_values_);
    w.u8_vector(sample_flags_);
    out.put(kSamples, w.take());
  }
  {
    Writer w;
    isc_bits_.save(w);
    isc_bounds_.save(w);
    out.put(kIsc, w.take());
  }
  out.put(kHeads, heads.take());
}

RIndex RIndex::load(const Sections& in) {
  RIndex x(0);
  {
    Reader r(in.get(kMeta));
    x.n_ = r.u32();
    x.alphabet_ = Alphabet::from_bytes(r.u8_vector());
    r.expect_done();
  }
  if (x.n_ == 0) throw FormatError("index has no nodes");
  {
    Reader r(in.get(kTopo));
    x.topo_ = BpsTopology(BitVec::load(r));
    r.expect_done();
  }
  if (x.topo_.size() != x.n_) throw FormatError("topology size disagrees with the header");
  {
    Reader r(in.get(kLabels));
    const auto labels = r.u8_vector();
    r.expect_done();
    if (labels.size() != x.n_) throw FormatError("label table size disagrees with the header");
    x.labels_.assign(1, kSentinel);
    x.labels_.insert(x.labels_.end(), labels.begin(), labels.end());
    rebuild_trie(x.topo_, x.labels_, x.alphabet_);
  }
  {
    Reader r(in.get(kColex));
    auto ranks = r.u32_vector<ColexRank>();
    r.expect_done();
    if (ranks.size() != x.n_) throw FormatError("co-lex table size disagrees with the header");
    std::vector<bool> seen(static_cast<std::size_t>(x.n_) + 1, false);
    for (ColexRank c : ranks) {
      if (c == 0 || c > x.n_ || seen[c]) throw FormatError("co-lex table is not a permutation");
      seen[c] = true;
    }
    x.pre_to_colex_.assign(1, 0);
    x.pre_to_colex_.insert(x.pre_to_colex_.end(), ranks.begin(), ranks.end());
    x.last_ = static_cast<NodeId>(
        std::find(x.pre_to_colex_.begin(), x.pre_to_colex_.end(), x.n_) - x.pre_to_colex_.begin());
  }
  {
    Reader t(in.get(kTriples));
    Reader s(in.get(kSprime));
    Reader h(in.get(kHeads));
    x.xbwt_ = RlXbwt::load(t, s, h);
    t.expect_done();
    s.expect_done();
    h.expect_done();
    if (x.xbwt_.size() != x.n_ || x.xbwt_.sigma() != x.alphabet_.sigma()) {
      throw FormatError("RL-XBWT disagrees with the header");
    }
  }
  {
    Reader r(in.get(kColors));
    x.red_ = SparseBitVec::load(r);
    x.blue_ = SparseBitVec::load(r);
    r.expect_done();
    if (x.red_.size() != x.n_ || x.blue_.size() != x.n_) throw FormatError("color table size mismatch");
  }
  {
    Reader r(in.get(kSamples));
    x.sampled_ = SparseBitVec::load(r);
    x.sample_values_ = r.u32_vector<NodeId>();
    x.sample_flags_ = r.u8_vector();
    r.expect_done();
    if (x.sampled_.size() != x.n_ || x.sample_values_.size() != x.sampled_.ones() ||
        x.sample_flags_.size() != x.sampled_.ones()) {
      throw FormatError("phi sample tables disagree");
    }
    for (NodeId v : x.sample_values_) {
      if (v == 0 || v > x.n_) throw FormatError("phi sample outside the tree");
    }
  }
  {
    Reader r(in.get(kIsc));
    x.isc_bits_ = BitVec::load(r);
    x.isc_bounds_ = BitVec::load(r);
    r.expect_done();
    if (x.isc_bounds_.ones() != 2 * x.red_.ones() ||
        x.isc_bounds_.size() != x.isc_bits_.size() + x.isc_bounds_.ones()) {
      throw FormatError("ISC tables disagree with the red set");
    }
  }
  x.build_derived();
  return x;
}

bool operator==(const RIndex& a, const RIndex& b) {
  return a.n_ == b.n_ && a.alphabet_ == b.alphabet_ && a.labels_ == b.labels_ &&
         a.topo_ == b.topo_ && a.pre_to_colex_ == b.pre_to_colex_ && a.xbwt_ == b.xbwt_ &&
         a.red_ == b.red_ && a.blue_ == b.blue_ && a.sampled_ == b.sampled_ &&
         a.sample_values_ == b.sample_values_ && a.sample_flags_ == b.sample_flags_ &&
         a.isc_bits_ == b.isc_bits_ && a.isc_bounds_ == b.isc_bounds_;
}

}  // namespace rlxt
