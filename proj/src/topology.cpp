#include "rlxt/topology.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <string>

#include "rlxt/errors.hpp"
#include "rlxt/trie.hpp"

namespace rlxt {

namespace {

constexpr std::uint64_t kBlock = 512;
constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();

// Per-byte excess profile; pre[j] is the excess after the first j bits (LSB first).
struct ByteTables {
  std::array<std::array<std::int8_t, 9>, 256> pre{};
  std::array<std::int8_t, 256> min{};  // over pre[0..7]
  std::array<std::uint8_t, 256> count{};

  ByteTables() {
    for (int v = 0; v < 256; ++v) {
      pre[v][0] = 0;
      for (int j = 0; j < 8; ++j) pre[v][j + 1] = static_cast<std::int8_t>(pre[v][j] + (((v >> j) & 1) ? 1 : -1));
      std::int8_t m = pre[v][0];
      for (int j = 1; j < 8; ++j) m = std::min(m, pre[v][j]);
      std::uint8_t c = 0;
      for (int j = 0; j < 8; ++j) c += pre[v][j] == m;
      min[v] = m;
      count[v] = c;
    }
  }
};

const ByteTables& tables() {
  static const ByteTables t;
  return t;
}

}  // namespace

BpsTopology::BpsTopology(const LabeledTrie& trie) : n_(trie.size()) {
  std::vector<bool> bits;
  bits.reserve(2 * static_cast<std::size_t>(n_));
  std::vector<NodeId> stack;
  for (NodeId u = 1; u <= n_; ++u) {
    while (!stack.empty() && stack.back() != trie.parent(u)) {
      stack.pop_back();
      bits.push_back(false);
    }
    stack.push_back(u);
    bits.push_back(true);
  }
  bits.insert(bits.end(), stack.size(), false);
  parens_ = BitVec(bits);
  build();
}

BpsTopology::BpsTopology(BitVec parens) : parens_(std::move(parens)) {
  const std::uint64_t len = parens_.size();
  if (len < 2 || len % 2 != 0 || parens_.ones() * 2 != len) {
    throw FormatError("parentheses sequence is not balanced");
  }
  std::int64_t e = 0;
  for (std::uint64_t p = 1; p <= len; ++p) {
    e += parens_.access(p) ? 1 : -1;
    if (e < 0 || (e == 0 && p < len)) {
      throw FormatError("parentheses sequence is not a single tree");
    }
  }
  n_ = static_cast<NodeId>(len / 2);
  build();
}

void BpsTopology::build() {
  const std::uint64_t N = parens_.size();
  nblocks_ = N / kBlock + 1;
  leaves_ = 1;
  while (leaves_ < nblocks_) leaves_ <<= 1;
  tree_.assign(2 * leaves_, MinCount{kInf, 0});
  for (std::uint64_t k = 0; k < nblocks_; ++k) {
    tree_[leaves_ + k] = scan_min(k * kBlock, std::min(k * kBlock + kBlock - 1, N));
  }
  for (std::uint64_t x = leaves_ - 1; x >= 1; --x) {
    const auto& l = tree_[2 * x];
    const auto& r = tree_[2 * x + 1];
    if (l.min < r.min) {
      tree_[x] = l;
    } else if (r.min < l.min) {
      tree_[x] = r;
    } else {
      tree_[x] = {l.min, l.count + r.count};
    }
  }
}

void BpsTopology::check(NodeId u) const {
  if (u == 0 || u > n_) throw BoundsError("node id " + std::to_string(u) + " out of range");
}

std::int64_t BpsTopology::excess(std::uint64_t q) const {
  return 2 * static_cast<std::int64_t>(parens_.rank1(q)) - static_cast<std::int64_t>(q);
}

std::uint8_t BpsTopology::byte_at(std::uint64_t bit_index) const {
  return static_cast<std::uint8_t>(parens_.words()[bit_index >> 6] >> (bit_index & 63));
}

BpsTopology::MinCount BpsTopology::scan_min(std::uint64_t a, std::uint64_t b) const {
  const auto& t = tables();
  const auto& w = parens_.words();
  MinCount mc{kInf, 0};
  auto take = [&](std::int64_t v, std::uint64_t c) {
    if (v < mc.min) {
      mc = {v, c};
    } else if (v == mc.min) {
      mc.count += c;
    }
  };
  std::int64_t cur = excess(a);
  std::uint64_t q = a;
  while (q <= b) {
    if (q % 8 == 0 && q + 7 <= b) {
      const std::uint8_t v = byte_at(q);
      take(cur + t.min[v], t.count[v]);
      cur += t.pre[v][8];
      q += 8;
    } else {
      take(cur, 1);
      cur += ((w[q >> 6] >> (q & 63)) & 1) ? 1 : -1;
      ++q;
    }
  }
  return mc;
}

std::optional<std::uint64_t> BpsTopology::scan_fwd(std::uint64_t a, std::uint64_t b,
                                                   std::int64_t limit) const {
  const auto& t = tables();
  const auto& w = parens_.words();
  std::int64_t cur = excess(a);
  std::uint64_t q = a;
  while (q <= b) {
    if (q % 8 == 0 && q + 7 <= b) {
      const std::uint8_t v = byte_at(q);
      if (cur + t.min[v] <= limit) {
        for (int j = 0; j < 8; ++j) {
          if (cur + t.pre[v][j] <= limit) return q + j;
        }
      }
      cur += t.pre[v][8];
      q += 8;
    } else {
      if (cur <= limit) return q;
      cur += ((w[q >> 6] >> (q & 63)) & 1) ? 1 : -1;
      ++q;
    }
  }
  return std::nullopt;
}

std::optional<std::uint64_t> BpsTopology::scan_bwd(std::uint64_t a, std::uint64_t b,
                                                   std::int64_t limit) const {
  const auto& t = tables();
  const auto& w = parens_.words();
  auto delta = [&](std::uint64_t bit) { return ((w[bit >> 6] >> (bit & 63)) & 1) ? 1 : -1; };
  std::int64_t cur = excess(b);
  std::uint64_t q = b;
  while (true) {
    if (q % 8 == 7 && q >= a + 7) {
      const std::uint64_t s = q - 7;
      const std::uint8_t v = byte_at(s);
      const std::int64_t base = cur - t.pre[v][7];
      if (base + t.min[v] <= limit) {
        for (int j = 7; j >= 0; --j) {
          if (base + t.pre[v][j] <= limit) return s + j;
        }
      }
      if (s == a) return std::nullopt;
      cur = base - delta(s - 1);
      q = s - 1;
    } else {
      if (cur <= limit) return q;
      if (q == a) return std::nullopt;
      cur -= delta(q - 1);
      --q;
    }
  }
}

std::optional<std::uint64_t> BpsTopology::scan_select(std::uint64_t a, std::uint64_t b,
                                                      std::int64_t m, std::uint64_t& k) const {
  const auto& t = tables();
  const auto& w = parens_.words();
  std::int64_t cur = excess(a);
  std::uint64_t q = a;
  while (q <= b) {
    if (q % 8 == 0 && q + 7 <= b) {
      const std::uint8_t v = byte_at(q);
      if (cur + t.min[v] == m) {
        if (t.count[v] < k) {
          k -= t.count[v];
        } else {
          for (int j = 0; j < 8; ++j) {
            if (cur + t.pre[v][j] == m && --k == 0) return q + j;
          }
        }
      }
      cur += t.pre[v][8];
      q += 8;
    } else {
      if (cur == m && --k == 0) return q;
      cur += ((w[q >> 6] >> (q & 63)) & 1) ? 1 : -1;
      ++q;
    }
  }
  return std::nullopt;
}

std::vector<std::uint64_t> BpsTopology::cover_blocks(std::uint64_t b1, std::uint64_t b2) const {
  std::vector<std::uint64_t> left;
  std::vector<std::uint64_t> right;
  std::uint64_t l = b1 + leaves_;
  std::uint64_t r = b2 + leaves_ + 1;
  while (l < r) {
    if (l & 1) left.push_back(l++);
    if (r & 1) right.push_back(--r);
    l >>= 1;
    r >>= 1;
  }
  left.insert(left.end(), right.rbegin(), right.rend());
  return left;
}

std::optional<std::uint64_t> BpsTopology::fwd_le(std::uint64_t p, std::int64_t limit) const {
  const std::uint64_t N = parens_.size();
  if (p >= N) return std::nullopt;
  const std::uint64_t k = (p + 1) / kBlock;
  if (auto q = scan_fwd(p + 1, std::min(k * kBlock + kBlock - 1, N), limit)) return q;
  if (k + 1 >= nblocks_) return std::nullopt;
  for (std::uint64_t x : cover_blocks(k + 1, nblocks_ - 1)) {
    if (tree_[x].min > limit) continue;
    while (x < leaves_) x = tree_[2 * x].min <= limit ? 2 * x : 2 * x + 1;
    const std::uint64_t blk = x - leaves_;
    return scan_fwd(blk * kBlock, std::min(blk * kBlock + kBlock - 1, N), limit);
  }
  return std::nullopt;
}

std::optional<std::uint64_t> BpsTopology::bwd_le(std::uint64_t p, std::int64_t limit) const {
  if (p == 0) return std::nullopt;
  const std::uint64_t k = (p - 1) / kBlock;
  if (auto q = scan_bwd(k * kBlock, p - 1, limit)) return q;
  if (k == 0) return std::nullopt;
  auto nodes = cover_blocks(0, k - 1);
  for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) {
    std::uint64_t x = *it;
    if (tree_[x].min > limit) continue;
    while (x < leaves_) x = tree_[2 * x + 1].min <= limit ? 2 * x + 1 : 2 * x;
    const std::uint64_t blk = x - leaves_;
    return scan_bwd(blk * kBlock, blk * kBlock + kBlock - 1, limit);
  }
  return std::nullopt;
}

BpsTopology::MinCount BpsTopology::range_min(std::uint64_t a, std::uint64_t b) const {
  const std::uint64_t ka = a / kBlock;
  const std::uint64_t kb = b / kBlock;
  if (ka == kb) return scan_min(a, b);
  MinCount mc = scan_min(a, ka * kBlock + kBlock - 1);
  auto take = [&](const MinCount& o) {
    if (o.min < mc.min) {
      mc = o;
    } else if (o.min == mc.min) {
      mc.count += o.count;
    }
  };
  if (ka + 1 < kb) {
    for (std::uint64_t x : cover_blocks(ka + 1, kb - 1)) take(tree_[x]);
  }
  take(scan_min(kb * kBlock, b));
  return mc;
}

std::uint64_t BpsTopology::select_min(std::uint64_t a, std::uint64_t b, std::int64_t m,
                                      std::uint64_t k) const {
  const std::uint64_t N = parens_.size();
  const std::uint64_t ka = a / kBlock;
  const std::uint64_t kb = b / kBlock;
  if (ka == kb) {
    if (auto q = scan_select(a, b, m, k)) return *q;
    throw DomainError("minimum occurrence out of range");
  }
  if (auto q = scan_select(a, ka * kBlock + kBlock - 1, m, k)) return *q;
  if (ka + 1 < kb) {
    for (std::uint64_t x : cover_blocks(ka + 1, kb - 1)) {
      if (tree_[x].min != m) continue;
      if (tree_[x].count < k) {
        k -= tree_[x].count;
        continue;
      }
      while (x < leaves_) {
        const auto& l = tree_[2 * x];
        if (l.min == m && l.count >= k) {
          x = 2 * x;
        } else {
          if (l.min == m) k -= l.count;
          x = 2 * x + 1;
        }
      }
      const std::uint64_t blk = x - leaves_;
      if (auto q = scan_select(blk * kBlock, std::min(blk * kBlock + kBlock - 1, N), m, k)) {
        return *q;
      }
      throw DomainError("minimum occurrence out of range");
    }
  }
  if (auto q = scan_select(kb * kBlock, b, m, k)) return *q;
  throw DomainError("minimum occurrence out of range");
}

std::uint64_t BpsTopology::open(NodeId u) const {
  check(u);
  return parens_.select1(u);
}

std::uint64_t BpsTopology::close(NodeId u) const {
  const std::uint64_t p = open(u);
  return *fwd_le(p, excess(p) - 1);
}

NodeId BpsTopology::parent(NodeId u) const {
  check(u);
  if (u == 1) return kNoNode;
  const std::uint64_t p = open(u);
  return node_at(*bwd_le(p, excess(p) - 2) + 1);
}

std::uint32_t BpsTopology::depth(NodeId u) const {
  return static_cast<std::uint32_t>(excess(open(u)) - 1);
}

NodeId BpsTopology::subtree_end(NodeId u) const { return node_at(close(u)); }

std::uint32_t BpsTopology::degree(NodeId u) const {
  const std::uint64_t p = open(u);
  const std::uint64_t q = close(u);
  if (q == p + 1) return 0;
  return static_cast<std::uint32_t>(range_min(p + 1, q - 1).count);
}

NodeId BpsTopology::cbr(NodeId u, std::uint32_t k) const {
  const std::uint32_t d = degree(u);
  if (k == 0 || k > d) {
    throw BoundsError("node " + std::to_string(u) + " has " + std::to_string(d) +
                      " children, asked for child " + std::to_string(k));
  }
  if (k == 1) return u + 1;
  const std::uint64_t p = open(u);
  const std::uint64_t q = close(u);
  return node_at(select_min(p + 1, q - 1, excess(p), k - 1) + 1);
}

std::uint32_t BpsTopology::sr(NodeId u) const {
  check(u);
  if (u == 1) throw DomainError("the root has no siblings");
  const std::uint64_t p = open(u);
  const std::uint64_t pp = *bwd_le(p, excess(p) - 2) + 1;
  if (p == pp + 1) return 1;
  return static_cast<std::uint32_t>(range_min(pp + 1, p - 1).count) + 1;
}

bool BpsTopology::is_ancestor(NodeId a, NodeId u) const {
  check(u);
  return a <= u && u <= subtree_end(a);
}

NodeId BpsTopology::lca(NodeId u, NodeId v) const {
  check(u);
  check(v);
  if (u > v) std::swap(u, v);
  if (is_ancestor(u, v)) return u;
  const std::uint64_t pu = open(u);
  const std::uint64_t pv = open(v);
  const std::int64_t m = range_min(pu, pv).min;
  const std::uint64_t q = *fwd_le(pu - 1, m);
  return parent(node_at(q + 1));
}

NodeId BpsTopology::laq(NodeId u, std::uint32_t l) const {
  const std::uint32_t d = depth(u);
  if (l > d) {
    throw BoundsError("node " + std::to_string(u) + " has depth " + std::to_string(d) +
                      ", asked for ancestor " + std::to_string(l) + " levels up");
  }
  if (l == 0) return u;
  const std::uint64_t p = open(u);
  return node_at(*bwd_le(p, excess(p) - static_cast<std::int64_t>(l) - 1) + 1);
}

NodeId BpsTopology::isd(NodeId u, NodeId v, NodeId u2) const {
  check(v);
  check(u2);
  if (!is_ancestor(u, v)) {
    throw DomainError("node " + std::to_string(v) + " is not in the subtree of " +
                      std::to_string(u));
  }
  const std::uint64_t pos = open(v) - open(u) + open(u2);
  if (pos > parens_.size() || !parens_.access(pos)) {
    throw DomainError("translated position does not open a node");
  }
  return node_at(pos);
}

std::optional<NodeId> BpsTopology::next_marked_in_subtree(const MarkSet& marks, NodeId u) const {
  const std::uint64_t p = open(u);
  const auto s = marks.bits().succ1(p + 1);
  if (!s || *s > close(u)) return std::nullopt;
  return node_at(*s);
}

NodeId BpsTopology::lowest_covering_ancestor(const MarkSet& marks, NodeId u) const {
  const std::uint64_t p = open(u);
  const std::uint64_t q = close(u);
  const auto inside = marks.bits().succ1(p);
  if (inside && *inside <= q) return u;
  NodeId best = kNoNode;
  auto consider = [&](std::optional<std::uint64_t> pos) {
    if (!pos) return;
    const NodeId a = lca(node_at(*pos), u);
    if (best == kNoNode || depth(a) > depth(best)) best = a;
  };
  consider(marks.bits().pred1(p - 1));
  consider(marks.bits().succ1(q + 1));
  if (best == kNoNode) throw DomainError("no marked node in the tree");
  return best;
}

std::vector<NodeId> BpsTopology::parents() const {
  std::vector<NodeId> parent(static_cast<std::size_t>(n_) + 1, 0);
  std::vector<NodeId> stack;
  NodeId next = 1;
  for (std::uint64_t p = 1; p <= parens_.size(); ++p) {
    if (parens_.access(p)) {
      parent[next] = stack.empty() ? 0 : stack.back();
      stack.push_back(next++);
    } else {
      stack.pop_back();
    }
  }
  return parent;
}

std::uint64_t BpsTopology::size_in_bits() const {
  return parens_.size_in_bits() + 128 * tree_.size() + 192;
}

MarkSet::MarkSet(const BpsTopology& topo, std::span<const NodeId> nodes) {
  std::vector<std::uint32_t> pos;
  pos.reserve(nodes.size());
  for (NodeId u : nodes) pos.push_back(static_cast<std::uint32_t>(topo.open(u)));
  std::sort(pos.begin(), pos.end());
  pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
  bits_ = SparseBitVec(topo.parens().size(), std::move(pos));
}

LabeledTrie rebuild_trie(const BpsTopology& topo, std::span<const Label> labels,
                         const Alphabet& alphabet) {
  if (labels.size() != static_cast<std::size_t>(topo.size()) + 1) {
    throw FormatError("label table does not match the topology");
  }
  return LabeledTrie::from_parents(topo.parents(), std::vector<Label>(labels.begin(), labels.end()),
                                   alphabet);
}

}  // namespace rlxt
