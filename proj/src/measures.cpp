#include "rlxt/measures.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <string>
#include <unordered_map>

#include "rlxt/errors.hpp"

namespace rlxt {

namespace {

struct VectorHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const {
    std::size_t h = v.size();
    for (auto x : v) h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

bool within(double lhs, double rhs) {
  return lhs <= rhs + kEntropyTolerance * std::max(1.0, std::abs(rhs));
}

// Child ids whose incoming edge is in the set, validated against the trie.
std::vector<bool> edge_marks(const LabeledTrie& trie, const std::vector<Edge>& edges) {
  std::vector<bool> marked(static_cast<std::size_t>(trie.size()) + 1, false);
  for (const auto& [p, c] : edges) {
    if (c < 2 || c > trie.size() || trie.parent(c) != p) {
      throw DomainError("(" + std::to_string(p) + "," + std::to_string(c) + ") is not an edge");
    }
    marked[c] = true;
  }
  return marked;
}

// Embeds the complete subtree of u at w; true when it fits and uses a marked edge.
bool embeds_with_hit(const LabeledTrie& trie, const std::vector<bool>& marked, NodeId u,
                     NodeId w) {
  bool hit = false;
  std::vector<std::pair<NodeId, NodeId>> stack{{u, w}};
  while (!stack.empty()) {
    auto [x, y] = stack.back();
    stack.pop_back();
    for (NodeId xc : trie.children(x)) {
      const NodeId yc = trie.child(y, trie.label(xc));
      if (yc == kNoNode) return false;
      hit = hit || marked[yc];
      stack.emplace_back(xc, yc);
    }
  }
  return hit;
}

}  // namespace

double log2_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k == 0 || k == n) return 0;
  const double nn = static_cast<double>(n);
  const double kk = static_cast<double>(k);
  return (std::lgamma(nn + 1) - std::lgamma(kk + 1) - std::lgamma(nn - kk + 1)) / std::log(2.0);
}

EntropyReport entropy_hk(const LabeledTrie& trie, const ColexOrder& colex, std::uint32_t k) {
  EntropyReport rep;
  rep.k = k;
  const std::size_t labels = trie.sigma() - 1;
  std::map<LabelString, std::size_t> index;
  for (ColexRank i = 1; i <= trie.size(); ++i) {
    const NodeId u = colex.node_at(i);
    LabelString ctx(k, kSentinel);
    NodeId x = u;
    for (std::size_t d = k; d > 0; --d) {
      ctx[d - 1] = trie.label(x);
      if (x != 1) x = trie.parent(x);
    }
    auto [it, fresh] = index.emplace(ctx, rep.contexts.size());
    if (fresh) {
      EntropyContext c;
      c.context = ctx;
      c.uses.assign(labels + 1, 0);
      rep.contexts.push_back(std::move(c));
    }
    EntropyContext& c = rep.contexts[it->second];
    ++c.nodes;
    for (NodeId v : trie.children(u)) ++c.uses[trie.label(v)];
  }
  for (auto& c : rep.contexts) {
    for (std::size_t a = 1; a <= labels; ++a) c.bits += log2_binomial(c.nodes, c.uses[a]);
    rep.bits += c.bits;
  }
  return rep;
}

std::uint64_t run_breaks(const LabeledTrie& trie, const ColexOrder& colex) {
  return gamma_r(trie, colex).size();
}

bool EntropyBoundsReport::ok() const {
  return two_h0_holds && std::all_of(per_k.begin(), per_k.end(), [](const auto& b) { return b.holds; });
}

EntropyBoundsReport check_entropy_bounds(const LabeledTrie& trie, const ColexOrder& colex,
                                         std::uint32_t k_max) {
  EntropyBoundsReport rep;
  rep.r = run_breaks(trie, colex);
  const double r = static_cast<double>(rep.r);
  const double sigma = static_cast<double>(trie.sigma());
  double h0 = 0;
  for (std::uint32_t k = 0; k <= k_max; ++k) {
    EntropyBound b;
    b.k = k;
    b.entropy = entropy_hk(trie, colex, k).bits;
    b.bound = b.entropy + std::pow(sigma, k + 1);
    b.holds = within(r, b.bound);
    if (k == 0) h0 = b.entropy;
    rep.per_k.push_back(b);
  }
  rep.two_h0_plus_one = 2 * h0 + 1;
  rep.two_h0_holds = within(r, rep.two_h0_plus_one);
  return rep;
}

std::vector<Edge> gamma_r(const LabeledTrie& trie, const ColexOrder& colex) {
  std::vector<Edge> out;
  const NodeId n = trie.size();
  for (ColexRank i = 1; i <= n; ++i) {
    const NodeId u = colex.node_at(i);
    const NodeId next = i < n ? colex.node_at(i + 1) : kNoNode;
    for (NodeId v : trie.children(u)) {
      if (next == kNoNode || trie.child(next, trie.label(v)) == kNoNode) out.emplace_back(u, v);
    }
  }
  return out;
}

bool verify_attractor(const LabeledTrie& trie, const std::vector<Edge>& edges, AttractorMode mode) {
  const NodeId n = trie.size();
  const auto marked = edge_marks(trie, edges);

  if (mode == AttractorMode::kAllConnected) {
    if (n > kAllConnectedLimit) {
      throw SizeError("all-connected attractor check is limited to " +
                      std::to_string(kAllConnectedLimit) + " nodes, trie has " + std::to_string(n));
    }
    std::vector<NodeId> image(static_cast<std::size_t>(n) + 1, kNoNode);
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      if ((mask & (mask - 1)) == 0) continue;  // single node, no edge
      const NodeId root = static_cast<NodeId>(std::countr_zero(mask)) + 1;
      bool connected = true;
      for (NodeId x = root + 1; x <= n && connected; ++x) {
        if ((mask >> (x - 1) & 1) && !(mask >> (trie.parent(x) - 1) & 1)) connected = false;
      }
      if (!connected) continue;
      bool covered = false;
      for (NodeId w = 1; w <= n && !covered; ++w) {
        image[root] = w;
        bool fits = true;
        bool hit = false;
        for (NodeId x = root + 1; x <= n && fits; ++x) {
          if (!(mask >> (x - 1) & 1)) continue;
          image[x] = trie.child(image[trie.parent(x)], trie.label(x));
          if (image[x] == kNoNode) {
            fits = false;
          } else {
            hit = hit || marked[image[x]];
          }
        }
        covered = fits && hit;
      }
      if (!covered) return false;
    }
    return true;
  }

  // Marked edges inside each complete subtree, by pre-order prefix sums.
  std::vector<std::uint32_t> prefix(static_cast<std::size_t>(n) + 1, 0);
  for (NodeId u = 1; u <= n; ++u) prefix[u] = prefix[u - 1] + (marked[u] ? 1 : 0);
  const ColexOrder colex = colex_sort(trie);
  for (NodeId u = 1; u <= n; ++u) {
    if (trie.out_degree(u) == 0) continue;
    if (prefix[trie.subtree_end(u)] > prefix[u]) continue;
    bool covered = false;
    // Successive co-lex nodes first, then every node.
    for (ColexRank i = colex.rank_of(u) + 1; i <= n && !covered; ++i) {
      const NodeId w = colex.node_at(i);
      if (trie.out_degree(w) < trie.out_degree(u)) break;
      covered = embeds_with_hit(trie, marked, u, w);
    }
    for (NodeId w = 1; w <= n && !covered; ++w) covered = embeds_with_hit(trie, marked, u, w);
    if (!covered) return false;
  }
  return true;
}

const char* relation_name(Relation r) {
  switch (r) {
    case Relation::kSameOut: return "same-out";
    case Relation::kIsomorphic: return "isomorphic";
    case Relation::kIsomorphicSameLabel: return "isomorphic-same-label";
  }
  return "unknown";
}

std::vector<std::uint32_t> subtree_classes(const LabeledTrie& trie) {
  const NodeId n = trie.size();
  std::vector<std::uint32_t> cls(static_cast<std::size_t>(n) + 1, 0);
  std::unordered_map<std::vector<std::uint32_t>, std::uint32_t, VectorHash> ids;
  std::vector<std::uint32_t> key;
  for (NodeId u = n; u >= 1; --u) {
    key.clear();
    for (NodeId v : trie.children(u)) {
      key.push_back(trie.label(v));
      key.push_back(cls[v]);
    }
    auto [it, fresh] = ids.emplace(key, static_cast<std::uint32_t>(ids.size()));
    cls[u] = it->second;
  }
  return cls;
}

QuotientReport quotient(const LabeledTrie& trie, const ColexOrder& colex, Relation relation) {
  QuotientReport rep;
  rep.relation = relation;
  const NodeId n = trie.size();
  std::vector<std::uint32_t> cls;
  if (relation != Relation::kSameOut) cls = subtree_classes(trie);
  auto same = [&](NodeId a, NodeId b) {
    switch (relation) {
      case Relation::kSameOut: return trie.out(a) == trie.out(b);
      case Relation::kIsomorphic: return cls[a] == cls[b];
      case Relation::kIsomorphicSameLabel: return cls[a] == cls[b] && trie.label(a) == trie.label(b);
    }
    return false;
  };
  ColexRank start = 1;
  for (ColexRank i = 1; i <= n; ++i) {
    if (i == n || !same(colex.node_at(i), colex.node_at(i + 1))) {
      rep.classes.emplace_back(start, i);
      rep.omega += trie.out_degree(colex.node_at(i));
      start = i + 1;
    }
  }
  return rep;
}

}  // namespace rlxt
