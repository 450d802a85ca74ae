#include <gtest/gtest.h>

#include <cmath>

#include "corpus.hpp"
#include "oracles.hpp"
#include "rlxt/baseline.hpp"
#include "rlxt/errors.hpp"
#include "rlxt/index_file.hpp"
#include "rlxt/rindex.hpp"

using namespace rlxt;
using namespace rlxt::testing;

namespace {

void expect_cover_bounds(const LabeledTrie& t, const TreeCover& cover, const std::string& name) {
  const NodeId n = t.size();
  const auto comps = cover.components(t);
  std::vector<int> owner(n + 1, 0);
  for (const auto& comp : comps) {
    ASSERT_LE(comp.size(), 2ull * cover.t - 1 + (cover.t == 1 ? 1 : 0)) << name;
    ASSERT_TRUE(cover.is_root[comp.front()]);
    for (std::size_t k = 1; k < comp.size(); ++k) {
      const NodeId x = comp[k];
      ASSERT_TRUE(std::find(comp.begin(), comp.end(), t.parent(x)) != comp.end()) << name;
      if (!cover.is_root[x]) ++owner[x];
    }
  }
  for (NodeId u = 2; u <= n; ++u) {
    if (!cover.is_root[u]) ASSERT_EQ(owner[u], 1) << name << " node " << u;
  }
  ASSERT_TRUE(cover.is_root[1]);
  const auto roots = cover.roots().size();
  ASSERT_LE(roots, std::max<std::uint64_t>(1, (2ull * n + cover.t - 1) / cover.t)) << name;
}

}  // namespace

TEST(XbwtNav, Ex26Navigation) {
  const LabeledTrie t = ex26();
  const XbwtNav nav(t, colex_sort(t));
  EXPECT_EQ(nav.parent(4), 3u);
  EXPECT_EQ(nav.parent(2), 1u);
  EXPECT_EQ(nav.parent(14), 5u);
  EXPECT_THROW(nav.parent(1), DomainError);
  EXPECT_EQ(nav.child(3, 2), 12u);
  EXPECT_THROW(nav.child(8, 1), DomainError);
  EXPECT_EQ(nav.backward_extend({1, 26}, 1), (ColexRange{2, 9}));
  EXPECT_EQ(nav.backward_extend({2, 9}, 3), (ColexRange{20, 22}));
}

TEST(XbwtNav, InverseOfChildAndParent) {
  for (const auto& c : random_corpus(60, 61)) {
    const LabeledTrie& t = c.trie;
    const auto colex = naive_colex(t);
    const auto rank = inverse(colex);
    const XbwtNav nav(t, colex_sort(t));
    for (ColexRank i = 1; i <= t.size(); ++i) {
      const NodeId u = colex[i];
      ASSERT_EQ(nav.label(i), t.label(u));
      ASSERT_EQ(nav.degree(i), t.out_degree(u));
      if (i > 1) ASSERT_EQ(nav.parent(i), rank[t.parent(u)]);
      for (NodeId v : t.children(u)) {
        const ColexRank j = nav.child(i, t.label(v));
        ASSERT_EQ(j, rank[v]) << c.name;
        ASSERT_EQ(nav.parent(j), i);
        ASSERT_EQ(nav.edge_source(nav.incoming_edge(j)), i);
        ASSERT_EQ(nav.edge_target(nav.incoming_edge(j)), j);
      }
    }
  }
}

TEST(Cover, Examples) {
  const LabeledTrie t = ex26();
  const TreeCover whole = build_cover(t, 26);
  EXPECT_EQ(whole.roots(), std::vector<NodeId>{1});
  const TreeCover all = build_cover(t, 1);
  EXPECT_EQ(all.roots().size(), 26u);
  expect_cover_bounds(t, build_cover(t, 4), "ex26-t4");
  EXPECT_THROW(build_cover(t, 0), DomainError);
  EXPECT_THROW(build_cover(t, 27), DomainError);
}

TEST(Cover, BoundsOnCorpus) {
  for (const auto& c : random_corpus(80, 62)) {
    const NodeId n = c.trie.size();
    const std::uint32_t root_n = static_cast<std::uint32_t>(std::ceil(std::sqrt(double(n))));
    for (std::uint32_t t : {1u, 2u, root_n, static_cast<std::uint32_t>(n)}) {
      expect_cover_bounds(c.trie, build_cover(c.trie, std::min<std::uint32_t>(t, n)), c.name);
    }
  }
}

TEST(SampledIndex, Ex26Preorder) {
  const LabeledTrie t = ex26();
  const auto colex = colex_sort(t);
  for (std::uint32_t tt : {1u, 2u, 3u, 4u, 5u, 8u, 26u}) {
    const SampledIndex s(t, tt);
    for (ColexRank i = 1; i <= 26; ++i) ASSERT_EQ(s.preorder(i), colex.node_at(i)) << "t=" << tt;
  }
  EXPECT_EQ(SampledIndex(t, 1).roots(), 26u);
}

TEST(SampledIndex, Ex26Locate) {
  const SampledIndex s(ex26(), 4);
  EXPECT_EQ(s.locate("ac"), (std::vector<NodeId>{18, 7, 13}));
  EXPECT_EQ(s.locate(""), (std::vector<NodeId>{1, 2, 3, 4, 11, 23, 15, 21, 10, 22, 14, 6, 5,
                                               12, 24, 16, 19, 8, 26, 18, 7, 13, 25, 17, 20, 9}));
  EXPECT_TRUE(s.locate("bb").empty());
  EXPECT_EQ(s.count("ca"), 2u);
  EXPECT_EQ(s.count("q"), 0u);
}

TEST(SampledIndex, PreorderOnCorpus) {
  for (const auto& c : random_corpus(80, 63)) {
    const NodeId n = c.trie.size();
    const auto colex = naive_colex(c.trie);
    const std::uint32_t root_n = static_cast<std::uint32_t>(std::ceil(std::sqrt(double(n))));
    for (std::uint32_t t : {1u, 2u, root_n, static_cast<std::uint32_t>(n)}) {
      const SampledIndex s(c.trie, std::min<std::uint32_t>(t, n));
      for (ColexRank i = 1; i <= n; ++i) ASSERT_EQ(s.preorder(i), colex[i]) << c.name << " t=" << t;
    }
  }
}

TEST(SampledIndex, AgreesWithRIndexAndOracle) {
  for (const auto& c : random_corpus(40, 64)) {
    const auto colex = naive_colex(c.trie);
    const SampledIndex s(c.trie, std::max<std::uint32_t>(1, c.trie.size() / 8));
    const RIndex r(c.trie);
    for (const auto& [p, nodes] : suffix_occurrences(c.trie, colex, 5)) {
      ASSERT_EQ(s.locate(p), nodes) << c.name;
      ASSERT_EQ(r.locate(p), nodes);
    }
  }
}

TEST(SampledIndex, ReconstructAndSerialize) {
  for (const auto& c : fixed_corpus()) {
    const SampledIndex s(c.trie, std::max<std::uint32_t>(1, c.trie.size() / 3));
    EXPECT_EQ(s.reconstruct(), c.trie) << c.name;
    const Index back = deserialize_index(serialize_index(s));
    EXPECT_TRUE(std::get<SampledIndex>(back) == s) << c.name;
  }
}

TEST(SampledIndex, SpaceShrinksWithT) {
  Rng rng(65);
  const LabeledTrie t = random_trie(rng, 3000, 4);
  EXPECT_GT(SampledIndex(t, 1).sampling_bits(), SampledIndex(t, 16).sampling_bits());
  EXPECT_GT(SampledIndex(t, 16).sampling_bits(), SampledIndex(t, 256).sampling_bits());
}
