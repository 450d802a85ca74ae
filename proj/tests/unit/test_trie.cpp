#include <gtest/gtest.h>

#include <sstream>

#include "corpus.hpp"
#include "oracles.hpp"
#include "rlxt/errors.hpp"
#include "rlxt/trie.hpp"

using namespace rlxt;
using namespace rlxt::testing;

namespace {

const std::vector<NodeId> kEx26Colex{0,  1,  2,  3,  4,  11, 23, 15, 21, 10, 22, 14, 6, 5,
                                     12, 24, 16, 19, 8,  26, 18, 7,  13, 25, 17, 20, 9};

}  // namespace

TEST(Trie, Ex26Shape) {
  const LabeledTrie t = ex26();
  EXPECT_EQ(t.size(), 26u);
  EXPECT_EQ(t.sigma(), 4u);
  EXPECT_EQ(t.label(1), kSentinel);
  EXPECT_EQ(t.out(3), codes(t, "abc"));
  EXPECT_EQ(t.out(14), codes(t, "ac"));
  EXPECT_EQ(t.depth(12), 7u);
  EXPECT_EQ(t.path_label(12), codes(t, "aaccaab"));
}

TEST(Trie, EmptyInputIsRootOnly) {
  std::istringstream in("");
  const LabeledTrie t = read_strings_trie(in);
  EXPECT_EQ(t.size(), 1u);
  EXPECT_EQ(t.sigma(), 1u);
  EXPECT_TRUE(t.children(1).empty());
}

TEST(Trie, DuplicatesDeduplicated) {
  const std::vector<std::string> s{"ab", "ab"};
  const LabeledTrie t = LabeledTrie::from_strings(s);
  EXPECT_EQ(t.size(), 3u);
}

TEST(Trie, NulByteRejected) {
  std::istringstream in(std::string("ab\n\0c\n", 6));
  EXPECT_THROW(read_strings_trie(in), FormatError);
}

TEST(Trie, FromEdgesPath) {
  const std::vector<std::pair<NodeId, std::uint8_t>> e{{1, 'a'}, {2, 'b'}};
  const LabeledTrie t = LabeledTrie::from_edges(3, e);
  EXPECT_EQ(t.parent(3), 2u);
  EXPECT_EQ(t.alphabet().byte_of(t.label(3)), 'b');
}

TEST(Trie, FromEdgesErrors) {
  const std::vector<std::pair<NodeId, std::uint8_t>> dup{{1, 'a'}, {1, 'a'}};
  EXPECT_THROW(LabeledTrie::from_edges(3, dup), DeterminismError);
  const std::vector<std::pair<NodeId, std::uint8_t>> order{{1, 'a'}, {3, 'b'}};
  EXPECT_THROW(LabeledTrie::from_edges(3, order), PreorderError);
}

TEST(Trie, EdgesRoundTrip) {
  const LabeledTrie t = ex26();
  const auto e = t.edges();
  ASSERT_EQ(e.size(), 25u);
  EXPECT_EQ(LabeledTrie::from_edges(26, e), t);
  std::stringstream ss;
  write_edges_trie(ss, t);
  EXPECT_EQ(read_edges_trie(ss), t);
  const auto leaves = t.leaf_strings();
  EXPECT_EQ(LabeledTrie::from_strings(leaves), t);
}

TEST(Colex, Ex26Permutation) {
  EXPECT_EQ(colex_sort(ex26()).colex_to_pre(), kEx26Colex);
}

TEST(Colex, SmallCases) {
  EXPECT_EQ(colex_sort(LabeledTrie()).colex_to_pre(), (std::vector<NodeId>{0, 1}));
  EXPECT_EQ(colex_sort(path_trie("ba")).colex_to_pre(), (std::vector<NodeId>{0, 1, 3, 2}));
}

TEST(Colex, MatchesReversedPathSort) {
  for (const auto& c : random_corpus(60, 11)) {
    if (c.trie.size() > 200) continue;
    const ColexOrder o = colex_sort(c.trie);
    EXPECT_EQ(o.colex_to_pre(), naive_colex(c.trie)) << c.name;
    for (NodeId u = 1; u <= c.trie.size(); ++u) EXPECT_EQ(o.node_at(o.rank_of(u)), u);
  }
}

TEST(Colex, AxiomsOnConsecutivePairs) {
  for (const auto& c : random_corpus(40, 12)) {
    const ColexOrder o = colex_sort(c.trie);
    for (ColexRank i = 2; i < c.trie.size(); ++i) {
      const NodeId a = o.node_at(i);
      const NodeId b = o.node_at(i + 1);
      ASSERT_LE(c.trie.label(a), c.trie.label(b));
      if (c.trie.label(a) == c.trie.label(b)) {
        ASSERT_LT(o.rank_of(c.trie.parent(a)), o.rank_of(c.trie.parent(b))) << c.name;
      }
    }
  }
}

TEST(OracleLocate, Ex26) {
  const LabeledTrie t = ex26();
  EXPECT_EQ(oracle_locate(t, codes(t, "ac")), (std::vector<NodeId>{18, 7, 13}));
  EXPECT_EQ(oracle_locate(t, LabelString{}),
            std::vector<NodeId>(kEx26Colex.begin() + 1, kEx26Colex.end()));
  EXPECT_TRUE(oracle_locate(t, codes(t, "bb")).empty());
}

TEST(OracleLocate, RangesAreContiguous) {
  for (const auto& c : random_corpus(30, 13)) {
    const ColexOrder o = colex_sort(c.trie);
    for (const auto& p : path_suffixes(c.trie, 4)) {
      const auto occ = oracle_locate(c.trie, o, p);
      ASSERT_FALSE(occ.empty());
      EXPECT_EQ(o.rank_of(occ.back()) - o.rank_of(occ.front()) + 1, occ.size()) << c.name;
    }
  }
}

TEST(Isomorphism, Ex26Examples) {
  const LabeledTrie t = ex26();
  EXPECT_TRUE(is_isomorphic(t, 4, 11));
  EXPECT_FALSE(is_isomorphic(t, 3, 14));
  for (NodeId u = 1; u <= t.size(); ++u) EXPECT_TRUE(is_isomorphic(t, u, u));
}

TEST(Isomorphism, MatchesRecursiveDefinition) {
  for (const auto& c : random_corpus(20, 14)) {
    const NodeId n = std::min<NodeId>(c.trie.size(), 60);
    for (NodeId u = 1; u <= n; ++u) {
      for (NodeId v = 1; v <= n; ++v) {
        ASSERT_EQ(is_isomorphic(c.trie, u, v), naive_isomorphic(c.trie, u, v)) << c.name;
      }
    }
  }
}

TEST(Alphabet, DenseByteOrder) {
  const std::vector<std::string> s{"zb", "y"};
  const LabeledTrie t = LabeledTrie::from_strings(s);
  EXPECT_EQ(t.sigma(), 4u);
  EXPECT_EQ(t.alphabet().code_of('b'), 1);
  EXPECT_EQ(t.alphabet().code_of('y'), 2);
  EXPECT_EQ(t.alphabet().code_of('z'), 3);
  EXPECT_EQ(t.alphabet().code_of('a'), 0);
  EXPECT_FALSE(t.alphabet().encode("a").has_value());
}
