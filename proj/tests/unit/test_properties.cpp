#include <gtest/gtest.h>

#include "corpus.hpp"
#include "oracles.hpp"
#include "rlxt/baseline.hpp"
#include "rlxt/index_file.hpp"
#include "rlxt/measures.hpp"
#include "rlxt/rindex.hpp"

using namespace rlxt;
using namespace rlxt::testing;

TEST(Properties, RepetitiveTriesAgreeWithOracle) {
  Rng rng(91);
  for (const auto& c : repetitive_corpus(6, 92)) {
    const LabeledTrie& t = c.trie;
    const auto colex = naive_colex(t);
    const RIndex r(t);
    const SampledIndex s(t, 16);
    for (ColexRank i = 1; i < t.size(); ++i) ASSERT_EQ(r.phi(colex[i]), colex[i + 1]) << c.name;
    for (const auto& [p, nodes] : suffix_occurrences(t, colex, 4)) {
      ASSERT_EQ(r.locate(p), nodes) << c.name;
      ASSERT_EQ(s.locate(p), nodes) << c.name;
      ASSERT_EQ(r.count(p), nodes.size());
    }
  }
}

TEST(Properties, BuildIsDeterministic) {
  for (const auto& c : random_corpus(10, 93)) {
    EXPECT_EQ(serialize_index(RIndex(c.trie)), serialize_index(RIndex(c.trie))) << c.name;
    EXPECT_EQ(serialize_index(SampledIndex(c.trie, 3 > c.trie.size() ? 1 : 3)),
              serialize_index(SampledIndex(c.trie, 3 > c.trie.size() ? 1 : 3)));
  }
}

TEST(Properties, RunsBlocksAndColors) {
  for (const auto& c : random_corpus(100, 94)) {
    const LabeledTrie& t = c.trie;
    const ColexOrder o = colex_sort(t);
    const RIndex r(t);
    const std::uint64_t runs = r.xbwt().runs();
    EXPECT_EQ(runs, run_breaks(t, o));
    EXPECT_EQ(gamma_r(t, o).size(), runs);
    EXPECT_EQ(quotient(t, o, Relation::kSameOut).classes.size(), r.xbwt().blocks());
    EXPECT_EQ(r.red().ones() + 1, r.xbwt().blocks()) << c.name;
    EXPECT_LE(runs, quotient(t, o, Relation::kIsomorphicSameLabel).omega);
  }
}

TEST(Properties, ReconstructionFromEveryIndex) {
  for (const auto& c : random_corpus(30, 95)) {
    EXPECT_EQ(RIndex(c.trie).reconstruct(), c.trie);
    EXPECT_EQ(SampledIndex(c.trie, 1).reconstruct(), c.trie);
  }
}
