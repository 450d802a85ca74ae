#include <gtest/gtest.h>

#include "corpus.hpp"
#include "oracles.hpp"
#include "rlxt/errors.hpp"
#include "rlxt/rl_xbwt.hpp"
#include "rlxt/serialize.hpp"

using namespace rlxt;
using namespace rlxt::testing;

namespace {

RlXbwt build(const LabeledTrie& t) { return RlXbwt(t, colex_sort(t)); }

}  // namespace

TEST(RlXbwt, Ex26Triples) {
  const LabeledTrie t = ex26();
  const RlXbwt x = build(t);
  const std::vector<XbwtTriple> want{
      {codes(t, "abc"), {}, 3},  {{}, codes(t, "ac"), 4},  {{}, codes(t, "b"), 1},
      {codes(t, "ac"), {}, 3},   {{}, codes(t, "ac"), 8},  {codes(t, "bc"), {}, 2},
      {{}, codes(t, "bc"), 3},   {codes(t, "a"), {}, 2}};
  EXPECT_EQ(x.triples(), want);
  EXPECT_EQ(x.sprime_string(t.alphabet()), "a+b+c+/a-c-/b-/a+c+/a-c-/b+c+/b-c-/a+/");
  EXPECT_EQ(x.runs(), 8u);
  EXPECT_EQ(x.blocks(), 8u);
  EXPECT_EQ(x.runs(1), 3u);
  EXPECT_EQ(x.runs(2), 2u);
  EXPECT_EQ(x.runs(3), 3u);
  EXPECT_EQ(x.c_array(), (std::vector<std::uint32_t>{0, 1, 9, 18, 26}));
}

TEST(RlXbwt, Ex26Queries) {
  const LabeledTrie t = ex26();
  const RlXbwt x = build(t);
  const Label a = 1, b = 2, c = 3;
  EXPECT_EQ(x.rank(b, 7), 7u);
  EXPECT_EQ(x.rank(a, 26), 8u);
  EXPECT_EQ(x.rank(c, 0), 0u);
  EXPECT_EQ(x.successor(b, 8), 20u);
  EXPECT_EQ(x.successor(a, 1), 1u);
  EXPECT_FALSE(x.successor(c, 22).has_value());
  EXPECT_EQ(x.cr(3, c), 3u);
  EXPECT_EQ(x.cr(20, c), 2u);
  EXPECT_THROW(x.cr(4, a), DomainError);
  EXPECT_EQ(x.backward_extend({1, 26}, a), (ColexRange{2, 9}));
  EXPECT_EQ(x.backward_extend({2, 9}, c), (ColexRange{20, 22}));
  EXPECT_FALSE(x.backward_extend({4, 7}, a).has_value());
  EXPECT_FALSE(x.backward_extend({1, 26}, 9).has_value());
}

TEST(RlXbwt, SingleNode) {
  const RlXbwt x = build(LabeledTrie());
  EXPECT_EQ(x.runs(), 0u);
  EXPECT_EQ(x.blocks(), 1u);
  EXPECT_EQ(x.triples().front(), (XbwtTriple{{}, {}, 1}));
  EXPECT_EQ(x.sprime_string(Alphabet()), "/");
}

TEST(RlXbwt, RandomAgainstScans) {
  for (auto cs : {random_corpus(80, 31), fixed_corpus()}) {
    for (const auto& cse : cs) {
      const LabeledTrie& t = cse.trie;
      const auto colex = naive_colex(t);
      const auto outs = out_sequence(t, colex);
      const RlXbwt x = build(t);
      const NaiveRuns nr = naive_runs(outs, t.sigma());
      const NodeId n = t.size();
      ASSERT_EQ(x.runs(), nr.r) << cse.name;
      ASSERT_EQ(x.blocks(), nr.blocks);
      for (Label c = 1; c < t.sigma(); ++c) ASSERT_EQ(x.runs(c), nr.per_label[c]);

      // Reconstruction law and maximality.
      LabelString cur;
      ColexRank i = 1;
      std::uint64_t add = 0, del = 0;
      for (std::size_t q = 0; q < x.triples().size(); ++q) {
        const auto& tr = x.triples()[q];
        if (n > 1) ASSERT_FALSE(tr.add.empty() && tr.del.empty());
        LabelString next;
        for (Label c : cur) {
          if (!has(tr.del, c)) next.push_back(c);
        }
        next.insert(next.end(), tr.add.begin(), tr.add.end());
        std::sort(next.begin(), next.end());
        cur = next;
        for (std::uint64_t k = 0; k < tr.length; ++k, ++i) ASSERT_EQ(outs[i], cur);
        add += tr.add.size();
        del += tr.del.size();
      }
      ASSERT_EQ(i, n + 1);
      ASSERT_LE(del, nr.r);
      ASSERT_LE(add, 2 * nr.r);
      if (n > 1) ASSERT_LE(x.blocks(), 3 * nr.r);

      for (ColexRank j = 1; j <= n; ++j) {
        ASSERT_EQ(x.out(j), outs[j]);
        for (Label c = 1; c < t.sigma(); ++c) {
          ASSERT_EQ(x.rank(c, j), naive_rank(outs, c, j)) << cse.name;
          ASSERT_EQ(x.successor(c, j), naive_successor(outs, c, j)) << cse.name;
          ASSERT_EQ(x.contains(j, c), has(outs[j], c));
          if (has(outs[j], c)) {
            const auto pos = std::find(outs[j].begin(), outs[j].end(), c) - outs[j].begin();
            ASSERT_EQ(x.cr(j, c), pos + 1u);
          } else {
            ASSERT_THROW(x.cr(j, c), DomainError);
          }
        }
      }
      // Between two consecutive c+ there is exactly one c-.
      for (Label c = 1; c < t.sigma(); ++c) {
        int balance = 0;
        for (std::uint64_t p = 1; p <= x.sprime().size(); ++p) {
          const auto s = x.sprime().access(p);
          if (s == x.plus(c)) ASSERT_EQ(++balance, 1);
          if (s == x.minus(c)) ASSERT_EQ(--balance, 0);
        }
      }
      // Run heads.
      for (Label c = 1; c < t.sigma(); ++c) {
        std::uint64_t k = 0;
        for (ColexRank j = 1; j <= n; ++j) {
          if (has(outs[j], c) && (j == 1 || !has(outs[j - 1], c))) {
            const RunHead& h = x.run_head(c, ++k);
            ASSERT_EQ(h.colex, j);
            ASSERT_EQ(h.node, colex[j]);
            ASSERT_EQ(h.partial_rank, naive_rank(outs, c, j - 1));
            ASSERT_EQ(x.run_head_node(c, j), colex[j]);
          }
        }
      }
    }
  }
}

TEST(RlXbwt, PathTrieRunsEqualCharacterRuns) {
  Rng rng(37);
  for (int i = 0; i < 50; ++i) {
    const std::string s = random_word(rng, 1, 300, 1 + rng() % 4);
    const LabeledTrie t = path_trie(s);
    const auto colex = naive_colex(t);
    std::uint64_t runs = 0;
    Label prev = 255;
    for (ColexRank j = 1; j <= t.size(); ++j) {
      const auto kids = t.children(colex[j]);
      const Label c = kids.empty() ? 0 : t.label(kids[0]);
      if (c != 0 && c != prev) ++runs;
      prev = c;
    }
    EXPECT_EQ(build(t).runs(), runs) << s;
  }
}

TEST(RlXbwt, SaveLoadRoundTrip) {
  for (const auto& c : fixed_corpus()) {
    const RlXbwt x = build(c.trie);
    Writer a, b, h;
    x.save_triples(a);
    x.save_sprime(b);
    x.save_run_heads(h);
    Reader ra(a.data()), rb(b.data()), rh(h.data());
    EXPECT_EQ(RlXbwt::load(ra, rb, rh), x) << c.name;
  }
}
