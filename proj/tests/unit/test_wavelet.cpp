#include <gtest/gtest.h>

#include <random>

#include "corpus.hpp"
#include "rlxt/errors.hpp"
#include "rlxt/rl_xbwt.hpp"
#include "rlxt/serialize.hpp"
#include "rlxt/wavelet.hpp"

using namespace rlxt;

TEST(Wavelet, SprimeOfEx26) {
  const LabeledTrie t = rlxt::testing::ex26();
  const RlXbwt x(t, colex_sort(t));
  const WaveletSeq& s = x.sprime();
  ASSERT_EQ(s.size(), 23u);
  EXPECT_EQ(s.rank(x.slash(), 23), 8u);
  EXPECT_EQ(s.rank(x.plus(1), 23), 3u);
  EXPECT_EQ(s.rank(x.plus(1), 0), 0u);
  EXPECT_EQ(s.select(x.slash(), 1), 4u);
  EXPECT_EQ(s.select(x.slash(), 6), 18u);
  EXPECT_EQ(s.range_rank(x.plus(1), x.plus(3), 18), 7u);
  EXPECT_EQ(s.range_rank(x.minus(1), x.minus(3), 18), 5u);
}

TEST(Wavelet, RandomAgainstScan) {
  std::mt19937_64 rng(9);
  for (std::uint32_t sigma : {1u, 2u, 3u, 5u, 8u, 16u}) {
    for (std::uint64_t len : {0u, 1u, 100u, 10000u}) {
      std::vector<std::uint32_t> seq(len);
      for (auto& v : seq) v = static_cast<std::uint32_t>(rng() % sigma);
      const WaveletSeq w(seq, sigma);
      for (std::uint64_t i = 1; i <= len; i += 1 + len / 300) ASSERT_EQ(w.access(i), seq[i - 1]);
      for (int q = 0; q < 300; ++q) {
        const std::uint64_t i = len ? rng() % (len + 1) : 0;
        const std::uint32_t a = static_cast<std::uint32_t>(rng() % sigma);
        const std::uint32_t b = a + static_cast<std::uint32_t>(rng() % (sigma - a));
        std::vector<std::uint64_t> counts(sigma, 0);
        for (std::uint64_t k = 0; k < i; ++k) ++counts[seq[k]];
        ASSERT_EQ(w.rank(a, i), counts[a]);
        std::uint64_t sum = 0, less = 0;
        for (std::uint32_t d = a; d <= b; ++d) sum += counts[d];
        for (std::uint32_t d = 0; d < a; ++d) less += counts[d];
        ASSERT_EQ(w.range_rank(a, b, i), sum);
        ASSERT_EQ(w.rank_less(a, i), less);
        if (i > 0) {
          const std::uint32_t c = seq[i - 1];
          ASSERT_EQ(w.select(c, w.rank(c, i)), i);
        }
      }
      if (len) EXPECT_THROW(w.select(0, w.rank(0, len) + 1), BoundsError);
      Writer wr;
      w.save(wr);
      Reader rd(wr.data());
      EXPECT_EQ(WaveletSeq::load(rd), w);
    }
  }
}

TEST(Wavelet, Bounds) {
  const WaveletSeq w({0, 1, 2}, 3);
  EXPECT_THROW(w.rank(3, 1), BoundsError);
  EXPECT_THROW(w.rank(0, 4), BoundsError);
  EXPECT_THROW(w.access(0), BoundsError);
}
