#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rlxt/trie.hpp"

namespace rlxt::testing {

using Rng = std::mt19937_64;

std::vector<std::string> ex26_strings();
LabeledTrie ex26();
// Root with children a -> {a, c} and b -> {c, d}.
LabeledTrie t2();

// Uniform random trie on exactly n nodes over letters 'a'.. ('a'+sigma-1).
LabeledTrie random_trie(Rng& rng, NodeId n, unsigned sigma);
std::string random_word(Rng& rng, std::size_t min_len, std::size_t max_len, unsigned sigma);
std::vector<std::string> random_words(Rng& rng, std::size_t count, std::size_t min_len,
                                      std::size_t max_len, unsigned sigma);
// Each word is edited (substitution, insertion or deletion of one letter) with probability rate.
std::vector<std::string> mutate(Rng& rng, std::vector<std::string> words, double rate, unsigned sigma);
// Copy j of the mutated dictionary is prefixed with a distinct copy tag.
LabeledTrie repetitive_trie(Rng& rng, const std::vector<std::string>& base, std::size_t copies,
                            double rate, unsigned sigma);
LabeledTrie path_trie(const std::string& s);

struct Case {
  std::string name;
  LabeledTrie trie;
};
// n <= 500, sigma cycling through {2, 4, 8, 26}.
std::vector<Case> random_corpus(std::size_t count, std::uint64_t seed);
// Duplicated and mutated dictionaries, n <= 20000.
std::vector<Case> repetitive_corpus(std::size_t count, std::uint64_t seed);
// Small named tries: EX26, T2, the single-node trie, a few paths and stars.
std::vector<Case> fixed_corpus();

}  // namespace rlxt::testing
