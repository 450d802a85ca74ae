#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "rlxt/index_file.hpp"

namespace rlxt {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitFormat = 2;
inline constexpr int kExitVersion = 3;
inline constexpr int kExitIo = 4;

// Worker count for pattern fan-out: min(TRIE_RINDEX_THREADS, hardware, jobs), at least 1.
unsigned worker_threads(std::size_t jobs);

// Decodes pairs of hex digits; throws FormatError on odd length or a bad digit.
std::string decode_hex(std::string_view hex);

nlohmann::ordered_json stats_json(const Index& index, std::uint32_t k_max = 2);

struct VerifyOptions {
  bool full = false;
  bool corrupt_phi = false;
  std::uint32_t random_patterns = 200;
  std::uint64_t seed = 1;
};
// Runs every invariant check; "pass" is false when any named check fails.
nlohmann::ordered_json verify_json(const LabeledTrie& trie, const VerifyOptions& opt);

// argv without the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rlxt
