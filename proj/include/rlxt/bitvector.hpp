#pragma once

#include <concepts>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace rlxt {

class Writer;
class Reader;

// Static bitvector with a two-level rank directory (512-bit superblocks,
// per-word counts) and select by binary search over superblocks.
// Positions are 1-based: bit i lives at position i in 1..size().
class BitVec {
 public:
  BitVec() : BitVec(std::vector<bool>{}) {}
  explicit BitVec(const std::vector<bool>& bits);
  // "101101" -> bits at positions 1..6.
  static BitVec from_string(std::string_view bits);

  std::uint64_t size() const { return size_; }
  std::uint64_t ones() const { return ones_; }
  bool access(std::uint64_t i) const;
  // Ones in positions 1..i, 0 <= i <= size().
  std::uint64_t rank1(std::uint64_t i) const;
  std::uint64_t rank0(std::uint64_t i) const { return i - rank1(i); }
  // Position of the j-th one, 1 <= j <= ones().
  std::uint64_t select1(std::uint64_t j) const;
  std::uint64_t select0(std::uint64_t j) const;
  // First one at position >= i (1 <= i <= size()+1).
  std::optional<std::uint64_t> succ1(std::uint64_t i) const;
  // Last one at position <= i (0 <= i <= size()).
  std::optional<std::uint64_t> pred1(std::uint64_t i) const;

  // Raw little-endian words (bit p-1 of the sequence is bit (p-1)%64 of word (p-1)/64).
  const std::vector<std::uint64_t>& words() const { return words_; }
  std::uint64_t size_in_bits() const;

  void save(Writer& w) const;
  static BitVec load(Reader& r);

  friend bool operator==(const BitVec& a, const BitVec& b) {
    return a.size_ == b.size_ && a.words_ == b.words_;
  }

 private:
  BitVec(std::vector<std::uint64_t> words, std::uint64_t size);
  void build_directory();

  std::uint64_t size_ = 0;
  std::uint64_t ones_ = 0;
  std::vector<std::uint64_t> words_;       // one trailing zero word
  std::vector<std::uint64_t> super_;       // ones before each superblock
  std::vector<std::uint16_t> word_rank_;   // ones before each word, within its superblock
};

// Sorted set-bit positions over a universe 1..size(); space proportional to
// the number of ones.
class SparseBitVec {
 public:
  SparseBitVec() = default;
  // `positions` must be strictly increasing and within 1..universe.
  SparseBitVec(std::uint64_t universe, std::vector<std::uint32_t> positions);

  std::uint64_t size() const { return universe_; }
  std::uint64_t ones() const { return pos_.size(); }
  bool access(std::uint64_t i) const;
  std::uint64_t rank1(std::uint64_t i) const;
  std::uint64_t rank0(std::uint64_t i) const { return i - rank1(i); }
  std::uint64_t select1(std::uint64_t j) const;
  std::optional<std::uint64_t> succ1(std::uint64_t i) const;
  std::optional<std::uint64_t> pred1(std::uint64_t i) const;
  const std::vector<std::uint32_t>& positions() const { return pos_; }
  std::uint64_t size_in_bits() const { return 64 + 32 * pos_.size(); }

  void save(Writer& w) const;
  static SparseBitVec load(Reader& r);

  friend bool operator==(const SparseBitVec&, const SparseBitVec&) = default;

 private:
  std::uint64_t universe_ = 0;
  std::vector<std::uint32_t> pos_;
};

template <typename B>
concept RankSelectBits = requires(const B& b, std::uint64_t i) {
  { b.size() } -> std::convertible_to<std::uint64_t>;
  { b.ones() } -> std::convertible_to<std::uint64_t>;
  { b.access(i) } -> std::convertible_to<bool>;
  { b.rank1(i) } -> std::convertible_to<std::uint64_t>;
  { b.select1(i) } -> std::convertible_to<std::uint64_t>;
  { b.succ1(i) } -> std::same_as<std::optional<std::uint64_t>>;
  { b.pred1(i) } -> std::same_as<std::optional<std::uint64_t>>;
};

static_assert(RankSelectBits<BitVec>);
static_assert(RankSelectBits<SparseBitVec>);

}  // namespace rlxt
