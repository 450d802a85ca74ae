#pragma once

#include <cstdint>
#include <vector>

#include "rlxt/bitvector.hpp"

namespace rlxt {

// Wavelet matrix over symbols 0..sigma-1. Positions are 1-based.
class WaveletSeq {
 public:
  WaveletSeq() : WaveletSeq(std::vector<std::uint32_t>{}, 1) {}
  WaveletSeq(const std::vector<std::uint32_t>& seq, std::uint32_t sigma);

  std::uint64_t size() const { return size_; }
  std::uint32_t sigma() const { return sigma_; }

  std::uint32_t access(std::uint64_t i) const;
  // Occurrences of c in positions 1..i.
  std::uint64_t rank(std::uint32_t c, std::uint64_t i) const;
  // Position of the j-th occurrence of c.
  std::uint64_t select(std::uint32_t c, std::uint64_t j) const;
  // Occurrences of symbols in [a, b] in positions 1..i.
  std::uint64_t range_rank(std::uint32_t a, std::uint32_t b, std::uint64_t i) const;
  // Occurrences of symbols < c in positions 1..i.
  std::uint64_t rank_less(std::uint32_t c, std::uint64_t i) const;

  std::uint64_t size_in_bits() const;
  void save(Writer& w) const;
  static WaveletSeq load(Reader& r);

  friend bool operator==(const WaveletSeq& a, const WaveletSeq& b) {
    return a.size_ == b.size_ && a.sigma_ == b.sigma_ && a.levels_ == b.levels_;
  }

 private:
  WaveletSeq(std::uint64_t size, std::uint32_t sigma, std::vector<BitVec> levels);
  void check_symbol(std::uint32_t c) const;
  void check_prefix(std::uint64_t i) const;
  unsigned bit(std::uint32_t c, std::size_t level) const {
    return (c >> (levels_.size() - 1 - level)) & 1u;
  }

  std::uint64_t size_ = 0;
  std::uint32_t sigma_ = 1;
  std::vector<BitVec> levels_;
  std::vector<std::uint64_t> zeros_;
};

}  // namespace rlxt
