#include "rlxt/wavelet.hpp"

#include <bit>
#include <string>

#include "rlxt/errors.hpp"
#include "rlxt/serialize.hpp"

namespace rlxt {

namespace {

std::size_t level_count(std::uint32_t sigma) {
  return sigma <= 1 ? 1 : static_cast<std::size_t>(std::bit_width(sigma - 1));
}

}  // namespace

WaveletSeq::WaveletSeq(const std::vector<std::uint32_t>& seq, std::uint32_t sigma)
    : size_(seq.size()), sigma_(sigma) {
  if (sigma == 0) throw DomainError("wavelet alphabet must be non-empty");
  for (auto c : seq) {
    if (c >= sigma) throw DomainError("symbol " + std::to_string(c) + " outside alphabet");
  }
  const std::size_t nlevels = level_count(sigma);
  std::vector<std::uint32_t> cur = seq;
  std::vector<std::uint32_t> next(cur.size());
  std::vector<bool> bits(cur.size());
  for (std::size_t l = 0; l < nlevels; ++l) {
    const unsigned shift = static_cast<unsigned>(nlevels - 1 - l);
    std::size_t z = 0;
    for (std::size_t k = 0; k < cur.size(); ++k) {
      bits[k] = (cur[k] >> shift) & 1u;
      if (!bits[k]) ++z;
    }
    levels_.emplace_back(bits);
    zeros_.push_back(z);
    std::size_t lo = 0;
    std::size_t hi = z;
    for (std::size_t k = 0; k < cur.size(); ++k) {
      if (bits[k]) {
        next[hi++] = cur[k];
      } else {
        next[lo++] = cur[k];
      }
    }
    cur.swap(next);
  }
}

WaveletSeq::WaveletSeq(std::uint64_t size, std::uint32_t sigma, std::vector<BitVec> levels)
    : size_(size), sigma_(sigma), levels_(std::move(levels)) {
  for (const auto& bv : levels_) zeros_.push_back(bv.size() - bv.ones());
}

void WaveletSeq::check_symbol(std::uint32_t c) const {
  if (c >= sigma_) throw BoundsError("symbol " + std::to_string(c) + " outside alphabet");
}

void WaveletSeq::check_prefix(std::uint64_t i) const {
  if (i > size_) throw BoundsError("prefix " + std::to_string(i) + " exceeds length");
}

std::uint32_t WaveletSeq::access(std::uint64_t i) const {
  if (i == 0 || i > size_) throw BoundsError("position " + std::to_string(i) + " out of range");
  std::uint64_t p = i - 1;
  std::uint32_t c = 0;
  for (std::size_t l = 0; l < levels_.size(); ++l) {
    const auto& bv = levels_[l];
    if (bv.access(p + 1)) {
      c = (c << 1) | 1u;
      p = zeros_[l] + bv.rank1(p);
    } else {
      c <<= 1;
      p = bv.rank0(p);
    }
  }
  return c;
}

std::uint64_t WaveletSeq::rank(std::uint32_t c, std::uint64_t i) const {
  check_symbol(c);
  check_prefix(i);
  std::uint64_t s = 0;
  std::uint64_t e = i;
  for (std::size_t l = 0; l < levels_.size(); ++l) {
    const auto& bv = levels_[l];
    if (bit(c, l)) {
      s = zeros_[l] + bv.rank1(s);
      e = zeros_[l] + bv.rank1(e);
    } else {
      s = bv.rank0(s);
      e = bv.rank0(e);
    }
  }
  return e - s;
}

std::uint64_t WaveletSeq::select(std::uint32_t c, std::uint64_t j) const {
  check_symbol(c);
  if (j == 0 || j > rank(c, size_)) {
    throw BoundsError("select(" + std::to_string(j) + ") exceeds occurrences of symbol " +
                      std::to_string(c));
  }
  std::uint64_t s = 0;
  for (std::size_t l = 0; l < levels_.size(); ++l) {
    s = bit(c, l) ? zeros_[l] + levels_[l].rank1(s) : levels_[l].rank0(s);
  }
  std::uint64_t q = s + j - 1;  // 0-based index in the bottom arrangement
  for (std::size_t l = levels_.size(); l-- > 0;) {
    q = bit(c, l) ? levels_[l].select1(q - zeros_[l] + 1) - 1 : levels_[l].select0(q + 1) - 1;
  }
  return q + 1;
}

std::uint64_t WaveletSeq::rank_less(std::uint32_t c, std::uint64_t i) const {
  check_prefix(i);
  if (c >= sigma_) return i;
  std::uint64_t s = 0;
  std::uint64_t e = i;
  std::uint64_t less = 0;
  for (std::size_t l = 0; l < levels_.size(); ++l) {
    const auto& bv = levels_[l];
    if (bit(c, l)) {
      less += bv.rank0(e) - bv.rank0(s);
      s = zeros_[l] + bv.rank1(s);
      e = zeros_[l] + bv.rank1(e);
    } else {
      s = bv.rank0(s);
      e = bv.rank0(e);
    }
  }
  return less;
}

std::uint64_t WaveletSeq::range_rank(std::uint32_t a, std::uint32_t b, std::uint64_t i) const {
  if (a > b) throw BoundsError("empty symbol range");
  check_symbol(b);
  return rank_less(b + 1, i) - rank_less(a, i);
}

std::uint64_t WaveletSeq::size_in_bits() const {
  std::uint64_t bits = 128 + 64 * zeros_.size();
  for (const auto& bv : levels_) bits += bv.size_in_bits();
  return bits;
}

void WaveletSeq::save(Writer& w) const {
  w.u64(size_);
  w.u32(sigma_);
  for (const auto& bv : levels_) bv.save(w);
}

WaveletSeq WaveletSeq::load(Reader& r) {
  const std::uint64_t size = r.u64();
  const std::uint32_t sigma = r.u32();
  if (sigma == 0) throw FormatError("wavelet alphabet must be non-empty");
  std::vector<BitVec> levels;
  for (std::size_t l = 0; l < level_count(sigma); ++l) {
    levels.push_back(BitVec::load(r));
    if (levels.back().size() != size) throw FormatError("wavelet level length mismatch");
  }
  return WaveletSeq(size, sigma, std::move(levels));
}

}  // namespace rlxt
