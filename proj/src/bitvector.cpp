#include "rlxt/bitvector.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "rlxt/errors.hpp"
#include "rlxt/serialize.hpp"

namespace rlxt {

namespace {

constexpr std::uint64_t kWordsPerSuper = 8;

// Bit index of the k-th (1-based) set bit of x.
unsigned select_in_word(std::uint64_t x, std::uint64_t k) {
  for (std::uint64_t m = 1; m < k; ++m) x &= x - 1;
  return static_cast<unsigned>(std::countr_zero(x));
}

std::string bounds_msg(const char* op, std::uint64_t arg, std::uint64_t limit) {
  return std::string(op) + "(" + std::to_string(arg) + ") out of range (limit " +
         std::to_string(limit) + ")";
}

}  // namespace

BitVec::BitVec(const std::vector<bool>& bits) : size_(bits.size()) {
  words_.assign(size_ / 64 + 1, 0);
  for (std::uint64_t p = 0; p < size_; ++p) {
    if (bits[p]) words_[p >> 6] |= std::uint64_t{1} << (p & 63);
  }
  build_directory();
}

BitVec::BitVec(std::vector<std::uint64_t> words, std::uint64_t size)
    : size_(size), words_(std::move(words)) {
  words_.resize(size_ / 64 + 1, 0);
  if (size_ & 63) words_[size_ >> 6] &= (std::uint64_t{1} << (size_ & 63)) - 1;
  for (std::size_t w = size_ / 64 + 1; w < words_.size(); ++w) words_[w] = 0;
  build_directory();
}

BitVec BitVec::from_string(std::string_view bits) {
  std::vector<bool> v;
  v.reserve(bits.size());
  for (char ch : bits) {
    if (ch != '0' && ch != '1') throw FormatError("bit string may contain only 0 and 1");
    v.push_back(ch == '1');
  }
  return BitVec(v);
}

void BitVec::build_directory() {
  const std::size_t nwords = words_.size();
  super_.assign(nwords / kWordsPerSuper + 1, 0);
  word_rank_.assign(nwords, 0);
  std::uint64_t total = 0;
  std::uint64_t in_super = 0;
  for (std::size_t w = 0; w < nwords; ++w) {
    if (w % kWordsPerSuper == 0) {
      super_[w / kWordsPerSuper] = total;
      in_super = 0;
    }
    word_rank_[w] = static_cast<std::uint16_t>(in_super);
    const auto c = static_cast<std::uint64_t>(std::popcount(words_[w]));
    total += c;
    in_super += c;
  }
  for (std::size_t s = (nwords + kWordsPerSuper - 1) / kWordsPerSuper; s < super_.size(); ++s) {
    super_[s] = total;
  }
  ones_ = total;
}

bool BitVec::access(std::uint64_t i) const {
  if (i == 0 || i > size_) throw BoundsError(bounds_msg("access", i, size_));
  const std::uint64_t p = i - 1;
  return (words_[p >> 6] >> (p & 63)) & 1;
}

std::uint64_t BitVec::rank1(std::uint64_t i) const {
  if (i > size_) throw BoundsError(bounds_msg("rank1", i, size_));
  const std::uint64_t w = i >> 6;
  std::uint64_t r = super_[w / kWordsPerSuper] + word_rank_[w];
  if (i & 63) r += std::popcount(words_[w] & ((std::uint64_t{1} << (i & 63)) - 1));
  return r;
}

std::uint64_t BitVec::select1(std::uint64_t j) const {
  if (j == 0 || j > ones_) throw BoundsError(bounds_msg("select1", j, ones_));
  // Last superblock whose preceding count is < j.
  const auto it = std::lower_bound(super_.begin(), super_.end(), j);
  std::uint64_t s = static_cast<std::uint64_t>(it - super_.begin()) - 1;
  std::uint64_t need = j - super_[s];
  for (std::uint64_t w = s * kWordsPerSuper;; ++w) {
    const auto c = static_cast<std::uint64_t>(std::popcount(words_[w]));
    if (c >= need) return w * 64 + select_in_word(words_[w], need) + 1;
    need -= c;
  }
}

std::uint64_t BitVec::select0(std::uint64_t j) const {
  const std::uint64_t zeros = size_ - ones_;
  if (j == 0 || j > zeros) throw BoundsError(bounds_msg("select0", j, zeros));
  std::uint64_t lo = 0;
  std::uint64_t hi = super_.size() - 1;
  // Largest superblock s with zeros-before(s) < j.
  while (lo < hi) {
    const std::uint64_t mid = (lo + hi + 1) / 2;
    const std::uint64_t zeros_before = mid * 512 - super_[mid];
    if (mid * 512 <= size_ && zeros_before < j) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  std::uint64_t need = j - (lo * 512 - super_[lo]);
  for (std::uint64_t w = lo * kWordsPerSuper;; ++w) {
    const std::uint64_t inv = ~words_[w];
    const auto c = static_cast<std::uint64_t>(std::popcount(inv));
    if (c >= need) return w * 64 + select_in_word(inv, need) + 1;
    need -= c;
  }
}

std::optional<std::uint64_t> BitVec::succ1(std::uint64_t i) const {
  if (i == 0 || i > size_ + 1) throw BoundsError(bounds_msg("succ1", i, size_ + 1));
  const std::uint64_t r = rank1(i - 1);
  if (r == ones_) return std::nullopt;
  return select1(r + 1);
}

std::optional<std::uint64_t> BitVec::pred1(std::uint64_t i) const {
  const std::uint64_t r = rank1(i);
  if (r == 0) return std::nullopt;
  return select1(r);
}

std::uint64_t BitVec::size_in_bits() const {
  return 64 * (words_.size() + super_.size()) + 16 * word_rank_.size() + 128;
}

void BitVec::save(Writer& w) const {
  w.u64(size_);
  const std::size_t nwords = (size_ + 63) / 64;
  for (std::size_t k = 0; k < nwords; ++k) w.u64(words_[k]);
}

BitVec BitVec::load(Reader& r) {
  const std::uint64_t size = r.u64();
  const std::uint64_t nwords = (size + 63) / 64;
  if (nwords > r.remaining() / 8) throw FormatError("bitvector length exceeds payload");
  std::vector<std::uint64_t> words(nwords);
  for (auto& x : words) x = r.u64();
  return BitVec(std::move(words), size);
}

SparseBitVec::SparseBitVec(std::uint64_t universe, std::vector<std::uint32_t> positions)
    : universe_(universe), pos_(std::move(positions)) {
  for (std::size_t k = 0; k < pos_.size(); ++k) {
    if (pos_[k] == 0 || pos_[k] > universe_ || (k > 0 && pos_[k - 1] >= pos_[k])) {
      throw FormatError("sparse bitvector positions must be increasing within the universe");
    }
  }
}

bool SparseBitVec::access(std::uint64_t i) const {
  if (i == 0 || i > universe_) throw BoundsError(bounds_msg("access", i, universe_));
  return std::binary_search(pos_.begin(), pos_.end(), i);
}

std::uint64_t SparseBitVec::rank1(std::uint64_t i) const {
  if (i > universe_) throw BoundsError(bounds_msg("rank1", i, universe_));
  return static_cast<std::uint64_t>(std::upper_bound(pos_.begin(), pos_.end(), i) - pos_.begin());
}

std::uint64_t SparseBitVec::select1(std::uint64_t j) const {
  if (j == 0 || j > pos_.size()) throw BoundsError(bounds_msg("select1", j, pos_.size()));
  return pos_[j - 1];
}

std::optional<std::uint64_t> SparseBitVec::succ1(std::uint64_t i) const {
  if (i == 0 || i > universe_ + 1) throw BoundsError(bounds_msg("succ1", i, universe_ + 1));
  const auto it = std::lower_bound(pos_.begin(), pos_.end(), i);
  if (it == pos_.end()) return std::nullopt;
  return *it;
}

std::optional<std::uint64_t> SparseBitVec::pred1(std::uint64_t i) const {
  if (i > universe_) throw BoundsError(bounds_msg("pred1", i, universe_));
  const auto it = std::upper_bound(pos_.begin(), pos_.end(), i);
  if (it == pos_.begin()) return std::nullopt;
  return *(it - 1);
}

void SparseBitVec::save(Writer& w) const {
  w.u64(universe_);
  w.u32_vector(pos_);
}

SparseBitVec SparseBitVec::load(Reader& r) {
  const std::uint64_t universe = r.u64();
  auto pos = r.u32_vector<std::uint32_t>();
  return SparseBitVec(universe, std::move(pos));
}

}  // namespace rlxt
