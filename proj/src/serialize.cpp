#include "rlxt/serialize.hpp"

#include "rlxt/errors.hpp"

namespace rlxt {

void Writer::u32(std::uint32_t v) {
  for (int k = 0; k < 4; ++k) u8(static_cast<std::uint8_t>(v >> (8 * k)));
}

void Writer::u64(std::uint64_t v) {
  for (int k = 0; k < 8; ++k) u8(static_cast<std::uint8_t>(v >> (8 * k)));
}

void Writer::varint(std::uint64_t v) {
  while (v >= 0x80) {
    u8(static_cast<std::uint8_t>(v | 0x80));
    v >>= 7;
  }
  u8(static_cast<std::uint8_t>(v));
}

std::uint8_t Reader::u8() {
  if (pos_ >= data_.size()) throw FormatError("unexpected end of index data");
  return static_cast<std::uint8_t>(data_[pos_++]);
}

std::uint32_t Reader::u32() {
  std::uint32_t v = 0;
  for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(u8()) << (8 * k);
  return v;
}

std::uint64_t Reader::u64() {
  std::uint64_t v = 0;
  for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(u8()) << (8 * k);
  return v;
}

std::uint64_t Reader::varint() {
  std::uint64_t v = 0;
  for (int shift = 0; shift < 64; shift += 7) {
    const std::uint8_t b = u8();
    v |= static_cast<std::uint64_t>(b & 0x7f) << shift;
    if ((b & 0x80) == 0) return v;
  }
  throw FormatError("varint too long");
}

std::string_view Reader::bytes(std::size_t len) {
  if (len > remaining()) throw FormatError("unexpected end of index data");
  auto s = data_.substr(pos_, len);
  pos_ += len;
  return s;
}

std::uint64_t Reader::length(std::size_t elem_size) {
  const std::uint64_t len = u64();
  if (len > remaining() / elem_size) throw FormatError("vector length exceeds payload");
  return len;
}

void Reader::expect_done() const {
  if (!done()) throw FormatError("trailing bytes in index section");
}

}  // namespace rlxt
