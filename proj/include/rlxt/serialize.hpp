#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rlxt {

// Little-endian byte sink used by every structure's save().
class Writer {
 public:
  void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void varint(std::uint64_t v);
  void bytes(std::string_view s) { buf_.append(s); }

  template <typename T>
  void u32_vector(const std::vector<T>& v) {
    u64(v.size());
    for (auto x : v) u32(static_cast<std::uint32_t>(x));
  }
  void u64_vector(const std::vector<std::uint64_t>& v) {
    u64(v.size());
    for (auto x : v) u64(x);
  }
  void u8_vector(const std::vector<std::uint8_t>& v) {
    u64(v.size());
    for (auto x : v) u8(x);
  }

  const std::string& data() const { return buf_; }
  std::string take() { return std::move(buf_); }
  std::size_t size() const { return buf_.size(); }

 private:
  std::string buf_;
};

// Bounds-checked reader; throws FormatError on truncation.
class Reader {
 public:
  explicit Reader(std::string_view data) : data_(data) {}

  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  std::uint64_t varint();
  std::string_view bytes(std::size_t len);

  template <typename T>
  std::vector<T> u32_vector() {
    const std::uint64_t len = length(4);
    std::vector<T> v(len);
    for (auto& x : v) x = static_cast<T>(u32());
    return v;
  }
  std::vector<std::uint64_t> u64_vector() {
    const std::uint64_t len = length(8);
    std::vector<std::uint64_t> v(len);
    for (auto& x : v) x = u64();
    return v;
  }
  std::vector<std::uint8_t> u8_vector() {
    const std::uint64_t len = length(1);
    std::vector<std::uint8_t> v(len);
    for (auto& x : v) x = u8();
    return v;
  }

  std::size_t remaining() const { return data_.size() - pos_; }
  bool done() const { return pos_ == data_.size(); }
  void expect_done() const;

 private:
  std::uint64_t length(std::size_t elem_size);

  std::string_view data_;
  std::size_t pos_ = 0;
};

}  // namespace rlxt
