#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "rlxt/baseline.hpp"
#include "rlxt/rindex.hpp"

namespace rlxt {

inline constexpr std::string_view kIndexMagic = "RLXT1";
inline constexpr std::uint8_t kIndexVersion = 1;

enum class Engine : std::uint8_t { kRIndex = 0, kSampled = 1 };

constexpr std::uint32_t section_tag(const char (&s)[5]) {
  return static_cast<std::uint32_t>(static_cast<unsigned char>(s[0])) |
         static_cast<std::uint32_t>(static_cast<unsigned char>(s[1])) << 8 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(s[2])) << 16 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(s[3])) << 24;
}
std::string tag_name(std::uint32_t tag);

// Ordered list of tagged byte payloads.
class Sections {
 public:
  void put(std::uint32_t tag, std::string bytes);
  // Throws FormatError when absent.
  std::string_view get(std::uint32_t tag) const;
  bool has(std::uint32_t tag) const;
  const std::vector<std::pair<std::uint32_t, std::string>>& all() const { return items_; }

 private:
  std::vector<std::pair<std::uint32_t, std::string>> items_;
};

using Index = std::variant<RIndex, SampledIndex>;

Engine engine_of(const Index& index);

// File layout: magic, version byte, engine byte, u32 section count, then
// {u32 tag, u64 offset, u64 length} per section, then the payloads.
std::string encode_index(Engine engine, const Sections& sections);
std::pair<Engine, Sections> decode_index(std::string_view bytes);

std::string serialize_index(const Index& index);
Index deserialize_index(std::string_view bytes);

void save_index_file(const std::string& path, const Index& index);
Index load_index_file(const std::string& path);
std::string read_file(const std::string& path);

}  // namespace rlxt
