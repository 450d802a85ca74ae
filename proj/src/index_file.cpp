#include "rlxt/index_file.hpp"

#include <fstream>
#include <sstream>

#include "rlxt/errors.hpp"
#include "rlxt/serialize.hpp"

namespace rlxt {

std::string tag_name(std::uint32_t tag) {
  std::string s(4, ' ');
  for (int i = 0; i < 4; ++i) s[i] = static_cast<char>(tag >> (8 * i) & 0xff);
  return s;
}

void Sections::put(std::uint32_t tag, std::string bytes) {
  if (has(tag)) throw FormatError("duplicate section " + tag_name(tag));
  items_.emplace_back(tag, std::move(bytes));
}

std::string_view Sections::get(std::uint32_t tag) const {
  for (const auto& [t, b] : items_) {
    if (t == tag) return b;
  }
  throw FormatError("missing section " + tag_name(tag));
}

bool Sections::has(std::uint32_t tag) const {
  for (const auto& item : items_) {
    if (item.first == tag) return true;
  }
  return false;
}

Engine engine_of(const Index& index) {
  return std::holds_alternative<RIndex>(index) ? Engine::kRIndex : Engine::kSampled;
}

std::string encode_index(Engine engine, const Sections& sections) {
  Writer w;
  w.bytes(kIndexMagic);
  w.u8(kIndexVersion);
  w.u8(static_cast<std::uint8_t>(engine));
  const auto& items = sections.all();
  w.u32(static_cast<std::uint32_t>(items.size()));
  std::uint64_t offset = kIndexMagic.size() + 2 + 4 + items.size() * 20;
  for (const auto& [tag, bytes] : items) {
    w.u32(tag);
    w.u64(offset);
    w.u64(bytes.size());
    offset += bytes.size();
  }
  for (const auto& item : items) w.bytes(item.second);
  return w.take();
}

std::pair<Engine, Sections> decode_index(std::string_view bytes) {
  if (bytes.size() < kIndexMagic.size() || bytes.substr(0, kIndexMagic.size()) != kIndexMagic) {
    throw VersionError("not an index file (bad magic)");
  }
  Reader r(bytes.substr(kIndexMagic.size()));
  const std::uint8_t version = r.u8();
  if (version != kIndexVersion) {
    throw VersionError("unsupported index version " + std::to_string(version));
  }
  const std::uint8_t engine = r.u8();
  if (engine > static_cast<std::uint8_t>(Engine::kSampled)) {
    throw FormatError("unknown engine " + std::to_string(engine));
  }
  const std::uint32_t count = r.u32();
  if (count > r.remaining() / 20) throw FormatError("section table truncated");
  Sections sections;
  std::uint64_t expected = kIndexMagic.size() + 2 + 4 + std::uint64_t{count} * 20;
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint32_t tag = r.u32();
    const std::uint64_t offset = r.u64();
    const std::uint64_t length = r.u64();
    if (offset != expected || length > bytes.size() || offset > bytes.size() - length) {
      throw FormatError("section " + tag_name(tag) + " out of bounds");
    }
    sections.put(tag, std::string(bytes.substr(offset, length)));
    expected += length;
  }
  if (expected != bytes.size()) throw FormatError("trailing bytes after last section");
  return {static_cast<Engine>(engine), std::move(sections)};
}

std::string serialize_index(const Index& index) {
  Sections sections;
  std::visit([&](const auto& ix) { ix.save(sections); }, index);
  return encode_index(engine_of(index), sections);
}

Index deserialize_index(std::string_view bytes) {
  auto [engine, sections] = decode_index(bytes);
  if (engine == Engine::kRIndex) return RIndex::load(sections);
  return SampledIndex::load(sections);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error("read failed: " + path);
  return std::move(ss).str();
}

void save_index_file(const std::string& path, const Index& index) {
  const std::string bytes = serialize_index(index);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed: " + path);
}

Index load_index_file(const std::string& path) { return deserialize_index(read_file(path)); }

}  // namespace rlxt
