#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rlxt/bitvector.hpp"
#include "rlxt/rl_xbwt.hpp"
#include "rlxt/topology.hpp"
#include "rlxt/trie.hpp"
#include "rlxt/types.hpp"

namespace rlxt {

class Sections;

// Which branch of the climb produced phi(u).
enum class PhiCase : std::uint8_t {
  kSampled,   // u itself carries a sample
  kCase1,     // colored descendant, then level ancestor
  kCase2_1,   // covering ancestor is not red
  kCase2_2_1, // covering ancestor is red, child on the path has a type-2 sample
  kCase2_2_2, // covering ancestor is red, isomorphic child
};
inline constexpr std::size_t kPhiCaseCount = 5;
const char* phi_case_name(PhiCase c);

inline constexpr std::uint8_t kSampleType1 = 1;
inline constexpr std::uint8_t kSampleType2 = 2;

struct PhiSample {
  NodeId node = 0;
  NodeId value = 0;
  std::uint8_t flags = 0;

  friend bool operator==(const PhiSample&, const PhiSample&) = default;
};

struct Toehold {
  ColexRange range;
  NodeId first = 0;
};

struct SpaceReport {
  std::uint64_t topology = 0;
  std::uint64_t labels = 0;
  std::uint64_t colex = 0;
  std::uint64_t rl_xbwt = 0;
  std::uint64_t colors = 0;
  std::uint64_t samples = 0;
  std::uint64_t isc = 0;

  // Everything proportional to r: colors, samples, ISC tables, RL-XBWT and S'.
  std::uint64_t machinery() const { return rl_xbwt + colors + samples + isc; }
  std::uint64_t total() const { return topology + labels + colex + machinery(); }
};

// Count/locate index: RL-XBWT for backward search, BPS topology, colored
// nodes and phi samples for the successor climb. Immutable after build.
class RIndex {
 public:
  RIndex() : RIndex(LabeledTrie()) {}
  explicit RIndex(const LabeledTrie& trie);

  NodeId size() const { return n_; }
  std::size_t sigma() const { return alphabet_.sigma(); }
  const Alphabet& alphabet() const { return alphabet_; }
  const BpsTopology& topology() const { return topo_; }
  const RlXbwt& xbwt() const { return xbwt_; }
  const std::vector<Label>& labels() const { return labels_; }
  ColexRank colex_rank(NodeId u) const { return pre_to_colex_.at(u); }
  NodeId last_node() const { return last_; }

  bool is_red(NodeId u) const { return red_.access(u); }
  bool is_blue(NodeId u) const { return blue_.access(u); }
  const SparseBitVec& red() const { return red_; }
  const SparseBitVec& blue() const { return blue_; }
  const MarkSet& colored() const { return colored_; }
  std::optional<PhiSample> sample(NodeId u) const;
  std::vector<PhiSample> samples() const;

  std::optional<Toehold> toehold(std::span<const Label> pattern) const;
  NodeId phi(NodeId u, PhiCase* taken = nullptr) const;
  // Child rank at the co-lex successor of red node u matching its k-th child.
  std::uint32_t isc(NodeId u, std::uint32_t k) const;
  std::vector<NodeId> locate(std::span<const Label> pattern) const;
  std::uint64_t count(std::span<const Label> pattern) const;
  // Byte patterns; bytes outside the alphabet match nothing.
  std::vector<NodeId> locate(std::string_view pattern) const;
  std::uint64_t count(std::string_view pattern) const;

  LabeledTrie reconstruct() const;
  SpaceReport space() const;

  void save(Sections& out) const;
  static RIndex load(const Sections& in);

  // Replaces one stored phi value with a wrong node (fault injection for verify).
  void corrupt_phi_sample_for_testing();

  friend bool operator==(const RIndex& a, const RIndex& b);

 private:
  RIndex(int) {}
  void check(NodeId u) const;
  NodeId stored_phi(NodeId u) const;
  NodeId climb_case1(NodeId u) const;
  void build_derived();

  NodeId n_ = 1;
  Alphabet alphabet_;
  std::vector<Label> labels_;  // pre-order, index 0 unused
  BpsTopology topo_;
  std::vector<ColexRank> pre_to_colex_;
  NodeId last_ = 1;
  RlXbwt xbwt_;
  SparseBitVec red_;
  SparseBitVec blue_;
  MarkSet colored_;
  SparseBitVec sampled_;
  std::vector<NodeId> sample_values_;
  std::vector<std::uint8_t> sample_flags_;
  BitVec isc_bits_;
  BitVec isc_bounds_;
};

}  // namespace rlxt
