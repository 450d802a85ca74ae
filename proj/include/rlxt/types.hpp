#pragma once

#include <cstdint>
#include <vector>

namespace rlxt {

// Pre-order node identifier, 1-based; node 1 is the root.
using NodeId = std::uint32_t;
// Co-lexicographic rank, 1-based.
using ColexRank = std::uint32_t;
// Dense label code. Code 0 is the root sentinel '#', codes 1..sigma-1 label edges.
using Label = std::uint8_t;

using LabelString = std::vector<Label>;

inline constexpr NodeId kNoNode = 0;
inline constexpr Label kSentinel = 0;

}  // namespace rlxt
