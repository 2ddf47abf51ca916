#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace qfreg {

/// A finite subset of {0, ..., 63} packed as a bitmask. Numeric order of the
/// codes of equal-size subsets is exactly colexicographic order.
using SubsetCode = std::uint64_t;

inline constexpr std::size_t kMaxGroundSet = 64;

SubsetCode encode_subset(std::span<const std::size_t> indices);
std::vector<std::size_t> decode_subset(SubsetCode code);
int subset_size(SubsetCode code);
inline bool subset_contains(SubsetCode code, std::size_t i) { return (code >> i) & 1u; }

/// All q-subsets of {0, ..., n-1} in colex order.
std::vector<SubsetCode> all_subsets(std::size_t n, std::size_t q);

std::uint64_t binomial(std::size_t n, std::size_t k);

}  // namespace qfreg
