#include "qfreg/subsets.hpp"

#include <algorithm>
#include <bit>

#include "qfreg/error.hpp"

namespace qfreg {

SubsetCode encode_subset(std::span<const std::size_t> indices) {
  SubsetCode code = 0;
  for (std::size_t i : indices) {
    if (i >= kMaxGroundSet) throw InputError("subset index " + std::to_string(i) + " exceeds 63");
    const SubsetCode bit = SubsetCode{1} << i;
    if (code & bit) throw InputError("subset lists index " + std::to_string(i) + " twice");
    code |= bit;
  }
  return code;
}

std::vector<std::size_t> decode_subset(SubsetCode code) {
  std::vector<std::size_t> out;
  out.reserve(static_cast<std::size_t>(std::popcount(code)));
  while (code) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(code)));
    code &= code - 1;
  }
  return out;
}

int subset_size(SubsetCode code) { return std::popcount(code); }

std::vector<SubsetCode> all_subsets(std::size_t n, std::size_t q) {
  if (n > kMaxGroundSet) throw SizeGuardError("ground set larger than 64");
  std::vector<SubsetCode> out;
  if (q > n) return out;
  if (q == 0) return {SubsetCode{0}};
  out.reserve(binomial(n, q));
  SubsetCode v = (q == 64) ? ~SubsetCode{0} : ((SubsetCode{1} << q) - 1);
  const SubsetCode limit_bit = (n == 64) ? 0 : (SubsetCode{1} << n);
  for (;;) {
    out.push_back(v);
    // Gosper's hack: next integer with the same popcount.
    const SubsetCode c = v & (~v + 1);
    const SubsetCode r = v + c;
    if (r == 0) break;
    v = (((r ^ v) >> 2) / c) | r;
    if (limit_bit != 0 && v >= limit_bit) break;
  }
  return out;
}

std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace qfreg
