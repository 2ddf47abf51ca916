#pragma once

#include <array>
#include <cstdint>

namespace qfreg::rng {

/// Philox4x32-10 block function (Salmon et al., SC'11). Stateless: maps a
/// 128-bit counter and 64-bit key to 128 pseudo-random bits.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key);
};

/// Stream tags separate independent uses of the same (seed, m, i) coordinates.
enum class StreamTag : std::uint32_t {
  sample = 1,
  bouleau_g = 2,
  bouleau_h = 3,
  split_marks = 4,
  operator_family = 5,
  auxiliary = 6,
};

/// A sequential stream over one counter-based substream.
///
/// The substream is identified by (seed, tag, a, b); draws advance a private
/// word counter. Two streams with different identifiers never share a block,
/// so results do not depend on evaluation order or thread count.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, StreamTag tag, std::uint32_t a, std::uint32_t b);

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1) with 53-bit resolution.
  double uniform();
  double normal();
  /// Gamma(shape, 1) by Marsaglia-Tsang; shape < 1 goes through
  /// Gamma(shape + 1) * U^(1/shape).
  double gamma(double shape);

 private:
  void refill();

  Philox4x32::Key key_;
  Philox4x32::Counter ctr_;
  Philox4x32::Counter buffer_{};
  int used_ = 4;
  bool have_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

/// Mixes several 64-bit words into one seed (splitmix64 finalizer chain).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0);

}  // namespace qfreg::rng
