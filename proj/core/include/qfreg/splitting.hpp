#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qfreg/determinantal.hpp"
#include "qfreg/error.hpp"

namespace qfreg {

enum class SplitMode {
  /// Independent fair Bernoulli marks per subset, retried up to max_attempts.
  sampling,
  /// Conditional expectations on E[T T^], fixing marks greedily in colex order.
  greedy,
};

struct SplitOptions {
  std::uint64_t seed = 0;
  std::size_t max_attempts = 1024;
  SplitMode mode = SplitMode::sampling;
};

struct SplitResult {
  std::vector<SubsetCode> selected;    // L
  std::vector<SubsetCode> complement;  // universe minus L
  double mass_selected = 0.0;
  double mass_complement = 0.0;
  double sigma = 0.0;
  double upsilon = 0.0;
  /// (sigma - upsilon) / 16.
  double threshold = 0.0;
  std::size_t attempts = 0;
};

/// Thrown when no attempt reaches the threshold; carries the attempt whose
/// smaller side was largest.
class SplitFailure : public Error {
 public:
  SplitFailure(const std::string& what, SplitResult best)
      : Error(what), best_(std::move(best)) {}
  const SplitResult& best() const { return best_; }

 private:
  SplitResult best_;
};

/// Partitions the universe of `b` so that both restrictions keep mass at
/// least (sigma - upsilon)/16, up to 1e-12. Requires sigma(b) > 0.
SplitResult split_once(const DeterminantalOperator& b, const SplitOptions& options = {});

/// Value of E[T T^] when each subset in `universe` is selected with the
/// given probability (0, 1/2 or 1). Exposed for tests.
double expected_split_product(const DeterminantalOperator& b,
                              const std::vector<SubsetCode>& universe,
                              const std::vector<double>& probabilities);

struct SplitBlock {
  std::vector<SubsetCode> family;
  double mass = 0.0;
};

enum class StopReason { threshold, depth_target, depth_limit };
std::string to_string(StopReason r);

struct SplitTree {
  /// levels[k] holds 2^k pairwise-disjoint blocks.
  std::vector<std::vector<SplitBlock>> levels;
  std::size_t kappa = 0;
  StopReason stop_reason = StopReason::threshold;
  double sigma = 0.0;
  double upsilon = 0.0;
  /// Largest k with upsilon <= sigma 2^{-5k-1}, or -1 when none.
  int predicted_depth = -1;
};

struct IteratedSplitOptions {
  std::uint64_t seed = 0;
  /// Split until this depth; unset runs until the stop rule fires.
  std::optional<std::size_t> target_kappa;
  std::size_t depth_limit = 16;
  std::size_t max_attempts = 1024;
  SplitMode mode = SplitMode::sampling;
};

/// Starting from the whole universe, splits every block of a level until
/// upsilon(B) > sigma(block)/2 for some block, the target depth is reached or
/// depth_limit is hit. Block l of level k yields blocks l and l + 2^k.
SplitTree iterated_split(const DeterminantalOperator& b, const IteratedSplitOptions& options = {});

}  // namespace qfreg
