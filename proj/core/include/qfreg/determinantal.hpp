#pragma once

#include <cstddef>
#include <vector>

#include "qfreg/spectral.hpp"
#include "qfreg/subsets.hpp"

namespace qfreg {

struct DeterminantalEntry {
  SubsetCode row = 0;
  SubsetCode col = 0;
  double value = 0.0;
};

/// Nonnegative operator indexed by pairs of q-subsets of {0, ..., n-1},
/// stored sparsely. Entries are kept sorted by (row, col) in colex order and
/// zero entries are never stored.
class DeterminantalOperator {
 public:
  DeterminantalOperator() = default;
  /// Validates subset sizes, ground-set range and nonnegativity; drops zeros
  /// and sorts. Duplicate (row, col) pairs are rejected.
  DeterminantalOperator(std::size_t q, std::size_t ground_set_size,
                        std::vector<DeterminantalEntry> entries);

  std::size_t q() const { return q_; }
  std::size_t ground_set_size() const { return n_; }
  const std::vector<DeterminantalEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  /// Total mass sigma(B).
  double sigma() const { return sigma_; }
  /// Subsets appearing as a row or column of a stored entry, colex order.
  const std::vector<SubsetCode>& universe() const { return universe_; }

  /// B restricted to rows and columns in `family` (sorted or not).
  DeterminantalOperator restrict(const std::vector<SubsetCode>& family) const;
  /// sigma of the restriction, without materializing it.
  double mass_on(const std::vector<SubsetCode>& family) const;

 private:
  std::size_t q_ = 0;
  std::size_t n_ = 0;
  std::vector<DeterminantalEntry> entries_;
  std::vector<SubsetCode> universe_;
  double sigma_ = 0.0;
};

struct Ell1Influences {
  std::vector<double> per_index;
  double max = 0.0;
};
/// upsilon_i(B) = sum over (I, J) with i in I u J of b_IJ, and their maximum.
Ell1Influences ell1_influences(const DeterminantalOperator& b);

/// b_IJ = det(A(I, J))^2 over all pairs of q-subsets. Guarded to n <= 14 and
/// q <= 5; parallel over rows with a deterministic merge.
DeterminantalOperator build_from_operator(const SymmetricOperator& op, std::size_t q);

struct InfluenceBoundReport {
  double upsilon = 0.0;
  double bound = 0.0;  // 2 q tau(A)
  bool holds = true;
};
/// upsilon(B) <= 2 q tau(A) for trace-normalized A.
InfluenceBoundReport influence_bound_check(const SymmetricOperator& op, std::size_t q,
                                           double tolerance = 1e-10);

}  // namespace qfreg
