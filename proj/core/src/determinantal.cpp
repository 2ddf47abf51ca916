#include "qfreg/determinantal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qfreg/error.hpp"
#include "qfreg/parallel.hpp"

namespace qfreg {

DeterminantalOperator::DeterminantalOperator(std::size_t q, std::size_t ground_set_size,
                                             std::vector<DeterminantalEntry> entries)
    : q_(q), n_(ground_set_size) {
  if (n_ > kMaxGroundSet) {
    throw InputError("ground set larger than " + std::to_string(kMaxGroundSet));
  }
  const SubsetCode allowed = n_ == 64 ? ~SubsetCode{0} : ((SubsetCode{1} << n_) - 1);
  entries_.reserve(entries.size());
  for (const auto& e : entries) {
    if (!std::isfinite(e.value) || e.value < 0.0) {
      throw InputError("determinantal entries must be finite and nonnegative");
    }
    if (static_cast<std::size_t>(subset_size(e.row)) != q ||
        static_cast<std::size_t>(subset_size(e.col)) != q) {
      throw InputError("determinantal entry indexed by a subset of the wrong size");
    }
    if ((e.row & ~allowed) || (e.col & ~allowed)) {
      throw InputError("determinantal entry outside the ground set");
    }
    if (e.value > 0.0) entries_.push_back(e);
  }
  std::sort(entries_.begin(), entries_.end(), [](const auto& x, const auto& y) {
    return x.row != y.row ? x.row < y.row : x.col < y.col;
  });
  for (std::size_t k = 1; k < entries_.size(); ++k) {
    if (entries_[k].row == entries_[k - 1].row && entries_[k].col == entries_[k - 1].col) {
      throw InputError("duplicate determinantal entry");
    }
  }
  for (const auto& e : entries_) {
    sigma_ += e.value;
    universe_.push_back(e.row);
    universe_.push_back(e.col);
  }
  std::sort(universe_.begin(), universe_.end());
  universe_.erase(std::unique(universe_.begin(), universe_.end()), universe_.end());
}

namespace {

std::vector<SubsetCode> sorted_copy(const std::vector<SubsetCode>& family) {
  std::vector<SubsetCode> s = family;
  std::sort(s.begin(), s.end());
  return s;
}

bool member(const std::vector<SubsetCode>& sorted, SubsetCode c) {
  return std::binary_search(sorted.begin(), sorted.end(), c);
}

}  // namespace

DeterminantalOperator DeterminantalOperator::restrict(
    const std::vector<SubsetCode>& family) const {
  const auto fam = sorted_copy(family);
  std::vector<DeterminantalEntry> kept;
  for (const auto& e : entries_) {
    if (member(fam, e.row) && member(fam, e.col)) kept.push_back(e);
  }
  return DeterminantalOperator(q_, n_, std::move(kept));
}

double DeterminantalOperator::mass_on(const std::vector<SubsetCode>& family) const {
  const auto fam = sorted_copy(family);
  double total = 0.0;
  for (const auto& e : entries_) {
    if (member(fam, e.row) && member(fam, e.col)) total += e.value;
  }
  return total;
}

Ell1Influences ell1_influences(const DeterminantalOperator& b) {
  Ell1Influences out;
  out.per_index.assign(b.ground_set_size(), 0.0);
  for (const auto& e : b.entries()) {
    SubsetCode u = e.row | e.col;
    while (u) {
      const auto i = static_cast<std::size_t>(__builtin_ctzll(u));
      out.per_index[i] += e.value;
      u &= u - 1;
    }
  }
  for (double v : out.per_index) out.max = std::max(out.max, v);
  return out;
}

DeterminantalOperator build_from_operator(const SymmetricOperator& op, std::size_t q) {
  const std::size_t n = op.dimension();
  if (n > 14 || q > 5) {
    throw SizeGuardError("build_from_operator is limited to n <= 14 and q <= 5 (got n=" +
                         std::to_string(n) + ", q=" + std::to_string(q) + ")");
  }
  if (q == 0 || q > n) throw InputError("q must lie in [1, n]");
  const auto subsets = all_subsets(n, q);
  std::vector<std::vector<std::size_t>> decoded;
  decoded.reserve(subsets.size());
  for (SubsetCode s : subsets) decoded.push_back(decode_subset(s));

  const std::size_t count = subsets.size();
  std::vector<std::vector<double>> dets(count);
  parallel_chunks(count, 16, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      dets[r].resize(count);
      for (std::size_t c = 0; c < count; ++c) {
        dets[r][c] = minor_determinant(op.entries(), decoded[r], decoded[c]);
      }
    }
  });

  std::vector<DeterminantalEntry> entries;
  for (std::size_t r = 0; r < count; ++r) {
    for (std::size_t c = 0; c < count; ++c) {
      const double b = dets[r][c] * dets[r][c];
      const double bt = dets[c][r] * dets[c][r];
      if (std::abs(b - bt) > 1e-12 * std::max(1.0, std::max(b, bt))) {
        throw Error("squared minors are not symmetric in (I, J)");
      }
      if (b != 0.0) entries.push_back({subsets[r], subsets[c], b});
    }
  }
  return DeterminantalOperator(q, n, std::move(entries));
}

InfluenceBoundReport influence_bound_check(const SymmetricOperator& op, std::size_t q,
                                           double tolerance) {
  const double tr = op.frobenius_sq();
  if (std::abs(tr - 1.0) > 1e-10) {
    throw InputError("influence_bound_check needs tr A^2 = 1, got " + std::to_string(tr));
  }
  InfluenceBoundReport r;
  r.upsilon = ell1_influences(build_from_operator(op, q)).max;
  r.bound = 2.0 * static_cast<double>(q) * influences(op).max;
  r.holds = r.upsilon <= r.bound + tolerance;
  return r;
}

}  // namespace qfreg
