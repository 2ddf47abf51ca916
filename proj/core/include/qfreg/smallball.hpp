#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qfreg/laws.hpp"
#include "qfreg/log_scalar.hpp"
#include "qfreg/multilinear_polynomial.hpp"

namespace qfreg {

/// Exponent theta with sup_b P(|X - b| <= eps) <~ eps^theta for a
/// one-dimensional law: 1 for bounded densities, alpha ^ beta ^ 1 for Beta,
/// alpha ^ 1 for Gamma. Other kinds throw.
LogScalar anticoncentration_exponent(const DirichletVariable& v);

/// Number of quantile-anchored candidate centers b.
inline constexpr std::size_t kSmallBallCenters = 256;

struct SmallBallRow {
  double eps = 0.0;
  double best_center = 0.0;
  double probability = 0.0;
  double std_error = 0.0;
};

struct SmallBallTable {
  std::size_t M = 0;
  std::uint64_t seed = 0;
  std::vector<SmallBallRow> rows;
  /// Slope of log P against log eps over the rows with P > 0.
  double slope = 0.0;
  /// theta_d from the recursion at the law's anticoncentration exponent.
  LogScalar certified_theta;
  std::size_t degree = 0;
};

/// Monte Carlo concentration function of p(U) for U i.i.d. standardized
/// copies of `law`. The sup over b runs over the empirical quantiles at
/// levels k/256, k = 0..255.
SmallBallTable smallball_estimate(const MultilinearPolynomial& p, const DirichletVariable& law,
                                  const std::vector<double>& eps_grid, std::size_t M,
                                  std::uint64_t seed);

}  // namespace qfreg
