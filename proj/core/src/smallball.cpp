#include "qfreg/smallball.hpp"

#include <algorithm>
#include <cmath>

#include "qfreg/error.hpp"
#include "qfreg/parallel.hpp"

namespace qfreg {

LogScalar anticoncentration_exponent(const DirichletVariable& v) {
  switch (v.kind()) {
    case LawKind::gaussian: return LogScalar::one();
    case LawKind::beta:
      return LogScalar::from_double(std::min({1.0, v.alpha(), v.beta_param()}));
    case LawKind::gamma: return LogScalar::from_double(std::min(1.0, v.alpha()));
    case LawKind::phi_gaussian:
      if (v.map().name == "gaussian_cdf") return LogScalar::one();
      break;
    case LawKind::chaos: break;
  }
  throw InputError("no anticoncentration exponent known for " + v.name());
}

SmallBallTable smallball_estimate(const MultilinearPolynomial& p, const DirichletVariable& law,
                                  const std::vector<double>& eps_grid, std::size_t M,
                                  std::uint64_t seed) {
  if (M < 2) throw InputError("smallball_estimate needs M >= 2");
  if (eps_grid.empty()) throw InputError("empty eps grid");
  for (double e : eps_grid) {
    if (!(e > 0.0)) throw InputError("eps values must be positive");
  }
  const std::size_t n = p.variable_count();
  const double mu = law.mean();
  const double sd = std::sqrt(law.variance());

  std::vector<double> values(M);
  parallel_chunks(M, 4096, [&](std::size_t, std::size_t begin, std::size_t end) {
    std::vector<double> u(n);
    for (std::size_t m = begin; m < end; ++m) {
      for (std::size_t i = 0; i < n; ++i) u[i] = (draw_one(law, seed, m, i).x - mu) / sd;
      values[m] = p.evaluate(u);
    }
  });
  std::sort(values.begin(), values.end());

  std::vector<double> centers;
  for (std::size_t k = 0; k < kSmallBallCenters; ++k) {
    centers.push_back(values[k * M / kSmallBallCenters]);
  }
  centers.erase(std::unique(centers.begin(), centers.end()), centers.end());

  SmallBallTable table;
  table.M = M;
  table.seed = seed;
  table.degree = p.degree();
  const double mf = static_cast<double>(M);
  for (double eps : eps_grid) {
    SmallBallRow row;
    row.eps = eps;
    std::size_t best = 0;
    for (double b : centers) {
      const auto lo = std::lower_bound(values.begin(), values.end(), b - eps);
      const auto hi = std::upper_bound(values.begin(), values.end(), b + eps);
      const auto count = static_cast<std::size_t>(hi - lo);
      if (count > best) {
        best = count;
        row.best_center = b;
      }
    }
    row.probability = static_cast<double>(best) / mf;
    row.std_error = std::sqrt(row.probability * (1.0 - row.probability) / mf);
    table.rows.push_back(row);
  }

  std::vector<double> xs, ys;
  for (const auto& r : table.rows) {
    if (r.probability > 0.0) {
      xs.push_back(r.eps);
      ys.push_back(r.probability);
    }
  }
  if (xs.size() >= 2) table.slope = loglog_slope(xs, ys).slope;
  table.certified_theta = table.degree == 0
                              ? LogScalar::infinity()
                              : theta_recursion(anticoncentration_exponent(law), table.degree);
  return table;
}

}  // namespace qfreg
