#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "qfreg/log_scalar.hpp"

namespace qfreg {

/// Sparse multilinear polynomial p(x) = sum_I a_I prod_{i in I} x_i.
class MultilinearPolynomial {
 public:
  using Monomial = std::vector<std::size_t>;
  using Term = std::pair<Monomial, double>;

  MultilinearPolynomial() = default;
  /// Index lists are sorted; repeated indices inside a monomial or indices
  /// >= variable_count throw InputError. Repeated monomials are summed and
  /// zero coefficients dropped.
  MultilinearPolynomial(std::size_t variable_count, const std::vector<Term>& terms);

  std::size_t variable_count() const { return n_; }
  std::size_t degree() const;
  const std::map<Monomial, double>& coefficients() const { return coeffs_; }
  double constant() const;

  /// Throws InputError when x has fewer than variable_count entries.
  double evaluate(std::span<const double> x) const;
  /// Partial derivatives at x.
  std::vector<double> gradient(std::span<const double> x) const;
  /// sum over nonempty I of a_I^2.
  double variance() const;

 private:
  std::size_t n_ = 0;
  std::map<Monomial, double> coeffs_;
};

/// p = x_i S_i + R_i with neither S_i nor R_i depending on x_i.
struct InfluenceDecomposition {
  MultilinearPolynomial s;
  MultilinearPolynomial r;
};
InfluenceDecomposition partial_influence_poly(const MultilinearPolynomial& p, std::size_t i);

enum class ThetaMode {
  /// theta_1 = theta, theta_{k+1} = min(1/(8(k+1)), theta_k / 2).
  recursion,
  /// (theta ^ 1/(8d)) 2^{-d}.
  closed_form,
  /// 1/d, for log-concave inputs.
  log_concave,
};

LogScalar theta_recursion(LogScalar theta, std::size_t d, ThetaMode mode = ThetaMode::recursion);

}  // namespace qfreg
