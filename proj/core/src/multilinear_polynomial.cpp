#include "qfreg/multilinear_polynomial.hpp"

#include <algorithm>
#include <string>

#include "qfreg/error.hpp"

namespace qfreg {

MultilinearPolynomial::MultilinearPolynomial(std::size_t variable_count,
                                             const std::vector<Term>& terms)
    : n_(variable_count) {
  for (const auto& [monomial, coeff] : terms) {
    Monomial m = monomial;
    std::sort(m.begin(), m.end());
    if (std::adjacent_find(m.begin(), m.end()) != m.end()) {
      throw InputError("repeated index in a multilinear monomial");
    }
    if (!m.empty() && m.back() >= n_) {
      throw InputError("monomial index " + std::to_string(m.back()) + " exceeds variable count " +
                       std::to_string(n_));
    }
    coeffs_[m] += coeff;
  }
  std::erase_if(coeffs_, [](const auto& kv) { return kv.second == 0.0; });
}

std::size_t MultilinearPolynomial::degree() const {
  std::size_t d = 0;
  for (const auto& [m, a] : coeffs_) d = std::max(d, m.size());
  return d;
}

double MultilinearPolynomial::constant() const {
  auto it = coeffs_.find(Monomial{});
  return it == coeffs_.end() ? 0.0 : it->second;
}

double MultilinearPolynomial::evaluate(std::span<const double> x) const {
  if (x.size() < n_) {
    throw InputError("polynomial in " + std::to_string(n_) + " variables evaluated at a point of size " +
                     std::to_string(x.size()));
  }
  double total = 0.0;
  for (const auto& [m, a] : coeffs_) {
    double term = a;
    for (std::size_t i : m) term *= x[i];
    total += term;
  }
  return total;
}

std::vector<double> MultilinearPolynomial::gradient(std::span<const double> x) const {
  if (x.size() < n_) throw InputError("gradient point has too few coordinates");
  std::vector<double> g(n_, 0.0);
  for (const auto& [m, a] : coeffs_) {
    for (std::size_t k = 0; k < m.size(); ++k) {
      double term = a;
      for (std::size_t j = 0; j < m.size(); ++j) {
        if (j != k) term *= x[m[j]];
      }
      g[m[k]] += term;
    }
  }
  return g;
}

double MultilinearPolynomial::variance() const {
  double v = 0.0;
  for (const auto& [m, a] : coeffs_) {
    if (!m.empty()) v += a * a;
  }
  return v;
}

InfluenceDecomposition partial_influence_poly(const MultilinearPolynomial& p, std::size_t i) {
  if (i >= p.variable_count()) throw InputError("variable index out of range");
  std::vector<MultilinearPolynomial::Term> s_terms, r_terms;
  for (const auto& [m, a] : p.coefficients()) {
    auto it = std::find(m.begin(), m.end(), i);
    if (it == m.end()) {
      r_terms.emplace_back(m, a);
    } else {
      MultilinearPolynomial::Monomial rest = m;
      rest.erase(rest.begin() + (it - m.begin()));
      s_terms.emplace_back(std::move(rest), a);
    }
  }
  return {MultilinearPolynomial(p.variable_count(), s_terms),
          MultilinearPolynomial(p.variable_count(), r_terms)};
}

LogScalar theta_recursion(LogScalar theta, std::size_t d, ThetaMode mode) {
  if (d == 0) throw InputError("theta_recursion needs d >= 1");
  if (!(theta > LogScalar::zero())) throw InputError("theta_recursion needs theta > 0");
  switch (mode) {
    case ThetaMode::recursion: {
      LogScalar t = theta;
      const LogScalar half = LogScalar::power_of_two(-1.0);
      for (std::size_t k = 1; k < d; ++k) {
        const LogScalar cap = LogScalar::from_double(1.0 / (8.0 * static_cast<double>(k + 1)));
        t = min(cap, t * half);
      }
      return t;
    }
    case ThetaMode::closed_form: {
      const LogScalar cap = LogScalar::from_double(1.0 / (8.0 * static_cast<double>(d)));
      return min(theta, cap) * LogScalar::power_of_two(-static_cast<double>(d));
    }
    case ThetaMode::log_concave:
      return LogScalar::from_double(1.0 / static_cast<double>(d));
  }
  return theta;
}

}  // namespace qfreg
