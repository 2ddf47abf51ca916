#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qfreg/laws.hpp"

namespace qfreg {

/// Real polynomial in n variables with sparse exponent vectors.
class Polynomial {
 public:
  using Exponents = std::vector<unsigned>;

  Polynomial() = default;
  explicit Polynomial(std::size_t n) : n_(n) {}
  static Polynomial constant(std::size_t n, double c);
  static Polynomial variable(std::size_t n, std::size_t i);

  std::size_t variable_count() const { return n_; }
  const std::map<Exponents, double>& terms() const { return terms_; }
  std::size_t total_degree() const;
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Exponents& e, double c);
  Polynomial derivative(std::size_t i) const;
  double evaluate(std::span<const double> x) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(double c) const;
  Polynomial operator-() const { return *this * -1.0; }

  std::string to_string() const;

 private:
  std::size_t n_ = 0;
  std::map<Exponents, double> terms_;
};

/// Diffusion data for i.i.d. coordinates: gamma_i and drift_i as polynomials
/// in x_i, so that Gamma(P, Q) = sum gamma_i d_i P d_i Q and
/// L P = sum gamma_i d_ii P + drift_i d_i P.
class PolynomialDiffusion {
 public:
  /// Gaussian, Beta and Gamma laws only. With `standardized` the
  /// coefficients are those of (x - mean)/sd.
  PolynomialDiffusion(const DirichletVariable& law, std::size_t n, bool standardized);

  std::size_t variable_count() const { return n_; }
  Polynomial carre_du_champ(const Polynomial& p, const Polynomial& q) const;
  Polynomial generator(const Polynomial& p) const;

 private:
  std::size_t n_;
  std::vector<Polynomial> gamma_;
  std::vector<Polynomial> drift_;
};

}  // namespace qfreg
