#include "qfreg/dirichlet_polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qfreg/error.hpp"

namespace qfreg {

Polynomial Polynomial::constant(std::size_t n, double c) {
  Polynomial p(n);
  p.add_term(Exponents(n, 0), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t n, std::size_t i) {
  if (i >= n) throw InputError("variable index out of range");
  Polynomial p(n);
  Exponents e(n, 0);
  e[i] = 1;
  p.add_term(e, 1.0);
  return p;
}

std::size_t Polynomial::total_degree() const {
  std::size_t d = 0;
  for (const auto& [e, c] : terms_) {
    std::size_t s = 0;
    for (unsigned k : e) s += k;
    d = std::max(d, s);
  }
  return d;
}

void Polynomial::add_term(const Exponents& e, double c) {
  if (e.size() != n_) throw InputError("exponent vector of the wrong length");
  if (c == 0.0) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

Polynomial Polynomial::derivative(std::size_t i) const {
  Polynomial out(n_);
  for (const auto& [e, c] : terms_) {
    if (e[i] == 0) continue;
    Exponents d = e;
    d[i] -= 1;
    out.add_term(d, c * e[i]);
  }
  return out;
}

double Polynomial::evaluate(std::span<const double> x) const {
  if (x.size() < n_) throw InputError("polynomial evaluated at a point with too few coordinates");
  double total = 0.0;
  for (const auto& [e, c] : terms_) {
    double t = c;
    for (std::size_t i = 0; i < n_; ++i) {
      for (unsigned k = 0; k < e[i]; ++k) t *= x[i];
    }
    total += t;
  }
  return total;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  if (o.n_ != n_) throw InputError("polynomial variable counts differ");
  Polynomial out = *this;
  for (const auto& [e, c] : o.terms_) out.add_term(e, c);
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * -1.0; }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (o.n_ != n_) throw InputError("polynomial variable counts differ");
  Polynomial out(n_);
  for (const auto& [e1, c1] : terms_) {
    for (const auto& [e2, c2] : o.terms_) {
      Exponents e(n_);
      for (std::size_t i = 0; i < n_; ++i) e[i] = e1[i] + e2[i];
      out.add_term(e, c1 * c2);
    }
  }
  return out;
}

Polynomial Polynomial::operator*(double c) const {
  Polynomial out(n_);
  for (const auto& [e, v] : terms_) out.add_term(e, v * c);
  return out;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c;
    for (std::size_t i = 0; i < n_; ++i) {
      if (e[i] == 1) os << "*x" << i;
      else if (e[i] > 1) os << "*x" << i << "^" << e[i];
    }
  }
  return os.str();
}

PolynomialDiffusion::PolynomialDiffusion(const DirichletVariable& law, std::size_t n,
                                         bool standardized)
    : n_(n) {
  // Raw coefficients as quadratics c0 + c1 x + c2 x^2.
  double g0 = 0, g1 = 0, g2 = 0, b0 = 0, b1 = 0;
  switch (law.kind()) {
    case LawKind::gaussian: g0 = 1; b1 = -1; break;
    case LawKind::beta:
      g0 = 1;
      g2 = -1;
      b0 = -(law.alpha() - law.beta_param());
      b1 = -(law.alpha() + law.beta_param());
      break;
    case LawKind::gamma: g1 = 1; b0 = law.alpha(); b1 = -1; break;
    default: throw InputError("polynomial diffusion needs a Gaussian, Beta or Gamma law");
  }
  if (standardized) {
    // x = mu + s y: gamma(x)/s^2 and drift(x)/s as polynomials in y.
    const double mu = law.mean(), s = std::sqrt(law.variance());
    const double ng0 = g0 + g1 * mu + g2 * mu * mu, ng1 = (g1 + 2 * g2 * mu) * s, ng2 = g2 * s * s;
    const double nb0 = b0 + b1 * mu, nb1 = b1 * s;
    g0 = ng0 / (s * s);
    g1 = ng1 / (s * s);
    g2 = ng2 / (s * s);
    b0 = nb0 / s;
    b1 = nb1 / s;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Polynomial x = Polynomial::variable(n, i);
    const Polynomial one = Polynomial::constant(n, 1.0);
    gamma_.push_back(one * g0 + x * g1 + x * x * g2);
    drift_.push_back(one * b0 + x * b1);
  }
}

Polynomial PolynomialDiffusion::carre_du_champ(const Polynomial& p, const Polynomial& q) const {
  Polynomial out(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const Polynomial dp = p.derivative(i);
    if (dp.is_zero()) continue;
    const Polynomial dq = q.derivative(i);
    if (dq.is_zero()) continue;
    out = out + gamma_[i] * dp * dq;
  }
  return out;
}

Polynomial PolynomialDiffusion::generator(const Polynomial& p) const {
  Polynomial out(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const Polynomial d1 = p.derivative(i);
    if (d1.is_zero()) continue;
    out = out + gamma_[i] * d1.derivative(i) + drift_[i] * d1;
  }
  return out;
}

}  // namespace qfreg
