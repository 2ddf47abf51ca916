#include "qfreg/ibp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qfreg/error.hpp"

namespace qfreg {

IbpTermPtr IbpWeightTerm::make(Kind kind, double value, IbpTermPtr left, IbpTermPtr right) {
  auto t = std::shared_ptr<IbpWeightTerm>(new IbpWeightTerm());
  t->kind_ = kind;
  t->value_ = value;
  t->left_ = std::move(left);
  t->right_ = std::move(right);
  return t;
}

IbpTermPtr IbpWeightTerm::one() { return make(Kind::one, 1.0, nullptr, nullptr); }
IbpTermPtr IbpWeightTerm::constant(double c) { return make(Kind::constant, c, nullptr, nullptr); }
IbpTermPtr IbpWeightTerm::generator_f() { return make(Kind::generator_f, 0.0, nullptr, nullptr); }
IbpTermPtr IbpWeightTerm::gamma_ff() { return make(Kind::gamma_ff, 0.0, nullptr, nullptr); }
IbpTermPtr IbpWeightTerm::gamma_f(IbpTermPtr arg) {
  return make(Kind::gamma_f, 0.0, std::move(arg), nullptr);
}
IbpTermPtr IbpWeightTerm::product(IbpTermPtr a, IbpTermPtr b) {
  return make(Kind::product, 0.0, std::move(a), std::move(b));
}
IbpTermPtr IbpWeightTerm::sum(IbpTermPtr a, IbpTermPtr b) {
  return make(Kind::sum, 0.0, std::move(a), std::move(b));
}
IbpTermPtr IbpWeightTerm::negation(IbpTermPtr a) {
  return make(Kind::negation, 0.0, std::move(a), nullptr);
}

std::string IbpWeightTerm::to_string() const {
  switch (kind_) {
    case Kind::one: return "1";
    case Kind::constant: {
      std::string s = std::to_string(value_);
      s.erase(s.find_last_not_of('0') + 1);
      if (!s.empty() && s.back() == '.') s.pop_back();
      return s;
    }
    case Kind::generator_f: return "LF";
    case Kind::gamma_ff: return "G(F,F)";
    case Kind::gamma_f: return "G(F," + left_->to_string() + ")";
    case Kind::product: return "(" + left_->to_string() + "*" + right_->to_string() + ")";
    case Kind::sum: return "(" + left_->to_string() + "+" + right_->to_string() + ")";
    case Kind::negation: return "-" + left_->to_string();
  }
  return "?";
}

std::size_t IbpWeightTerm::depth() const {
  std::size_t d = 0;
  if (left_) d = std::max(d, left_->depth());
  if (right_) d = std::max(d, right_->depth());
  return d + 1;
}

std::size_t IbpWeightTerm::node_count() const {
  return 1 + (left_ ? left_->node_count() : 0) + (right_ ? right_->node_count() : 0);
}

std::size_t IbpWeightTerm::arity() const {
  const std::size_t self =
      kind_ == Kind::generator_f || kind_ == Kind::gamma_ff || kind_ == Kind::gamma_f ? 1 : 0;
  return self + (left_ ? left_->arity() : 0) + (right_ ? right_->arity() : 0);
}

std::string to_string(IbpRecursion r) {
  return r == IbpRecursion::as_stated ? "as_stated" : "corrected";
}

IbpTermPtr ibp_weights(std::size_t k, IbpRecursion recursion) {
  using T = IbpWeightTerm;
  IbpTermPtr r = T::one();
  const IbpTermPtr s = T::gamma_ff();
  for (std::size_t j = 0; j < k; ++j) {
    const IbpTermPtr inner =
        T::sum(T::negation(T::product(r, T::generator_f())), T::negation(T::gamma_f(r)));
    IbpTermPtr tail = T::product(r, T::gamma_f(s));
    if (recursion == IbpRecursion::corrected && j > 0) {
      tail = T::product(T::constant(static_cast<double>(2 * j + 1)), tail);
    }
    r = T::sum(T::product(s, inner), tail);
  }
  return r;
}

Polynomial evaluate_term(const IbpWeightTerm& term, const Polynomial& f,
                         const PolynomialDiffusion& diffusion) {
  const std::size_t n = f.variable_count();
  using K = IbpWeightTerm::Kind;
  switch (term.kind()) {
    case K::one: return Polynomial::constant(n, 1.0);
    case K::constant: return Polynomial::constant(n, term.value());
    case K::generator_f: return diffusion.generator(f);
    case K::gamma_ff: return diffusion.carre_du_champ(f, f);
    case K::gamma_f: return diffusion.carre_du_champ(f, evaluate_term(*term.left(), f, diffusion));
    case K::product:
      return evaluate_term(*term.left(), f, diffusion) * evaluate_term(*term.right(), f, diffusion);
    case K::sum:
      return evaluate_term(*term.left(), f, diffusion) + evaluate_term(*term.right(), f, diffusion);
    case K::negation: return -evaluate_term(*term.left(), f, diffusion);
  }
  return Polynomial(n);
}

double TestFunction::derivative(std::size_t order, double y) const {
  if (kind == Kind::sine) {
    return std::sin(y + static_cast<double>(order % 4) * std::numbers::pi / 2.0);
  }
  if (order > kMaxTestDerivative) throw InputError("bump derivatives are available up to order 2");
  const double u = (y - center) / half_width;
  if (std::abs(u) >= 1.0) return 0.0;
  const double w = 1.0 - u * u;
  const double psi = std::exp(-1.0 / w);
  if (order == 0) return psi;
  const double g1 = -2.0 * u / (w * w);
  if (order == 1) return g1 * psi / half_width;
  const double g2 = -2.0 / (w * w) - 8.0 * u * u / (w * w * w);
  return (g2 + g1 * g1) * psi / (half_width * half_width);
}

std::string TestFunction::name() const {
  if (kind == Kind::sine) return "sin";
  return "bump(" + std::to_string(center) + "," + std::to_string(half_width) + ")";
}

TestFunction default_bump(const std::vector<double>& f_values) {
  if (f_values.size() < 2) throw InputError("need at least two values to place a bump");
  double mean = 0.0;
  for (double v : f_values) mean += v;
  mean /= static_cast<double>(f_values.size());
  double var = 0.0;
  for (double v : f_values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(f_values.size() - 1);
  TestFunction t;
  t.kind = TestFunction::Kind::bump;
  t.center = mean;
  t.half_width = std::sqrt(var) > 0.0 ? std::sqrt(var) : 1.0;
  return t;
}

namespace {

IbpCheck summarize_differences(const std::vector<double>& lhs, const std::vector<double>& rhs,
                               std::size_t floored, std::size_t k, const TestFunction& phi,
                               double bands) {
  IbpCheck c;
  c.k = k;
  c.test_function = phi.name();
  c.M = lhs.size();
  const double mf = static_cast<double>(c.M);
  c.floor_fraction = static_cast<double>(floored) / mf;
  if (c.floor_fraction > kIbpMaxFloorFraction) {
    c.skipped = true;
    c.diagnosis = "Gamma(F,F) at or below the floor in " + std::to_string(c.floor_fraction * 100.0) +
                  "% of samples; the weight is likely not integrable";
    return c;
  }
  double sd = 0.0, sdd = 0.0;
  for (std::size_t m = 0; m < c.M; ++m) {
    if (!std::isfinite(rhs[m])) {
      c.skipped = true;
      c.diagnosis = "non-finite weight at sample " + std::to_string(m);
      return c;
    }
    c.lhs += lhs[m];
    c.rhs += rhs[m];
    const double d = lhs[m] - rhs[m];
    sd += d;
    sdd += d * d;
  }
  c.lhs /= mf;
  c.rhs /= mf;
  const double mean_d = sd / mf;
  const double var = std::max(0.0, (sdd / mf - mean_d * mean_d) * mf / (mf - 1.0));
  c.gap = std::abs(mean_d);
  c.std_error = std::sqrt(var / mf);
  c.gap_in_std_errors = c.std_error > 0.0 ? c.gap / c.std_error : (c.gap == 0.0 ? 0.0 : INFINITY);
  c.passed = c.std_error > 0.0 ? c.gap <= bands * c.std_error : c.gap <= 1e-12;
  return c;
}

}  // namespace

IbpCheck ibp_check(const CylinderFunctional& F, const SampleBatch& batch, const TestFunction& phi,
                   double bands) {
  if (batch.n != F.f.n) throw InputError("batch dimension does not match the functional");
  if (batch.M < 2) throw InputError("ibp_check needs at least two samples");
  const std::size_t n = batch.n;
  std::vector<double> lhs(batch.M), rhs(batch.M);
  std::size_t floored = 0;
  std::vector<LocalCoefficients> c(n);
  for (std::size_t m = 0; m < batch.M; ++m) {
    const auto x = batch.row(m);
    const Eigen::VectorXd g = F.f.gradient(x);
    const Eigen::MatrixXd h = F.f.hessian(x);
    for (std::size_t i = 0; i < n; ++i) {
      std::optional<double> lat;
      if (!batch.latent.empty()) lat = batch.latent[m * n + i];
      c[i] = batch.standardized ? standardized_coefficients(F.law, x[i], lat)
                                : local_coefficients(F.law, x[i], lat);
    }
    double s = 0.0, lf = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      s += c[i].gamma * g(ii) * g(ii);
      lf += c[i].gamma * h(ii, ii) + c[i].drift * g(ii);
    }
    double gamma_f_s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      double ds = c[j].gamma_prime * g(jj) * g(jj);
      for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        ds += 2.0 * c[i].gamma * g(ii) * h(ii, jj);
      }
      gamma_f_s += c[j].gamma * g(jj) * ds;
    }
    const double r1 = -s * lf + gamma_f_s;
    const double fv = F.f.value(x);
    if (s <= kIbpGammaFloor) ++floored;
    lhs[m] = phi.derivative(1, fv);
    rhs[m] = phi.derivative(0, fv) * r1 / (s * s);
  }
  return summarize_differences(lhs, rhs, floored, 1, phi, bands);
}

IbpCheck ibp_check_polynomial(const Polynomial& f, const DirichletVariable& law, std::size_t k,
                              const SampleBatch& batch, const TestFunction& phi,
                              IbpRecursion recursion, double bands) {
  if (batch.n != f.variable_count()) throw InputError("batch dimension does not match F");
  if (batch.M < 2) throw InputError("ibp_check needs at least two samples");
  const PolynomialDiffusion diffusion(law, batch.n, batch.standardized);
  const Polynomial rk = evaluate_term(*ibp_weights(k, recursion), f, diffusion);
  const Polynomial s = diffusion.carre_du_champ(f, f);
  std::vector<double> lhs(batch.M), rhs(batch.M);
  std::size_t floored = 0;
  for (std::size_t m = 0; m < batch.M; ++m) {
    const auto x = batch.row(m);
    const double fv = f.evaluate(x);
    const double sv = s.evaluate(x);
    if (sv <= kIbpGammaFloor) ++floored;
    lhs[m] = phi.derivative(k, fv);
    rhs[m] = phi.derivative(0, fv) * rk.evaluate(x) / std::pow(sv, 2.0 * static_cast<double>(k));
  }
  return summarize_differences(lhs, rhs, floored, k, phi, bands);
}

}  // namespace qfreg
