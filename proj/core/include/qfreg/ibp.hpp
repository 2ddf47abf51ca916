#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>

#include "qfreg/bouleau.hpp"
#include "qfreg/dirichlet_polynomial.hpp"
#include "qfreg/laws.hpp"

namespace qfreg {

/// Symbolic expression over F, L F, Gamma(F, F), Gamma(F, .) and arithmetic.
class IbpWeightTerm {
 public:
  enum class Kind { one, constant, generator_f, gamma_ff, gamma_f, product, sum, negation };

  static std::shared_ptr<const IbpWeightTerm> one();
  static std::shared_ptr<const IbpWeightTerm> constant(double c);
  static std::shared_ptr<const IbpWeightTerm> generator_f();
  static std::shared_ptr<const IbpWeightTerm> gamma_ff();
  static std::shared_ptr<const IbpWeightTerm> gamma_f(std::shared_ptr<const IbpWeightTerm> arg);
  static std::shared_ptr<const IbpWeightTerm> product(std::shared_ptr<const IbpWeightTerm> a,
                                                      std::shared_ptr<const IbpWeightTerm> b);
  static std::shared_ptr<const IbpWeightTerm> sum(std::shared_ptr<const IbpWeightTerm> a,
                                                  std::shared_ptr<const IbpWeightTerm> b);
  static std::shared_ptr<const IbpWeightTerm> negation(std::shared_ptr<const IbpWeightTerm> a);

  Kind kind() const { return kind_; }
  double value() const { return value_; }
  const std::shared_ptr<const IbpWeightTerm>& left() const { return left_; }
  const std::shared_ptr<const IbpWeightTerm>& right() const { return right_; }

  std::string to_string() const;
  std::size_t depth() const;
  std::size_t node_count() const;
  /// Number of nodes that read F through L F, Gamma(F,F) or Gamma(F, .).
  std::size_t arity() const;

 private:
  static std::shared_ptr<const IbpWeightTerm> make(Kind kind, double value,
                                                   std::shared_ptr<const IbpWeightTerm> left,
                                                   std::shared_ptr<const IbpWeightTerm> right);

  Kind kind_ = Kind::one;
  double value_ = 1.0;
  std::shared_ptr<const IbpWeightTerm> left_;
  std::shared_ptr<const IbpWeightTerm> right_;
};

using IbpTermPtr = std::shared_ptr<const IbpWeightTerm>;

enum class IbpRecursion {
  /// R_{k+1} = S(-R_k L F - Gamma(F, R_k)) + R_k Gamma(F, S), S = Gamma(F,F).
  as_stated,
  /// Same with (2k+1) R_k Gamma(F, S), the coefficient that makes
  /// E[phi^(k)(F)] = E[phi(F) R_k / S^{2k}] hold for k >= 2.
  corrected,
};
std::string to_string(IbpRecursion r);

/// R_k as a term tree; R_0 = 1.
IbpTermPtr ibp_weights(std::size_t k, IbpRecursion recursion = IbpRecursion::as_stated);

/// Evaluates a term tree for polynomial F under a polynomial diffusion.
Polynomial evaluate_term(const IbpWeightTerm& term, const Polynomial& f,
                         const PolynomialDiffusion& diffusion);

/// Smooth test function with derivatives up to order kMaxTestDerivative.
struct TestFunction {
  enum class Kind { sine, bump };
  Kind kind = Kind::sine;
  /// Bump exp(-1/(1-u^2)) with u = (y - center)/half_width.
  double center = 0.0;
  double half_width = 1.0;

  double derivative(std::size_t order, double y) const;
  std::string name() const;
};
inline constexpr std::size_t kMaxTestDerivative = 2;

struct IbpCheck {
  std::size_t k = 0;
  std::string test_function;
  double lhs = 0.0;  // mean of phi^(k)(F)
  double rhs = 0.0;  // mean of phi(F) R_k / S^{2k}
  double gap = 0.0;
  double std_error = 0.0;
  double gap_in_std_errors = 0.0;
  double floor_fraction = 0.0;
  bool skipped = false;
  std::string diagnosis;
  bool passed = false;
  std::size_t M = 0;
};

/// Samples with S = Gamma(F,F) at or below this value count toward the floor
/// fraction; above 1% the check is skipped.
inline constexpr double kIbpGammaFloor = 1e-10;
inline constexpr double kIbpMaxFloorFraction = 0.01;

/// k = 1 for any smooth cylinder functional, with R_1 from the gradient,
/// Hessian and the law's local coefficients. Passes when the gap is at most
/// `bands` standard errors.
IbpCheck ibp_check(const CylinderFunctional& F, const SampleBatch& batch, const TestFunction& phi,
                   double bands = 4.0);

/// Any k <= kMaxTestDerivative (or any k for sine) for polynomial F on a
/// Gaussian, Beta or Gamma law, with R_k from the term tree.
IbpCheck ibp_check_polynomial(const Polynomial& f, const DirichletVariable& law, std::size_t k,
                              const SampleBatch& batch, const TestFunction& phi,
                              IbpRecursion recursion = IbpRecursion::as_stated, double bands = 4.0);

/// A bump centered at the batch mean of F with half-width the batch SD.
TestFunction default_bump(const std::vector<double>& f_values);

}  // namespace qfreg
