#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qfreg/laws.hpp"
#include "qfreg/log_scalar.hpp"
#include "qfreg/spectral.hpp"

namespace qfreg {

/// A smooth function of n real variables with explicit gradient and Hessian.
struct SmoothField {
  std::string name;
  std::size_t n = 0;
  std::function<double(std::span<const double>)> value;
  std::function<Eigen::VectorXd(std::span<const double>)> gradient;
  std::function<Eigen::MatrixXd(std::span<const double>)> hessian;
};

namespace fields {
/// x_i.
SmoothField coordinate(std::size_t n, std::size_t i);
/// sum_i w_i x_i.
SmoothField linear(std::vector<double> weights);
/// x_i^2.
SmoothField coordinate_square(std::size_t n, std::size_t i);
/// <x, A x>.
SmoothField quadratic_form(const SymmetricOperator& a);
/// sin(x_0) + x_0 x_1 + ... + x_{n-2} x_{n-1}, a non-polynomial test field.
SmoothField sine_chain(std::size_t n);
}  // namespace fields

/// F = f(X_1, ..., X_n) with i.i.d. coordinates drawn from `law`.
struct CylinderFunctional {
  SmoothField f;
  DirichletVariable law;
};

struct DerivativeCheck {
  double max_gradient_error = 0.0;
  double max_hessian_error = 0.0;
  bool ok = true;
};
/// Compares gradient and Hessian with central finite differences at `points`
/// sample points of the law; errors are relative to max(1, |reference|).
DerivativeCheck check_derivatives(const CylinderFunctional& F, std::uint64_t seed,
                                  std::size_t points = 20, double rel_tol = 1e-5);

/// Gamma(F, F) = sum_i (d_i f)^2 Gamma_i for sample m of the batch.
double functional_carre_du_champ(const SmoothField& f, const SampleBatch& batch, std::size_t m);

/// sharp_G F = sum_i d_i f(X) Gamma_i^{1/2} G_i with G from the counter
/// streams (g_seed, bouleau_g, m, i).
std::vector<double> sharp_G(const CylinderFunctional& F, const SampleBatch& batch,
                            std::uint64_t g_seed);

struct CfIdentity {
  /// Batch averages of both sides.
  double lhs_mean = 0.0;
  double rhs_mean = 0.0;
  double max_abs_gap = 0.0;
  std::vector<double> lhs;
  std::vector<double> rhs;
};
/// Per sample: the G-conditional CF of sharp_G F at lambda as the product of
/// the one-dimensional Gaussian CFs, against exp(-lambda^2 Gamma(F,F)/2).
CfIdentity conditional_cf_identity(const CylinderFunctional& F, const SampleBatch& batch,
                                   double lambda);

/// Kolmogorov-Smirnov distance between the sample law of sharp_G F and the
/// mixture of N(0, Gamma(F,F)) over the batch. The mixture CDF is evaluated
/// on about `grid_points` sorted sample points and the returned value is an
/// upper bound on the exact sup distance.
double sharp_mixture_ks(const std::vector<double>& sharp, const std::vector<double>& gamma_ff,
                        std::size_t grid_points = 1000);

struct MarkovRow {
  double xi = 0.0;
  double probability = 0.0;  // P(Gamma(F,F) < 1/xi)
  double bound = 0.0;        // e E[exp(-xi Gamma(F,F))]
  double band = 0.0;         // 3 standard errors of the probability
  bool holds = true;
};
std::vector<MarkovRow> markov_smallball_bound(const CylinderFunctional& F, const SampleBatch& batch,
                                              const std::vector<double>& xi_grid);

struct GaussianQfCf {
  double xi = 0.0;
  double modulus = 0.0;
  LogScalar modulus_log;
  /// bounds[q-1] = (4^q xi^{2q} e_q(lambda^2))^{-1/4}, q = 1..len.
  std::vector<LogScalar> bounds;
  bool bounds_hold = true;
};
/// |E exp(i xi sum lambda_k N_k^2)| = prod (1 + 4 xi^2 lambda_k^2)^{-1/4}.
GaussianQfCf gaussian_qf_cf(std::span<const double> lambdas, double xi, double rel_tol = 1e-6);
/// The complex value prod (1 - 2 i xi lambda_k)^{-1/2}.
std::complex<double> gaussian_qf_cf_value(std::span<const double> lambdas, double xi);
/// M samples of sum lambda_k N_k^2.
std::vector<double> sample_gaussian_qf(std::span<const double> lambdas, std::size_t M,
                                       std::uint64_t seed);

/// Q_A = <A X, X>.
struct QuadraticFunctional {
  SymmetricOperator a;
  DirichletVariable law;
  bool vanishing_diagonal = false;

  /// Throws InputError when flagged and some a_ii != 0.
  QuadraticFunctional(SymmetricOperator a, DirichletVariable law, bool vanishing_diagonal = false);
  std::size_t dimension() const { return a.dimension(); }
};

/// Gamma^{1/2} (2A with zeroed diagonal) Gamma^{1/2} for sample m.
SymmetricOperator bouleau_hessian_main_term(const QuadraticFunctional& F, const SampleBatch& batch,
                                            std::size_t m);
std::vector<SymmetricOperator> bouleau_hessian_main_term(const QuadraticFunctional& F,
                                                         const SampleBatch& batch);

/// Values of R_q below this floor are replaced by it and counted.
inline constexpr double kRemainderFloorLog2 = -512.0;

struct NegativeMoment {
  double estimate = 0.0;
  LogScalar estimate_log;
  double floor_fraction = 0.0;
  std::size_t samples = 0;
};
/// Monte Carlo E[R_q^set(M)^{-power}] accumulated in the log domain.
/// Throws when every sample sits at the floor.
NegativeMoment spectral_remainder_negative_moment(const std::vector<SymmetricOperator>& samples,
                                                  std::size_t q, double power);

/// sharp_H sharp_G Q_A in reduced form: <Gamma^{1/2} G, 2A Gamma^{1/2} H>
/// plus, when requested, (1/2) sum_i d_i f Gamma_i^{-1/2}
/// Gamma(Gamma_i, Gamma_i)^{1/2} G_i H'_i with H' independent of H.
std::vector<double> iterated_sharp(const QuadraticFunctional& F, const SampleBatch& batch,
                                   std::uint64_t g_seed, std::uint64_t h_seed,
                                   bool include_diagonal);

}  // namespace qfreg
