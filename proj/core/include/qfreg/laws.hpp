#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qfreg/log_scalar.hpp"
#include "qfreg/multilinear_polynomial.hpp"
#include "qfreg/smooth_map.hpp"

namespace qfreg {

enum class LawKind { gaussian, beta, gamma, phi_gaussian, chaos };
std::string to_string(LawKind kind);

/// Slack applied to the supremum small-ball exponent of Beta and Gamma laws.
inline constexpr double kSmallBallSlack = 1e-3;

/// A one-dimensional Dirichlet structure: law, carre du champ and generator.
///
/// Beta(alpha, beta) lives on [-1, 1] with density proportional to
/// (1-x)^(alpha-1) (1+x)^(beta-1). Gamma(alpha) has unit scale.
/// PhiOfGaussian is map(N) for a standard Gaussian N. Chaos is a multilinear
/// polynomial in independent standardized copies of its base laws.
class DirichletVariable {
 public:
  static DirichletVariable gaussian();
  static DirichletVariable beta(double alpha, double beta);
  static DirichletVariable gamma(double alpha);
  /// Mean and variance default to those recorded on the map; a map without
  /// them needs explicit values before it can be standardized.
  static DirichletVariable phi_gaussian(SmoothMap map, std::optional<double> theta = std::nullopt,
                                        std::optional<double> mean = std::nullopt,
                                        std::optional<double> variance = std::nullopt);
  /// One base law per polynomial variable, or a single base law reused.
  static DirichletVariable chaos(std::vector<DirichletVariable> base, MultilinearPolynomial poly);

  LawKind kind() const { return kind_; }
  std::string name() const;
  double alpha() const { return alpha_; }
  double beta_param() const { return beta_; }
  const SmoothMap& map() const { return map_; }
  std::optional<double> declared_theta() const { return theta_; }

  bool has_moments() const { return mean_.has_value() && variance_.has_value(); }
  /// Throw InputError when the moments are unknown.
  double mean() const;
  double variance() const;

  /// Chaos accessors; throw for other kinds.
  const std::vector<DirichletVariable>& chaos_base() const;
  const MultilinearPolynomial& chaos_poly() const;
  const DirichletVariable& chaos_base_for(std::size_t variable) const;

  bool in_support(double x) const;

 private:
  DirichletVariable() = default;

  struct ChaosData {
    std::vector<DirichletVariable> base;
    MultilinearPolynomial poly;
  };

  LawKind kind_ = LawKind::gaussian;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  SmoothMap map_;
  std::optional<double> theta_;
  std::optional<double> mean_;
  std::optional<double> variance_;
  std::shared_ptr<const ChaosData> chaos_;
};

/// Pointwise data of a diffusion generator L u = gamma u'' + drift u'.
struct LocalCoefficients {
  double gamma = 0.0;        // Gamma(X, X)
  double gamma_prime = 0.0;  // d gamma / dx
  double drift = 0.0;        // L x
};

/// Coefficients at raw (unstandardized) x. PhiOfGaussian needs the latent
/// Gaussian point, recovered through the map's inverse when not supplied.
/// Throws for chaos and for x outside the support.
LocalCoefficients local_coefficients(const DirichletVariable& v, double x,
                                     std::optional<double> latent = std::nullopt);
/// Same coefficients after the affine change x -> (x - mean)/sd.
LocalCoefficients standardized_coefficients(const DirichletVariable& v, double x_std,
                                            std::optional<double> latent = std::nullopt);

double carre_du_champ(const DirichletVariable& v, double x,
                      std::optional<double> latent = std::nullopt);
/// Chaos carre du champ sum_l (d_l p)^2 Gamma_l at standardized base values.
double chaos_carre_du_champ(const DirichletVariable& v, std::span<const double> base_std,
                            std::span<const double> base_latent = {});

/// (L u)(x) for a map u given with two derivatives.
double generator_apply(const DirichletVariable& v, const SmoothMap& u, double x,
                       std::optional<double> latent = std::nullopt);

/// Gamma(Gamma(X,X), Gamma(X,X)) at raw x.
double gamma_of_gamma(const DirichletVariable& v, double x,
                      std::optional<double> latent = std::nullopt);

/// Samples aligned row-major as [m * n + i].
struct SampleBatch {
  std::size_t M = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  bool standardized = false;
  std::vector<double> x;
  std::vector<double> gamma;
  /// Gaussian points behind PhiOfGaussian samples; empty for other kinds.
  std::vector<double> latent;

  double x_at(std::size_t m, std::size_t i) const { return x[m * n + i]; }
  double gamma_at(std::size_t m, std::size_t i) const { return gamma[m * n + i]; }
  std::span<const double> row(std::size_t m) const { return {x.data() + m * n, n}; }
  std::span<const double> gamma_row(std::size_t m) const { return {gamma.data() + m * n, n}; }
};

/// Coordinate (m, i) is drawn from the counter stream (seed, sample, m, i),
/// so batches do not depend on the thread count.
SampleBatch sample_batch(const DirichletVariable& v, std::size_t n, std::size_t M,
                         std::uint64_t seed, bool standardize);

/// One draw of (x, gamma, latent) at raw scale from the stream for (m, i).
struct Draw {
  double x = 0.0;
  double gamma = 0.0;
  double latent = 0.0;
};
Draw draw_one(const DirichletVariable& v, std::uint64_t seed, std::size_t m, std::size_t i);

/// Admissible theta with P(Gamma(X,X) <= eps) <~ eps^theta. Gaussian returns
/// infinity. Chaos applies the multilinear recursion at degree 2 deg p to
/// min(1, base exponents).
LogScalar smallball_exponent(const DirichletVariable& v);

struct SmallBallProbability {
  double eps = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t M = 0;
};
enum class SmallBallMethod {
  /// Fraction of samples with Gamma(X,X) <= eps.
  naive,
  /// Conditional Monte Carlo through G_a = G_{a+1} U^{1/a}; Beta and Gamma only.
  conditional,
};
/// Estimates P(Gamma(X,X) <= eps) for a one-dimensional law.
SmallBallProbability smallball_gamma_probability(const DirichletVariable& v, double eps,
                                                 std::size_t M, std::uint64_t seed,
                                                 SmallBallMethod method);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
};
/// Least-squares line through (log x, log y).
SlopeFit loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace qfreg
