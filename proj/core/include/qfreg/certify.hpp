#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qfreg/log_scalar.hpp"
#include "qfreg/multilinear_polynomial.hpp"
#include "qfreg/spectral.hpp"

namespace qfreg {

enum class TauReading {
  /// (theta ^ (2048q + 288))^{-5} 2^{-1280q-191}, as printed.
  literal,
  /// (theta ^ 1/(2048q + 288))^{-5} 2^{-1280q-191}.
  reciprocal,
};
std::string to_string(TauReading r);

/// Influence threshold tau_q, exact in exponent arithmetic.
LogScalar tau_q(std::size_t q, LogScalar theta, TauReading reading = TauReading::literal);

/// q' = 128 q + 18.
inline std::size_t q_prime(std::size_t q) { return 128 * q + 18; }

struct EtaResult {
  /// Largest k >= 0 with tau_A <= 2^{-5k-1}; -1 when tau_A > 1/2.
  long kappa = -1;
  LogScalar theta_2qprime;
  LogScalar eta;
  bool admissible = false;  // eta > 1/4
};
/// eta_q = 2^kappa theta_{2q'}. `theta_2qprime_override` replaces theta_{2q'}.
EtaResult eta_q(std::size_t q, LogScalar theta, LogScalar tau_a,
                ThetaMode mode = ThetaMode::recursion,
                std::optional<LogScalar> theta_2qprime_override = std::nullopt);

struct CertifyOptions {
  TauReading reading = TauReading::literal;
  ThetaMode theta_mode = ThetaMode::recursion;
  /// Test hooks; reports flag them.
  std::optional<LogScalar> tau_q_override;
  std::optional<LogScalar> theta_2qprime_override;
};

struct CertificateChecks {
  bool trace_normalized = false;
  bool remainder_positive = false;
  bool influence_small = false;
};

enum class Verdict { certified, refused };
std::string to_string(Verdict v);

struct CertificateReport {
  std::size_t q = 0;
  std::size_t n = 0;
  LogScalar theta;
  std::size_t q_prime = 0;
  TauReading reading = TauReading::literal;
  ThetaMode theta_mode = ThetaMode::recursion;
  LogScalar tau_q;
  bool tau_q_overridden = false;
  bool theta_2qprime_overridden = false;
  /// tr A^2 of the input; the checks run on A / sqrt(tr A^2).
  double input_frobenius_sq = 0.0;
  std::size_t rank = 0;
  LogScalar tau_a;
  LogScalar remainder_q;
  LogScalar remainder_q_prime;
  long kappa = -1;
  LogScalar theta_2qprime;
  LogScalar eta_q;
  bool eta_exceeds_quarter = false;
  CertificateChecks checks;
  Verdict verdict = Verdict::refused;
  std::vector<std::string> reasons;
  /// R_{q'}(A)^{-eta_q}, set only when certified.
  std::optional<LogScalar> sobolev_bound;
  std::string disclaimer;
};

/// Never throws on mathematical refusal; the verdict carries the reasons.
CertificateReport certify_quadratic(const SymmetricOperator& a, std::size_t q, LogScalar theta,
                                    const CertifyOptions& options = {});

/// Exit code contract: 0 certified, 2 refused.
inline int exit_code(const CertificateReport& r) { return r.verdict == Verdict::certified ? 0 : 2; }

}  // namespace qfreg
