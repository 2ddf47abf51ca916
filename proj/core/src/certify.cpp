#include "qfreg/certify.hpp"

#include <cmath>

#include "qfreg/error.hpp"

namespace qfreg {

std::string to_string(TauReading r) { return r == TauReading::literal ? "literal" : "reciprocal"; }

std::string to_string(Verdict v) { return v == Verdict::certified ? "certified" : "refused"; }

LogScalar tau_q(std::size_t q, LogScalar theta, TauReading reading) {
  if (q == 0) throw InputError("tau_q needs q >= 1");
  if (!(theta > LogScalar::zero())) throw InputError("tau_q needs theta > 0");
  const double c = 2048.0 * static_cast<double>(q) + 288.0;
  const LogScalar cap = reading == TauReading::literal ? LogScalar::from_double(c)
                                                       : LogScalar::from_double(1.0 / c);
  return min(theta, cap).pow(-5.0) *
         LogScalar::power_of_two(-1280.0 * static_cast<double>(q) - 191.0);
}

EtaResult eta_q(std::size_t q, LogScalar theta, LogScalar tau_a, ThetaMode mode,
                std::optional<LogScalar> theta_2qprime_override) {
  if (!(tau_a > LogScalar::zero())) throw InputError("eta_q needs tau_A > 0");
  EtaResult r;
  r.theta_2qprime = theta_2qprime_override ? *theta_2qprime_override
                                           : theta_recursion(theta, 2 * q_prime(q), mode);
  if (tau_a.is_infinite()) return r;
  const double k = std::floor((-tau_a.log2() - 1.0) / 5.0);
  if (k < 0.0) return r;
  r.kappa = static_cast<long>(k);
  r.eta = LogScalar::power_of_two(k) * r.theta_2qprime;
  r.admissible = r.eta > LogScalar::from_double(0.25);
  return r;
}

CertificateReport certify_quadratic(const SymmetricOperator& a, std::size_t q, LogScalar theta,
                                    const CertifyOptions& options) {
  if (q == 0) throw InputError("certify needs q >= 1");
  CertificateReport r;
  r.q = q;
  r.n = a.dimension();
  r.theta = theta;
  r.q_prime = q_prime(q);
  r.reading = options.reading;
  r.theta_mode = options.theta_mode;
  r.tau_q = options.tau_q_override ? *options.tau_q_override : tau_q(q, theta, options.reading);
  r.tau_q_overridden = options.tau_q_override.has_value();
  r.theta_2qprime_overridden = options.theta_2qprime_override.has_value();
  r.input_frobenius_sq = a.frobenius_sq();
  r.disclaimer =
      "bounds hold up to a finite multiplicative constant Psi depending on Sobolev norms of the "
      "coordinates; Psi is not computed";

  if (!(r.input_frobenius_sq > 0.0) || !std::isfinite(r.input_frobenius_sq)) {
    r.reasons.push_back("operator cannot be trace-normalized (tr A^2 = " +
                        std::to_string(r.input_frobenius_sq) + ")");
    return r;
  }
  r.checks.trace_normalized = true;
  const SymmetricOperator an = a.normalized();
  r.rank = an.rank();
  r.tau_a = LogScalar::from_double(influences(an).max);

  const std::size_t top = std::min(r.q_prime, r.n);
  if (q <= r.n) {
    const auto rem = spectral_remainders_log(an, top);
    r.remainder_q = r.rank >= q ? rem[q] : LogScalar::zero();
    if (r.q_prime <= r.n) r.remainder_q_prime = r.rank >= r.q_prime ? rem[r.q_prime] : LogScalar::zero();
  }
  if (r.q_prime > r.n || r.rank < r.q_prime) {
    r.reasons.push_back("remainder vanishes beyond rank: R_" + std::to_string(r.q_prime) +
                        " needs rank >= " + std::to_string(r.q_prime) + ", got rank " +
                        std::to_string(r.rank) + " (n = " + std::to_string(r.n) + ")");
  } else if (!(r.remainder_q > LogScalar::zero())) {
    r.reasons.push_back("R_" + std::to_string(q) + "(A) = 0");
  } else {
    r.checks.remainder_positive = true;
  }

  r.checks.influence_small = r.tau_a < r.tau_q;
  if (!r.checks.influence_small) {
    r.reasons.push_back("influence too large: log2 tau(A) = " + std::to_string(r.tau_a.log2()) +
                        " is not below log2 tau_q = " + std::to_string(r.tau_q.log2()) + " (" +
                        to_string(options.reading) + " reading" +
                        (r.tau_q_overridden ? ", overridden" : "") + ")");
  }

  if (r.tau_a > LogScalar::zero()) {
    const EtaResult e = eta_q(q, theta, r.tau_a, options.theta_mode, options.theta_2qprime_override);
    r.kappa = e.kappa;
    r.theta_2qprime = e.theta_2qprime;
    r.eta_q = e.eta;
    r.eta_exceeds_quarter = e.admissible;
    if (e.kappa < 0) {
      r.reasons.push_back("no admissible depth: tau(A) > 2^-1");
    } else if (!e.admissible) {
      r.reasons.push_back("eta_q = 2^kappa theta_2q' = " + e.eta.to_string() +
                          " does not exceed 1/4 at kappa = " + std::to_string(e.kappa));
    }
  } else {
    r.reasons.push_back("tau(A) = 0");
  }

  const bool all = r.checks.trace_normalized && r.checks.remainder_positive &&
                   r.checks.influence_small && r.eta_exceeds_quarter;
  r.verdict = all ? Verdict::certified : Verdict::refused;
  if (all) r.sobolev_bound = r.remainder_q_prime.pow(-r.eta_q.to_double());
  return r;
}

}  // namespace qfreg
