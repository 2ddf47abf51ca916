#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "qfreg/log_scalar.hpp"

namespace qfreg {

/// Dense finite truncation of a symmetric Hilbert-Schmidt operator.
///
/// Entries are exactly symmetric after construction. The eigen-decomposition
/// is computed on first use and shared between copies; eigenvalues are sorted
/// by decreasing absolute value, ties broken positive-first, then by index.
class SymmetricOperator {
 public:
  /// Accepts a square finite matrix whose asymmetry is at most
  /// `symmetry_tolerance * max(1, max|a_ij|)`; the stored matrix is the
  /// symmetric part. Throws InputError otherwise.
  explicit SymmetricOperator(Eigen::MatrixXd entries, double symmetry_tolerance = 1e-12);

  static SymmetricOperator diagonal(std::span<const double> values);
  static SymmetricOperator identity(std::size_t n);
  static SymmetricOperator zero(std::size_t n);

  std::size_t dimension() const { return static_cast<std::size_t>(a_.rows()); }
  const Eigen::MatrixXd& entries() const { return a_; }
  double operator()(std::size_t i, std::size_t j) const {
    return a_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  const Eigen::VectorXd& eigenvalues() const;
  /// Column k is the unit eigenvector for eigenvalues()[k].
  const Eigen::MatrixXd& eigenvectors() const;

  /// tr A^2 = sum of squared entries.
  double frobenius_sq() const { return a_.squaredNorm(); }
  double spectral_radius() const;
  /// Number of eigenvalues with |lambda| > rel_tol * rho.
  std::size_t rank(double rel_tol = 1e-10) const;

  SymmetricOperator scaled(double c) const;
  /// The operator divided by sqrt(tr A^2). Throws for the zero operator.
  SymmetricOperator normalized() const;

 private:
  struct Spectrum {
    std::once_flag once;
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
  };
  void ensure_spectrum() const;

  Eigen::MatrixXd a_;
  std::shared_ptr<Spectrum> spectrum_;
};

/// Eigenvalues (sorted) and eigenvectors of `op`.
struct EigenDecomposition {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};
EigenDecomposition eigendecompose(const SymmetricOperator& op);

enum class RemainderConvention {
  /// Sum over distinct ordered index tuples: q! e_q(lambda^2).
  tuple,
  /// Sum over index subsets: e_q(lambda^2). Canonical everywhere downstream.
  set,
};

/// Elementary symmetric polynomials e_0..e_qmax of nonnegative values, by
/// incremental expansion of prod(1 + t v_i). No cancellation occurs.
std::vector<double> elementary_symmetric(std::span<const double> values, std::size_t q_max);
/// Same recurrence carried out in the log domain.
std::vector<LogScalar> elementary_symmetric_log(std::span<const double> values, std::size_t q_max);

/// Spectral remainders R_0..R_qmax (index q holds R_q; R_0 = 1).
/// Throws InputError unless 1 <= q_max <= n.
std::vector<double> spectral_remainders(const SymmetricOperator& op, std::size_t q_max,
                                        RemainderConvention convention = RemainderConvention::set);
/// Set-convention remainders in the log domain, for q up to n.
std::vector<LogScalar> spectral_remainders_log(const SymmetricOperator& op, std::size_t q_max);

/// Determinant of the minor A(rows, cols) by LU with partial pivoting.
double minor_determinant(const Eigen::MatrixXd& a, std::span<const std::size_t> rows,
                         std::span<const std::size_t> cols);

/// Sum of det(A(I,J))^2 over all pairs of q-subsets, by direct enumeration.
/// Guarded to n <= 12 and q <= 6.
double cauchy_binet_oracle(const SymmetricOperator& op, std::size_t q);

struct Influences {
  std::vector<double> per_index;
  double max = 0.0;
};
/// tau_i = sum_j a_ij^2 and tau = max_i tau_i.
Influences influences(const SymmetricOperator& op);

/// The submatrix A(rows, cols); throws InputError on an out-of-range index.
Eigen::MatrixXd extract(const SymmetricOperator& op, std::span<const std::size_t> rows,
                        std::span<const std::size_t> cols);

struct SpectrumSummary {
  double frobenius_sq = 0.0;
  double spectral_radius = 0.0;
  /// Index q holds R_q for q = 0..q_max.
  std::vector<double> remainders_tuple;
  std::vector<double> remainders_set;
  std::vector<double> influences;
  double max_influence = 0.0;
};
SpectrumSummary summarize(const SymmetricOperator& op, std::size_t q_max);

/// Both sides of R_q >= prod_{k<q}(1 - k rho^2) and tau <= rho^2 for a
/// trace-normalized operator.
struct SpectralRadiusBounds {
  std::size_t q = 0;
  double remainder_tuple = 0.0;   // R_q, ordered-tuple convention
  double product_bound = 1.0;     // prod_{k=1}^{q-1} (1 - k rho^2)
  /// True when every factor of the product is nonnegative; outside that
  /// regime the inductive bound says nothing.
  bool product_applicable = true;
  bool remainder_bound_holds = true;
  double tau = 0.0;
  double rho_sq = 0.0;
  bool influence_bound_holds = true;
};
/// Throws InputError when |tr A^2 - 1| > 1e-10 or q is out of range.
SpectralRadiusBounds spectral_radius_bounds_check(const SymmetricOperator& op, std::size_t q,
                                                  double tolerance = 1e-10);

/// R_p(A + A') against R_p(A) + R_p(A') (set convention) for p up to
/// min(rank A, rank A'). Supports must be entrywise disjoint. The inequality
/// holds when the two supports use disjoint index sets; with merely
/// entrywise-disjoint supports it can fail, e.g. [[0,1],[1,0]] and I_2.
struct AdditivityCheck {
  std::size_t p_max = 0;
  std::vector<double> combined;
  std::vector<double> first;
  std::vector<double> second;
  /// min over p of combined - first - second (0 when p_max = 0).
  double worst_gap = 0.0;
  bool holds = true;
};
AdditivityCheck additivity_check(const SymmetricOperator& a, const SymmetricOperator& b,
                                 double tolerance = 1e-10);

}  // namespace qfreg
