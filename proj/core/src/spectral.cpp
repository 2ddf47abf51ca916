#include "qfreg/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qfreg/error.hpp"
#include "qfreg/subsets.hpp"

namespace qfreg {

SymmetricOperator::SymmetricOperator(Eigen::MatrixXd entries, double symmetry_tolerance)
    : a_(std::move(entries)), spectrum_(std::make_shared<Spectrum>()) {
  if (a_.rows() != a_.cols()) {
    throw InputError("operator must be square, got " + std::to_string(a_.rows()) + "x" +
                     std::to_string(a_.cols()));
  }
  if (!a_.allFinite()) throw InputError("operator has non-finite entries");
  const double scale = std::max(1.0, a_.size() ? a_.cwiseAbs().maxCoeff() : 0.0);
  const double asym = a_.size() ? (a_ - a_.transpose()).cwiseAbs().maxCoeff() : 0.0;
  if (asym > symmetry_tolerance * scale) {
    throw InputError("operator is not symmetric (max |a_ij - a_ji| = " + std::to_string(asym) + ")");
  }
  if (asym > 0.0) {
    Eigen::MatrixXd sym = 0.5 * (a_ + a_.transpose());
    a_ = std::move(sym);
  }
}

SymmetricOperator SymmetricOperator::diagonal(std::span<const double> values) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(values.size()),
                                            static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = values[i];
  }
  return SymmetricOperator(std::move(m));
}

SymmetricOperator SymmetricOperator::identity(std::size_t n) {
  return SymmetricOperator(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n),
                                                     static_cast<Eigen::Index>(n)));
}

SymmetricOperator SymmetricOperator::zero(std::size_t n) {
  return SymmetricOperator(
      Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
}

void SymmetricOperator::ensure_spectrum() const {
  std::call_once(spectrum_->once, [this] {
    const Eigen::Index n = a_.rows();
    if (n == 0) return;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a_);
    if (solver.info() != Eigen::Success) throw Error("symmetric eigen-solver did not converge");
    const Eigen::VectorXd& raw_values = solver.eigenvalues();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
      const double ax = std::abs(raw_values(x));
      const double ay = std::abs(raw_values(y));
      if (ax != ay) return ax > ay;
      if ((raw_values(x) > 0) != (raw_values(y) > 0)) return raw_values(x) > 0;
      return x < y;
    });
    spectrum_->values.resize(n);
    spectrum_->vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const Eigen::Index src = order[static_cast<std::size_t>(k)];
      spectrum_->values(k) = raw_values(src);
      spectrum_->vectors.col(k) = solver.eigenvectors().col(src);
    }
  });
}

const Eigen::VectorXd& SymmetricOperator::eigenvalues() const {
  ensure_spectrum();
  return spectrum_->values;
}

const Eigen::MatrixXd& SymmetricOperator::eigenvectors() const {
  ensure_spectrum();
  return spectrum_->vectors;
}

double SymmetricOperator::spectral_radius() const {
  const auto& v = eigenvalues();
  return v.size() ? std::abs(v(0)) : 0.0;
}

std::size_t SymmetricOperator::rank(double rel_tol) const {
  const auto& v = eigenvalues();
  const double rho = spectral_radius();
  if (rho == 0.0) return 0;
  std::size_t r = 0;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (std::abs(v(k)) > rel_tol * rho) ++r;
  }
  return r;
}

SymmetricOperator SymmetricOperator::scaled(double c) const {
  if (!std::isfinite(c)) throw InputError("scale factor must be finite");
  return SymmetricOperator(c * a_);
}

SymmetricOperator SymmetricOperator::normalized() const {
  const double tr = frobenius_sq();
  if (!(tr > 0.0)) throw InputError("cannot normalize the zero operator");
  return scaled(1.0 / std::sqrt(tr));
}

EigenDecomposition eigendecompose(const SymmetricOperator& op) {
  return {op.eigenvalues(), op.eigenvectors()};
}

std::vector<double> elementary_symmetric(std::span<const double> values, std::size_t q_max) {
  std::vector<double> e(q_max + 1, 0.0);
  e[0] = 1.0;
  std::size_t seen = 0;
  for (double v : values) {
    ++seen;
    for (std::size_t j = std::min(seen, q_max); j >= 1; --j) e[j] += v * e[j - 1];
  }
  return e;
}

std::vector<LogScalar> elementary_symmetric_log(std::span<const double> values,
                                                std::size_t q_max) {
  std::vector<LogScalar> e(q_max + 1, LogScalar::zero());
  e[0] = LogScalar::one();
  std::size_t seen = 0;
  for (double v : values) {
    ++seen;
    const LogScalar lv = LogScalar::from_double(v);
    if (lv.is_zero()) continue;
    for (std::size_t j = std::min(seen, q_max); j >= 1; --j) e[j] = e[j] + lv * e[j - 1];
  }
  return e;
}

namespace {

void check_q_range(const SymmetricOperator& op, std::size_t q_max) {
  if (q_max < 1 || q_max > op.dimension()) {
    throw InputError("q_max must lie in [1, n] = [1, " + std::to_string(op.dimension()) +
                     "], got " + std::to_string(q_max));
  }
}

std::vector<double> squared_eigenvalues(const SymmetricOperator& op) {
  const auto& v = op.eigenvalues();
  std::vector<double> sq(static_cast<std::size_t>(v.size()));
  for (Eigen::Index k = 0; k < v.size(); ++k) sq[static_cast<std::size_t>(k)] = v(k) * v(k);
  return sq;
}

}  // namespace

std::vector<double> spectral_remainders(const SymmetricOperator& op, std::size_t q_max,
                                        RemainderConvention convention) {
  check_q_range(op, q_max);
  std::vector<double> e = elementary_symmetric(squared_eigenvalues(op), q_max);
  if (convention == RemainderConvention::tuple) {
    double factorial = 1.0;
    for (std::size_t q = 1; q <= q_max; ++q) {
      factorial *= static_cast<double>(q);
      e[q] *= factorial;
    }
  }
  return e;
}

std::vector<LogScalar> spectral_remainders_log(const SymmetricOperator& op, std::size_t q_max) {
  check_q_range(op, q_max);
  return elementary_symmetric_log(squared_eigenvalues(op), q_max);
}

double minor_determinant(const Eigen::MatrixXd& a, std::span<const std::size_t> rows,
                         std::span<const std::size_t> cols) {
  const std::size_t q = rows.size();
  if (cols.size() != q) throw InputError("minor must be square");
  if (q == 0) return 1.0;
  std::vector<double> m(q * q);
  for (std::size_t r = 0; r < q; ++r) {
    for (std::size_t c = 0; c < q; ++c) {
      m[r * q + c] = a(static_cast<Eigen::Index>(rows[r]), static_cast<Eigen::Index>(cols[c]));
    }
  }
  double det = 1.0;
  for (std::size_t k = 0; k < q; ++k) {
    std::size_t pivot = k;
    double best = std::abs(m[k * q + k]);
    for (std::size_t r = k + 1; r < q; ++r) {
      if (std::abs(m[r * q + k]) > best) {
        best = std::abs(m[r * q + k]);
        pivot = r;
      }
    }
    if (best == 0.0) return 0.0;
    if (pivot != k) {
      for (std::size_t c = 0; c < q; ++c) std::swap(m[k * q + c], m[pivot * q + c]);
      det = -det;
    }
    const double d = m[k * q + k];
    det *= d;
    for (std::size_t r = k + 1; r < q; ++r) {
      const double f = m[r * q + k] / d;
      if (f == 0.0) continue;
      for (std::size_t c = k + 1; c < q; ++c) m[r * q + c] -= f * m[k * q + c];
    }
  }
  return det;
}

double cauchy_binet_oracle(const SymmetricOperator& op, std::size_t q) {
  const std::size_t n = op.dimension();
  if (n > 12 || q > 6) {
    throw SizeGuardError("cauchy_binet_oracle is limited to n <= 12 and q <= 6 (got n=" +
                         std::to_string(n) + ", q=" + std::to_string(q) + ")");
  }
  if (q == 0) return 1.0;
  const auto subsets = all_subsets(n, q);
  std::vector<std::vector<std::size_t>> decoded;
  decoded.reserve(subsets.size());
  for (SubsetCode s : subsets) decoded.push_back(decode_subset(s));
  double total = 0.0;
  for (const auto& rows : decoded) {
    for (const auto& cols : decoded) {
      const double d = minor_determinant(op.entries(), rows, cols);
      total += d * d;
    }
  }
  return total;
}

Influences influences(const SymmetricOperator& op) {
  Influences out;
  const auto& a = op.entries();
  out.per_index.resize(op.dimension());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    out.per_index[static_cast<std::size_t>(i)] = a.row(i).squaredNorm();
    out.max = std::max(out.max, out.per_index[static_cast<std::size_t>(i)]);
  }
  return out;
}

Eigen::MatrixXd extract(const SymmetricOperator& op, std::span<const std::size_t> rows,
                        std::span<const std::size_t> cols) {
  const std::size_t n = op.dimension();
  for (std::size_t i : rows) {
    if (i >= n) throw InputError("row index " + std::to_string(i) + " out of range");
  }
  for (std::size_t j : cols) {
    if (j >= n) throw InputError("column index " + std::to_string(j) + " out of range");
  }
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = op(rows[r], cols[c]);
    }
  }
  return out;
}

SpectrumSummary summarize(const SymmetricOperator& op, std::size_t q_max) {
  SpectrumSummary s;
  s.frobenius_sq = op.frobenius_sq();
  s.spectral_radius = op.spectral_radius();
  s.remainders_set = spectral_remainders(op, q_max, RemainderConvention::set);
  s.remainders_tuple = spectral_remainders(op, q_max, RemainderConvention::tuple);
  auto inf = influences(op);
  s.influences = std::move(inf.per_index);
  s.max_influence = inf.max;
  return s;
}

SpectralRadiusBounds spectral_radius_bounds_check(const SymmetricOperator& op, std::size_t q,
                                                  double tolerance) {
  const double tr = op.frobenius_sq();
  if (std::abs(tr - 1.0) > 1e-10) {
    throw InputError("spectral_radius_bounds_check needs tr A^2 = 1, got " + std::to_string(tr));
  }
  SpectralRadiusBounds b;
  b.q = q;
  b.remainder_tuple = spectral_remainders(op, q, RemainderConvention::tuple)[q];
  const double rho = op.spectral_radius();
  b.rho_sq = rho * rho;
  for (std::size_t k = 1; k < q; ++k) {
    const double factor = 1.0 - static_cast<double>(k) * b.rho_sq;
    if (factor < 0.0) b.product_applicable = false;
    b.product_bound *= factor;
  }
  b.remainder_bound_holds =
      !b.product_applicable || b.remainder_tuple >= b.product_bound - tolerance;
  b.tau = influences(op).max;
  b.influence_bound_holds = b.tau <= b.rho_sq + tolerance;
  return b;
}

AdditivityCheck additivity_check(const SymmetricOperator& a, const SymmetricOperator& b,
                                 double tolerance) {
  if (a.dimension() != b.dimension()) throw InputError("additivity check needs equal dimensions");
  const Eigen::MatrixXd& x = a.entries();
  const Eigen::MatrixXd& y = b.entries();
  if ((x.array() * y.array()).abs().maxCoeff() > 0.0) {
    throw InputError("additivity check needs entrywise-disjoint supports");
  }
  AdditivityCheck c;
  c.p_max = std::min(a.rank(), b.rank());
  if (c.p_max == 0) return c;
  const SymmetricOperator sum(x + y);
  c.combined = spectral_remainders(sum, c.p_max);
  c.first = spectral_remainders(a, c.p_max);
  c.second = spectral_remainders(b, c.p_max);
  for (std::size_t p = 1; p <= c.p_max; ++p) {
    const double gap = c.combined[p] - c.first[p] - c.second[p];
    c.worst_gap = std::min(c.worst_gap, gap);
    if (gap < -tolerance) c.holds = false;
  }
  return c;
}

}  // namespace qfreg
