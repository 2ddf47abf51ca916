#include "qfreg/clt_experiment.hpp"

#include <cmath>
#include <limits>

#include "qfreg/error.hpp"
#include "qfreg/estimation.hpp"
#include "qfreg/parallel.hpp"
#include "qfreg/random.hpp"

namespace qfreg {

std::string to_string(OperatorFamily f) {
  switch (f) {
    case OperatorFamily::banded: return "banded";
    case OperatorFamily::wigner: return "wigner";
    case OperatorFamily::custom: return "custom";
  }
  return "?";
}

OperatorFamily operator_family_from_string(const std::string& s) {
  if (s == "banded") return OperatorFamily::banded;
  if (s == "wigner") return OperatorFamily::wigner;
  if (s == "custom" || s == "custom-list") return OperatorFamily::custom;
  throw InputError("unknown operator family '" + s + "'");
}

SymmetricOperator banded_operator(std::size_t n) {
  if (n < 2) throw InputError("banded operator needs n >= 2");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const double v = 1.0 / std::sqrt(2.0 * static_cast<double>(n - 1));
  for (Eigen::Index i = 0; i + 1 < a.rows(); ++i) {
    a(i, i + 1) = v;
    a(i + 1, i) = v;
  }
  return SymmetricOperator(std::move(a));
}

SymmetricOperator wigner_operator(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw InputError("wigner operator needs n >= 2");
  const auto N = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(N, N);
  const double v = 1.0 / std::sqrt(static_cast<double>(n) * static_cast<double>(n - 1));
  rng::CounterStream s(rng::derive_seed(seed, n), rng::StreamTag::operator_family, 0, 0);
  for (Eigen::Index i = 0; i < N; ++i) {
    for (Eigen::Index j = i + 1; j < N; ++j) {
      const double e = (s.next_u32() & 1u) ? v : -v;
      a(i, j) = e;
      a(j, i) = e;
    }
  }
  return SymmetricOperator(std::move(a)).normalized();
}

namespace {

constexpr std::size_t kCltBlock = 2048;

struct MomentSums {
  double s2 = 0.0, s4 = 0.0, s8 = 0.0;
  std::size_t count = 0;
};

std::vector<double> sample_impl(const SymmetricOperator& a, const DirichletVariable& law,
                                std::size_t M, std::uint64_t seed, bool standardize,
                                MomentSums* moments) {
  const std::size_t n = a.dimension();
  if (M == 0) throw InputError("need at least one sample");
  if (M > 0xffffffffu || n > 0xffffffffu) throw InputError("sample dimensions exceed 2^32");
  if (!law.has_moments()) throw InputError("law '" + law.name() + "' has no finite moments");
  if (standardize && a.entries().diagonal().cwiseAbs().maxCoeff() > 0.0) {
    throw InputError("quadratic-form experiment needs a vanishing diagonal");
  }
  const double fro = a.frobenius_sq();
  if (!(fro > 0.0)) throw InputError("operator is zero");
  const double scale = standardize ? 1.0 / std::sqrt(2.0 * fro) : 1.0;
  const double mu = law.mean();
  const double sd = std::sqrt(law.variance());
  const Eigen::MatrixXd& A = a.entries();

  std::vector<double> q(M);
  const std::size_t chunks = chunk_count(M, kCltBlock);
  std::vector<MomentSums> partial(chunks);
  parallel_chunks(M, kCltBlock, [&](std::size_t c, std::size_t begin, std::size_t end) {
    const auto cols = static_cast<Eigen::Index>(end - begin);
    Eigen::MatrixXd x(static_cast<Eigen::Index>(n), cols);
    MomentSums& ms = partial[c];
    for (Eigen::Index col = 0; col < cols; ++col) {
      for (std::size_t i = 0; i < n; ++i) {
        const double v = (draw_one(law, seed, begin + static_cast<std::size_t>(col), i).x - mu) / sd;
        x(static_cast<Eigen::Index>(i), col) = v;
        const double v2 = v * v, v4 = v2 * v2;
        ms.s2 += v2;
        ms.s4 += v4;
        ms.s8 += v4 * v4;
      }
    }
    ms.count = n * (end - begin);
    const Eigen::MatrixXd ax = A * x;
    for (Eigen::Index col = 0; col < cols; ++col) {
      q[begin + static_cast<std::size_t>(col)] = scale * x.col(col).dot(ax.col(col));
    }
  });
  if (moments) {
    for (const auto& p : partial) {
      moments->s2 += p.s2;
      moments->s4 += p.s4;
      moments->s8 += p.s8;
      moments->count += p.count;
    }
  }
  return q;
}

}  // namespace

std::vector<double> sample_quadratic_form(const SymmetricOperator& a, const DirichletVariable& law,
                                          std::size_t M, std::uint64_t seed, bool standardize) {
  return sample_impl(a, law, M, seed, standardize, nullptr);
}

CltReport run_clt_experiment(const CltOptions& options, const DirichletVariable& law,
                             const std::vector<SymmetricOperator>& custom) {
  CltReport r;
  r.options = options;
  r.law = law.name();
  std::vector<SymmetricOperator> ops;
  if (options.family == OperatorFamily::custom) {
    if (custom.empty()) throw InputError("custom family needs at least one operator");
    ops = custom;
    r.options.n_list.clear();
    for (const auto& op : ops) r.options.n_list.push_back(op.dimension());
  } else {
    if (options.n_list.empty()) throw InputError("n_list is empty");
    for (std::size_t n : options.n_list) {
      ops.push_back(options.family == OperatorFamily::banded ? banded_operator(n)
                                                             : wigner_operator(n, options.seed));
    }
  }
  const std::vector<double> grid = uniform_grid(options.xi_max, options.xi_points);

  MomentSums moments;
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const SymmetricOperator& op = ops[k];
    const std::vector<double> q =
        sample_impl(op, law, options.M, options.seed, true, k == 0 ? &moments : nullptr);
    CltRow row;
    row.n = op.dimension();
    const SymmetricOperator nop = op.normalized();
    row.rho = nop.spectral_radius();
    row.tau = influences(nop).max;
    row.ks = ks_distance(q, standard_normal_cdf);
    const EcfTable t = ecf(q, grid);
    for (double s : options.s_list) {
      row.profiles.push_back(fourier_sobolev_norm(t, s, std::numeric_limits<double>::infinity()).value);
    }
    r.rows.push_back(std::move(row));
  }

  const double N = static_cast<double>(moments.count);
  r.law_fourth_moment = moments.s4 / N;
  const double var4 = std::max(0.0, moments.s8 / N - r.law_fourth_moment * r.law_fourth_moment);
  r.fourth_moment_band = 3.0 * std::sqrt(var4 / N);
  r.leptokurtic = r.law_fourth_moment >= 3.0 - r.fourth_moment_band;
  if (!r.leptokurtic) {
    r.warnings.push_back("law '" + r.law + "' is not leptokurtic (empirical fourth moment " +
                         std::to_string(r.law_fourth_moment) +
                         "); spectral-radius decay is not implied by normal convergence");
  }
  return r;
}

}  // namespace qfreg
