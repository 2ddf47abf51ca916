#include "qfreg/bouleau.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qfreg/error.hpp"
#include "qfreg/parallel.hpp"
#include "qfreg/random.hpp"

namespace qfreg {

namespace fields {

SmoothField coordinate(std::size_t n, std::size_t i) {
  if (i >= n) throw InputError("coordinate index out of range");
  const auto ni = static_cast<Eigen::Index>(n);
  const auto ii = static_cast<Eigen::Index>(i);
  return {"x" + std::to_string(i), n, [i](std::span<const double> x) { return x[i]; },
          [ni, ii](std::span<const double>) {
            Eigen::VectorXd g = Eigen::VectorXd::Zero(ni);
            g(ii) = 1.0;
            return g;
          },
          [ni](std::span<const double>) { return Eigen::MatrixXd::Zero(ni, ni).eval(); }};
}

SmoothField linear(std::vector<double> weights) {
  if (weights.empty()) throw InputError("linear field needs at least one weight");
  const auto ni = static_cast<Eigen::Index>(weights.size());
  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(weights.data(), ni);
  return {"linear", weights.size(),
          [w](std::span<const double> x) {
            double s = 0.0;
            for (Eigen::Index i = 0; i < w.size(); ++i) s += w(i) * x[static_cast<std::size_t>(i)];
            return s;
          },
          [w](std::span<const double>) { return w; },
          [ni](std::span<const double>) { return Eigen::MatrixXd::Zero(ni, ni).eval(); }};
}

SmoothField coordinate_square(std::size_t n, std::size_t i) {
  if (i >= n) throw InputError("coordinate index out of range");
  const auto ni = static_cast<Eigen::Index>(n);
  const auto ii = static_cast<Eigen::Index>(i);
  return {"x" + std::to_string(i) + "^2", n, [i](std::span<const double> x) { return x[i] * x[i]; },
          [ni, ii, i](std::span<const double> x) {
            Eigen::VectorXd g = Eigen::VectorXd::Zero(ni);
            g(ii) = 2.0 * x[i];
            return g;
          },
          [ni, ii](std::span<const double>) {
            Eigen::MatrixXd h = Eigen::MatrixXd::Zero(ni, ni);
            h(ii, ii) = 2.0;
            return h;
          }};
}

SmoothField quadratic_form(const SymmetricOperator& a) {
  const Eigen::MatrixXd m = a.entries();
  const auto n = static_cast<std::size_t>(m.rows());
  auto as_vec = [n](std::span<const double> x) {
    return Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(n));
  };
  return {"quadratic_form", n,
          [m, as_vec](std::span<const double> x) {
            const auto v = as_vec(x);
            return v.dot(m * v);
          },
          [m, as_vec](std::span<const double> x) { return (2.0 * (m * as_vec(x))).eval(); },
          [m](std::span<const double>) { return (2.0 * m).eval(); }};
}

SmoothField sine_chain(std::size_t n) {
  if (n == 0) throw InputError("sine_chain needs n >= 1");
  const auto ni = static_cast<Eigen::Index>(n);
  return {"sine_chain", n,
          [n](std::span<const double> x) {
            double v = std::sin(x[0]);
            for (std::size_t i = 0; i + 1 < n; ++i) v += x[i] * x[i + 1];
            return v;
          },
          [n, ni](std::span<const double> x) {
            Eigen::VectorXd g = Eigen::VectorXd::Zero(ni);
            g(0) = std::cos(x[0]);
            for (std::size_t i = 0; i + 1 < n; ++i) {
              g(static_cast<Eigen::Index>(i)) += x[i + 1];
              g(static_cast<Eigen::Index>(i + 1)) += x[i];
            }
            return g;
          },
          [n, ni](std::span<const double> x) {
            Eigen::MatrixXd h = Eigen::MatrixXd::Zero(ni, ni);
            h(0, 0) = -std::sin(x[0]);
            for (std::size_t i = 0; i + 1 < n; ++i) {
              const auto a = static_cast<Eigen::Index>(i);
              h(a, a + 1) = 1.0;
              h(a + 1, a) = 1.0;
            }
            return h;
          }};
}

}  // namespace fields

namespace {

void check_batch(const SmoothField& f, const SampleBatch& batch) {
  if (batch.n != f.n) {
    throw InputError("batch has " + std::to_string(batch.n) + " coordinates, functional needs " +
                     std::to_string(f.n));
  }
}

double scaled_error(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

double standard_normal_cdf(double t) { return 0.5 * std::erfc(-t / std::numbers::sqrt2); }

}  // namespace

DerivativeCheck check_derivatives(const CylinderFunctional& F, std::uint64_t seed,
                                  std::size_t points, double rel_tol) {
  const std::size_t n = F.f.n;
  const SampleBatch batch = sample_batch(F.law, n, points, seed, F.law.has_moments());
  DerivativeCheck out;
  std::vector<double> y(n);
  for (std::size_t m = 0; m < points; ++m) {
    const auto x = batch.row(m);
    const Eigen::VectorXd g = F.f.gradient(x);
    const Eigen::MatrixXd h = F.f.hessian(x);
    for (std::size_t i = 0; i < n; ++i) {
      const double step = 1e-5 * std::max(1.0, std::abs(x[i]));
      std::copy(x.begin(), x.end(), y.begin());
      y[i] = x[i] + step;
      const double fp = F.f.value(y);
      const Eigen::VectorXd gp = F.f.gradient(y);
      y[i] = x[i] - step;
      const double fm = F.f.value(y);
      const Eigen::VectorXd gm = F.f.gradient(y);
      const auto ii = static_cast<Eigen::Index>(i);
      out.max_gradient_error =
          std::max(out.max_gradient_error, scaled_error(g(ii), (fp - fm) / (2.0 * step)));
      for (std::size_t j = 0; j < n; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        out.max_hessian_error =
            std::max(out.max_hessian_error, scaled_error(h(jj, ii), (gp(jj) - gm(jj)) / (2.0 * step)));
      }
    }
  }
  out.ok = out.max_gradient_error <= rel_tol && out.max_hessian_error <= rel_tol;
  return out;
}

double functional_carre_du_champ(const SmoothField& f, const SampleBatch& batch, std::size_t m) {
  const Eigen::VectorXd g = f.gradient(batch.row(m));
  const auto gam = batch.gamma_row(m);
  double total = 0.0;
  for (std::size_t i = 0; i < batch.n; ++i) {
    total += g(static_cast<Eigen::Index>(i)) * g(static_cast<Eigen::Index>(i)) * gam[i];
  }
  return total;
}

std::vector<double> sharp_G(const CylinderFunctional& F, const SampleBatch& batch,
                            std::uint64_t g_seed) {
  check_batch(F.f, batch);
  std::vector<double> out(batch.M);
  parallel_chunks(batch.M, 1024, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t m = begin; m < end; ++m) {
      const Eigen::VectorXd g = F.f.gradient(batch.row(m));
      double s = 0.0;
      for (std::size_t i = 0; i < batch.n; ++i) {
        const double gam = batch.gamma_at(m, i);
        if (gam < 0.0) throw Error("negative carre du champ in batch");
        rng::CounterStream st(g_seed, rng::StreamTag::bouleau_g, static_cast<std::uint32_t>(m),
                              static_cast<std::uint32_t>(i));
        s += g(static_cast<Eigen::Index>(i)) * std::sqrt(gam) * st.normal();
      }
      out[m] = s;
    }
  });
  return out;
}

CfIdentity conditional_cf_identity(const CylinderFunctional& F, const SampleBatch& batch,
                                   double lambda) {
  check_batch(F.f, batch);
  CfIdentity r;
  r.lhs.resize(batch.M);
  r.rhs.resize(batch.M);
  const double l2 = lambda * lambda;
  for (std::size_t m = 0; m < batch.M; ++m) {
    const Eigen::VectorXd g = F.f.gradient(batch.row(m));
    double prod = 1.0;
    for (std::size_t i = 0; i < batch.n; ++i) {
      const double c = g(static_cast<Eigen::Index>(i)) * std::sqrt(batch.gamma_at(m, i));
      prod *= std::exp(-0.5 * l2 * c * c);
    }
    r.lhs[m] = prod;
    r.rhs[m] = std::exp(-0.5 * l2 * functional_carre_du_champ(F.f, batch, m));
    r.max_abs_gap = std::max(r.max_abs_gap, std::abs(r.lhs[m] - r.rhs[m]));
    r.lhs_mean += r.lhs[m];
    r.rhs_mean += r.rhs[m];
  }
  if (batch.M) {
    r.lhs_mean /= static_cast<double>(batch.M);
    r.rhs_mean /= static_cast<double>(batch.M);
  }
  return r;
}

double sharp_mixture_ks(const std::vector<double>& sharp, const std::vector<double>& gamma_ff,
                        std::size_t grid_points) {
  const std::size_t M = sharp.size();
  if (M == 0 || gamma_ff.size() != M) throw InputError("sharp and gamma samples must align");
  std::vector<double> s = sharp;
  std::sort(s.begin(), s.end());
  std::vector<double> sd(M);
  for (std::size_t m = 0; m < M; ++m) sd[m] = std::sqrt(std::max(0.0, gamma_ff[m]));

  const std::size_t stride = std::max<std::size_t>(1, M / std::max<std::size_t>(1, grid_points));
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < M; k += stride) idx.push_back(k);
  if (idx.back() != M - 1) idx.push_back(M - 1);

  std::vector<double> h(idx.size());
  parallel_chunks(idx.size(), 16, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const double t = s[idx[k]];
      double acc = 0.0;
      for (std::size_t m = 0; m < M; ++m) {
        acc += sd[m] > 0.0 ? standard_normal_cdf(t / sd[m]) : (t >= 0.0 ? 1.0 : 0.0);
      }
      h[k] = acc / static_cast<double>(M);
    }
  });

  const double mf = static_cast<double>(M);
  auto below = [&](double t) {
    return static_cast<double>(std::lower_bound(s.begin(), s.end(), t) - s.begin()) / mf;
  };
  auto at_most = [&](double t) {
    return static_cast<double>(std::upper_bound(s.begin(), s.end(), t) - s.begin()) / mf;
  };
  double ks = h.front();  // t below the smallest sample
  ks = std::max(ks, 1.0 - h.back());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const double t = s[idx[k]];
    ks = std::max({ks, std::abs(at_most(t) - h[k]), std::abs(below(t) - h[k])});
    if (k + 1 < idx.size()) {
      const double tb = s[idx[k + 1]];
      ks = std::max({ks, below(tb) - h[k], h[k + 1] - at_most(t)});
    }
  }
  return ks;
}

std::vector<MarkovRow> markov_smallball_bound(const CylinderFunctional& F, const SampleBatch& batch,
                                              const std::vector<double>& xi_grid) {
  check_batch(F.f, batch);
  std::vector<double> gam(batch.M);
  for (std::size_t m = 0; m < batch.M; ++m) gam[m] = functional_carre_du_champ(F.f, batch, m);
  const double mf = static_cast<double>(batch.M);
  std::vector<MarkovRow> rows;
  for (double xi : xi_grid) {
    if (!(xi >= 0.0)) throw InputError("xi must be nonnegative");
    MarkovRow r;
    r.xi = xi;
    double count = 0.0, lap = 0.0;
    for (double g : gam) {
      if (xi == 0.0 || g < 1.0 / xi) count += 1.0;
      lap += std::exp(-xi * g);
    }
    r.probability = count / mf;
    r.bound = std::numbers::e * lap / mf;
    r.band = 3.0 * std::sqrt(r.probability * (1.0 - r.probability) / mf);
    r.holds = r.probability <= r.bound + r.band;
    rows.push_back(r);
  }
  return rows;
}

GaussianQfCf gaussian_qf_cf(std::span<const double> lambdas, double xi, double rel_tol) {
  GaussianQfCf r;
  r.xi = xi;
  double log2_mod = 0.0;
  std::vector<double> sq;
  for (double l : lambdas) {
    log2_mod -= 0.25 * std::log1p(4.0 * xi * xi * l * l) / std::numbers::ln2;
    sq.push_back(l * l);
  }
  r.modulus_log = LogScalar::from_log2(log2_mod);
  r.modulus = std::exp2(log2_mod);
  if (sq.empty()) return r;
  const auto e = elementary_symmetric_log(sq, sq.size());
  const LogScalar four_xi2 = LogScalar::from_double(4.0 * xi * xi);
  const double slack = std::log2(1.0 + rel_tol);
  for (std::size_t q = 1; q <= sq.size(); ++q) {
    const LogScalar bound = (four_xi2.pow(static_cast<double>(q)) * e[q]).pow(-0.25);
    r.bounds.push_back(bound);
    if (!bound.is_infinite() && log2_mod > bound.log2() + slack) r.bounds_hold = false;
  }
  return r;
}

std::complex<double> gaussian_qf_cf_value(std::span<const double> lambdas, double xi) {
  std::complex<double> v(1.0, 0.0);
  for (double l : lambdas) v /= std::sqrt(std::complex<double>(1.0, -2.0 * xi * l));
  return v;
}

std::vector<double> sample_gaussian_qf(std::span<const double> lambdas, std::size_t M,
                                       std::uint64_t seed) {
  std::vector<double> out(M);
  parallel_chunks(M, 8192, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t m = begin; m < end; ++m) {
      rng::CounterStream st(seed, rng::StreamTag::sample, static_cast<std::uint32_t>(m),
                            static_cast<std::uint32_t>(m >> 32));
      double q = 0.0;
      for (double l : lambdas) {
        const double z = st.normal();
        q += l * z * z;
      }
      out[m] = q;
    }
  });
  return out;
}

QuadraticFunctional::QuadraticFunctional(SymmetricOperator a_in, DirichletVariable law_in,
                                         bool vanishing)
    : a(std::move(a_in)), law(std::move(law_in)), vanishing_diagonal(vanishing) {
  if (vanishing_diagonal) {
    for (std::size_t i = 0; i < a.dimension(); ++i) {
      if (a(i, i) != 0.0) throw InputError("operator flagged with vanishing diagonal has a_ii != 0");
    }
  }
}

SymmetricOperator bouleau_hessian_main_term(const QuadraticFunctional& F, const SampleBatch& batch,
                                            std::size_t m) {
  const std::size_t n = F.dimension();
  if (batch.n != n) throw InputError("batch dimension does not match the operator");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<double> root(n);
  for (std::size_t i = 0; i < n; ++i) root[i] = std::sqrt(batch.gamma_at(m, i));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 2.0 * F.a(i, j) * root[i] * root[j];
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      out(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  }
  return SymmetricOperator(std::move(out), 0.0);
}

std::vector<SymmetricOperator> bouleau_hessian_main_term(const QuadraticFunctional& F,
                                                         const SampleBatch& batch) {
  std::vector<SymmetricOperator> out;
  out.reserve(batch.M);
  for (std::size_t m = 0; m < batch.M; ++m) out.push_back(bouleau_hessian_main_term(F, batch, m));
  return out;
}

NegativeMoment spectral_remainder_negative_moment(const std::vector<SymmetricOperator>& samples,
                                                  std::size_t q, double power) {
  if (samples.empty()) throw InputError("no samples");
  const std::size_t M = samples.size();
  std::vector<double> log2_terms(M);
  std::vector<char> floored(M, 0);
  parallel_chunks(M, 64, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t m = begin; m < end; ++m) {
      const LogScalar r = spectral_remainders_log(samples[m], q)[q];
      double l2 = r.is_zero() ? -INFINITY : r.log2();
      if (l2 < kRemainderFloorLog2) {
        l2 = kRemainderFloorLog2;
        floored[m] = 1;
      }
      log2_terms[m] = -power * l2;
    }
  });
  NegativeMoment out;
  out.samples = M;
  std::size_t nfloor = 0;
  LogScalar sum = LogScalar::zero();
  for (std::size_t m = 0; m < M; ++m) {
    nfloor += static_cast<std::size_t>(floored[m]);
    sum += LogScalar::from_log2(log2_terms[m]);
  }
  if (nfloor == M) {
    throw Error("every sample has R_" + std::to_string(q) +
                " below the 2^-512 floor; the negative moment is likely infinite");
  }
  out.floor_fraction = static_cast<double>(nfloor) / static_cast<double>(M);
  out.estimate_log = sum / LogScalar::from_double(static_cast<double>(M));
  out.estimate = out.estimate_log.to_double();
  return out;
}

std::vector<double> iterated_sharp(const QuadraticFunctional& F, const SampleBatch& batch,
                                   std::uint64_t g_seed, std::uint64_t h_seed,
                                   bool include_diagonal) {
  const std::size_t n = F.dimension();
  if (batch.n != n) throw InputError("batch dimension does not match the operator");
  const Eigen::MatrixXd& a = F.a.entries();
  std::vector<double> out(batch.M);
  parallel_chunks(batch.M, 256, [&](std::size_t, std::size_t begin, std::size_t end) {
    Eigen::VectorXd g(static_cast<Eigen::Index>(n)), h(static_cast<Eigen::Index>(n)),
        hd(static_cast<Eigen::Index>(n)), x(static_cast<Eigen::Index>(n));
    for (std::size_t m = begin; m < end; ++m) {
      for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        rng::CounterStream sg(g_seed, rng::StreamTag::bouleau_g, static_cast<std::uint32_t>(m),
                              static_cast<std::uint32_t>(i));
        rng::CounterStream sh(h_seed, rng::StreamTag::bouleau_h, static_cast<std::uint32_t>(m),
                              static_cast<std::uint32_t>(i));
        const double root = std::sqrt(batch.gamma_at(m, i));
        g(ii) = root * sg.normal();
        h(ii) = root * sh.normal();
        hd(ii) = sh.normal();
        x(ii) = batch.x_at(m, i);
      }
      double v = 2.0 * g.dot(a * h);
      if (include_diagonal) {
        const Eigen::VectorXd grad = 2.0 * (a * x);
        for (std::size_t i = 0; i < n; ++i) {
          const auto ii = static_cast<Eigen::Index>(i);
          std::optional<double> lat;
          if (!batch.latent.empty()) lat = batch.latent[m * n + i];
          const LocalCoefficients c = batch.standardized
                                          ? standardized_coefficients(F.law, x(ii), lat)
                                          : local_coefficients(F.law, x(ii), lat);
          // Gamma_i^{-1/2} Gamma(Gamma_i, Gamma_i)^{1/2} = |d gamma / dx|.
          rng::CounterStream sg(g_seed, rng::StreamTag::bouleau_g, static_cast<std::uint32_t>(m),
                                static_cast<std::uint32_t>(i));
          v += 0.5 * grad(ii) * std::abs(c.gamma_prime) * sg.normal() * hd(ii);
        }
      }
      out[m] = v;
    }
  });
  return out;
}

}  // namespace qfreg
