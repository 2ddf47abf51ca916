#include "qfreg/laws.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qfreg/error.hpp"
#include "qfreg/parallel.hpp"
#include "qfreg/random.hpp"

namespace qfreg {

std::string to_string(LawKind kind) {
  switch (kind) {
    case LawKind::gaussian: return "gaussian";
    case LawKind::beta: return "beta";
    case LawKind::gamma: return "gamma";
    case LawKind::phi_gaussian: return "phi_gaussian";
    case LawKind::chaos: return "chaos";
  }
  return "unknown";
}

DirichletVariable DirichletVariable::gaussian() {
  DirichletVariable v;
  v.kind_ = LawKind::gaussian;
  v.mean_ = 0.0;
  v.variance_ = 1.0;
  return v;
}

DirichletVariable DirichletVariable::beta(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    throw InputError("Beta parameters must be positive and finite");
  }
  DirichletVariable v;
  v.kind_ = LawKind::beta;
  v.alpha_ = alpha;
  v.beta_ = beta;
  const double s = alpha + beta;
  v.mean_ = (beta - alpha) / s;
  v.variance_ = 4.0 * alpha * beta / (s * s * (s + 1.0));
  return v;
}

DirichletVariable DirichletVariable::gamma(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InputError("Gamma shape must be positive");
  DirichletVariable v;
  v.kind_ = LawKind::gamma;
  v.alpha_ = alpha;
  v.mean_ = alpha;
  v.variance_ = alpha;
  return v;
}

DirichletVariable DirichletVariable::phi_gaussian(SmoothMap map, std::optional<double> theta,
                                                  std::optional<double> mean,
                                                  std::optional<double> variance) {
  if (!map.value || !map.first || !map.second) {
    throw InputError("phi_gaussian needs a map with value and two derivatives");
  }
  if (theta && !(*theta > 0.0)) throw InputError("declared theta must be positive");
  DirichletVariable v;
  v.kind_ = LawKind::phi_gaussian;
  v.mean_ = mean ? mean : map.gaussian_mean;
  v.variance_ = variance ? variance : map.gaussian_variance;
  v.map_ = std::move(map);
  v.theta_ = theta;
  return v;
}

DirichletVariable DirichletVariable::chaos(std::vector<DirichletVariable> base,
                                           MultilinearPolynomial poly) {
  if (base.empty()) throw InputError("chaos needs at least one base law");
  if (base.size() != 1 && base.size() != poly.variable_count()) {
    throw InputError("chaos needs one base law or one per polynomial variable");
  }
  for (const auto& b : base) {
    if (b.kind() == LawKind::chaos) throw InputError("nested chaos laws are not supported");
    if (!b.has_moments()) throw InputError("chaos base laws need known moments");
  }
  DirichletVariable v;
  v.kind_ = LawKind::chaos;
  v.mean_ = poly.constant();
  v.variance_ = poly.variance();
  v.chaos_ = std::make_shared<const ChaosData>(ChaosData{std::move(base), std::move(poly)});
  return v;
}

std::string DirichletVariable::name() const {
  switch (kind_) {
    case LawKind::gaussian: return "gaussian";
    case LawKind::beta:
      return "beta(" + std::to_string(alpha_) + "," + std::to_string(beta_) + ")";
    case LawKind::gamma: return "gamma(" + std::to_string(alpha_) + ")";
    case LawKind::phi_gaussian: return "phi_gaussian(" + map_.name + ")";
    case LawKind::chaos:
      return "chaos(deg " + std::to_string(chaos_->poly.degree()) + ", " +
             std::to_string(chaos_->poly.variable_count()) + " vars)";
  }
  return "unknown";
}

double DirichletVariable::mean() const {
  if (!mean_) throw InputError("law " + name() + " has no known mean; supply it explicitly");
  return *mean_;
}

double DirichletVariable::variance() const {
  if (!variance_) {
    throw InputError("law " + name() + " has no known variance; supply it explicitly");
  }
  return *variance_;
}

const std::vector<DirichletVariable>& DirichletVariable::chaos_base() const {
  if (kind_ != LawKind::chaos) throw InputError("not a chaos law");
  return chaos_->base;
}

const MultilinearPolynomial& DirichletVariable::chaos_poly() const {
  if (kind_ != LawKind::chaos) throw InputError("not a chaos law");
  return chaos_->poly;
}

const DirichletVariable& DirichletVariable::chaos_base_for(std::size_t variable) const {
  const auto& base = chaos_base();
  return base.size() == 1 ? base[0] : base.at(variable);
}

bool DirichletVariable::in_support(double x) const {
  if (!std::isfinite(x)) return false;
  switch (kind_) {
    case LawKind::beta: return x >= -1.0 && x <= 1.0;
    case LawKind::gamma: return x >= 0.0;
    default: return true;
  }
}

LocalCoefficients local_coefficients(const DirichletVariable& v, double x,
                                     std::optional<double> latent) {
  if (!v.in_support(x)) {
    throw InputError("x = " + std::to_string(x) + " lies outside the support of " + v.name());
  }
  switch (v.kind()) {
    case LawKind::gaussian: return {1.0, 0.0, -x};
    case LawKind::beta: {
      const double a = v.alpha(), b = v.beta_param();
      return {(1.0 - x) * (1.0 + x), -2.0 * x, -(a + b) * x - (a - b)};
    }
    case LawKind::gamma: return {x, 1.0, v.alpha() - x};
    case LawKind::phi_gaussian: {
      double t;
      if (latent) {
        t = *latent;
      } else if (v.map().inverse) {
        t = v.map().inverse(x);
      } else {
        throw InputError("phi_gaussian needs the latent Gaussian point (map has no inverse)");
      }
      const double d1 = v.map().first(t);
      const double d2 = v.map().second(t);
      return {d1 * d1, 2.0 * d2, d2 - t * d1};
    }
    case LawKind::chaos:
      throw InputError("the chaos generator is not available pointwise");
  }
  return {};
}

LocalCoefficients standardized_coefficients(const DirichletVariable& v, double x_std,
                                            std::optional<double> latent) {
  const double sd = std::sqrt(v.variance());
  const auto c = local_coefficients(v, v.mean() + sd * x_std, latent);
  return {c.gamma / (sd * sd), c.gamma_prime / sd, c.drift / sd};
}

double carre_du_champ(const DirichletVariable& v, double x, std::optional<double> latent) {
  return local_coefficients(v, x, latent).gamma;
}

double chaos_carre_du_champ(const DirichletVariable& v, std::span<const double> base_std,
                            std::span<const double> base_latent) {
  const auto& p = v.chaos_poly();
  const auto grad = p.gradient(base_std);
  double total = 0.0;
  for (std::size_t l = 0; l < p.variable_count(); ++l) {
    if (grad[l] == 0.0) continue;
    std::optional<double> lat;
    if (l < base_latent.size()) lat = base_latent[l];
    total += grad[l] * grad[l] * standardized_coefficients(v.chaos_base_for(l), base_std[l], lat).gamma;
  }
  return total;
}

double generator_apply(const DirichletVariable& v, const SmoothMap& u, double x,
                       std::optional<double> latent) {
  const auto c = local_coefficients(v, x, latent);
  return c.gamma * u.second(x) + c.drift * u.first(x);
}

double gamma_of_gamma(const DirichletVariable& v, double x, std::optional<double> latent) {
  const auto c = local_coefficients(v, x, latent);
  return c.gamma * c.gamma_prime * c.gamma_prime;
}

namespace {

Draw draw_raw(const DirichletVariable& v, rng::CounterStream& s) {
  switch (v.kind()) {
    case LawKind::gaussian: return {s.normal(), 1.0, 0.0};
    case LawKind::beta: {
      // x = 2Y - 1 with Y = G_b / (G_a + G_b); 1 - x^2 = 4 G_a G_b / (G_a + G_b)^2
      // keeps full relative precision near both endpoints.
      const double ga = s.gamma(v.alpha());
      const double gb = s.gamma(v.beta_param());
      const double sum = ga + gb;
      return {(gb - ga) / sum, 4.0 * ga * gb / (sum * sum), 0.0};
    }
    case LawKind::gamma: {
      const double g = s.gamma(v.alpha());
      return {g, g, 0.0};
    }
    case LawKind::phi_gaussian: {
      const double t = s.normal();
      const double d1 = v.map().first(t);
      return {v.map().value(t), d1 * d1, t};
    }
    case LawKind::chaos: {
      const auto& p = v.chaos_poly();
      std::vector<double> base(p.variable_count()), gam(p.variable_count());
      for (std::size_t l = 0; l < p.variable_count(); ++l) {
        const auto& b = v.chaos_base_for(l);
        const Draw d = draw_raw(b, s);
        const double sd = std::sqrt(b.variance());
        base[l] = (d.x - b.mean()) / sd;
        gam[l] = d.gamma / (sd * sd);
      }
      const auto grad = p.gradient(base);
      double g = 0.0;
      for (std::size_t l = 0; l < base.size(); ++l) g += grad[l] * grad[l] * gam[l];
      return {p.evaluate(base), g, 0.0};
    }
  }
  return {};
}

}  // namespace

Draw draw_one(const DirichletVariable& v, std::uint64_t seed, std::size_t m, std::size_t i) {
  rng::CounterStream s(seed, rng::StreamTag::sample, static_cast<std::uint32_t>(m),
                       static_cast<std::uint32_t>(i));
  return draw_raw(v, s);
}

SampleBatch sample_batch(const DirichletVariable& v, std::size_t n, std::size_t M,
                         std::uint64_t seed, bool standardize) {
  if (M > 0xffffffffu || n > 0xffffffffu) throw InputError("batch dimensions exceed 2^32");
  if (static_cast<double>(M) * static_cast<double>(n) > 2.5e8) {
    throw InputError("batch of " + std::to_string(M) + " x " + std::to_string(n) +
                     " exceeds the in-memory budget");
  }
  double mu = 0.0, sd = 1.0;
  if (standardize) {
    mu = v.mean();
    sd = std::sqrt(v.variance());
    if (!(sd > 0.0)) throw InputError("cannot standardize a degenerate law");
  }
  SampleBatch b;
  b.M = M;
  b.n = n;
  b.seed = seed;
  b.standardized = standardize;
  b.x.resize(M * n);
  b.gamma.resize(M * n);
  const bool keep_latent = v.kind() == LawKind::phi_gaussian;
  if (keep_latent) b.latent.resize(M * n);
  parallel_chunks(M, 4096, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t m = begin; m < end; ++m) {
      for (std::size_t i = 0; i < n; ++i) {
        const Draw d = draw_one(v, seed, m, i);
        b.x[m * n + i] = (d.x - mu) / sd;
        b.gamma[m * n + i] = d.gamma / (sd * sd);
        if (keep_latent) b.latent[m * n + i] = d.latent;
      }
    }
  });
  return b;
}

LogScalar smallball_exponent(const DirichletVariable& v) {
  switch (v.kind()) {
    case LawKind::gaussian: return LogScalar::infinity();
    case LawKind::beta:
      return LogScalar::from_double(std::min(v.alpha(), v.beta_param()) * (1.0 - kSmallBallSlack));
    case LawKind::gamma: return LogScalar::from_double(v.alpha() * (1.0 - kSmallBallSlack));
    case LawKind::phi_gaussian:
      if (!v.declared_theta()) {
        throw InputError("phi_gaussian law needs a declared small-ball exponent theta");
      }
      return LogScalar::from_double(*v.declared_theta());
    case LawKind::chaos: {
      LogScalar theta = LogScalar::one();
      for (const auto& b : v.chaos_base()) theta = min(theta, smallball_exponent(b));
      const std::size_t d = std::max<std::size_t>(1, 2 * v.chaos_poly().degree());
      return theta_recursion(theta, d, ThetaMode::recursion);
    }
  }
  return LogScalar::zero();
}

SmallBallProbability smallball_gamma_probability(const DirichletVariable& v, double eps,
                                                 std::size_t M, std::uint64_t seed,
                                                 SmallBallMethod method) {
  if (!(eps > 0.0)) throw InputError("eps must be positive");
  if (M < 2) throw InputError("need at least two samples");
  if (method == SmallBallMethod::conditional && v.kind() != LawKind::beta &&
      v.kind() != LawKind::gamma) {
    throw InputError("conditional small-ball estimator needs a Beta or Gamma law");
  }
  constexpr std::size_t kChunk = 1 << 15;
  const std::size_t chunks = chunk_count(M, kChunk);
  std::vector<double> sums(chunks, 0.0), sq(chunks, 0.0);

  // Beta tails: 4Y(1-Y) <= eps iff Y <= t0 or Y >= 1 - t0, with
  // Y = G_b/(G_a+G_b). Each tail reduces to a ratio G/G' <= r.
  const double t0 = 0.5 * eps / (1.0 + std::sqrt(std::max(0.0, 1.0 - eps)));
  const double r = t0 / (1.0 - t0);

  parallel_chunks(M, kChunk, [&](std::size_t c, std::size_t begin, std::size_t end) {
    double s = 0.0, s2 = 0.0;
    for (std::size_t m = begin; m < end; ++m) {
      double val;
      if (method == SmallBallMethod::naive) {
        val = draw_one(v, seed, m, 0).gamma <= eps ? 1.0 : 0.0;
      } else {
        rng::CounterStream st(seed, rng::StreamTag::auxiliary, static_cast<std::uint32_t>(m), 0);
        if (v.kind() == LawKind::gamma) {
          const double a = v.alpha();
          const double g = st.gamma(a + 1.0);
          val = std::min(1.0, std::pow(eps / g, a));
        } else if (eps >= 1.0) {
          val = 1.0;
        } else {
          const double a = v.alpha(), b = v.beta_param();
          // lower tail: G_b <= r G_a with G_b = G_{b+1} U^{1/b}
          const double ga = st.gamma(a);
          const double gb1 = st.gamma(b + 1.0);
          const double lower = std::min(1.0, std::pow(r * ga / gb1, b));
          // upper tail: G_a <= r G_b with G_a = G_{a+1} U^{1/a}
          const double gb = st.gamma(b);
          const double ga1 = st.gamma(a + 1.0);
          const double upper = std::min(1.0, std::pow(r * gb / ga1, a));
          val = lower + upper;
        }
      }
      s += val;
      s2 += val * val;
    }
    sums[c] = s;
    sq[c] = s2;
  });
  double s = 0.0, s2 = 0.0;
  for (std::size_t c = 0; c < chunks; ++c) {
    s += sums[c];
    s2 += sq[c];
  }
  const double mf = static_cast<double>(M);
  const double mean = s / mf;
  const double var = std::max(0.0, (s2 / mf - mean * mean) * mf / (mf - 1.0));
  return {eps, mean, std::sqrt(var / mf), M};
}

SlopeFit loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InputError("slope fit needs >= 2 aligned points");
  const double k = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw InputError("log-log fit needs positive values");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = k * sxx - sx * sx;
  if (denom == 0.0) throw InputError("slope fit needs distinct x values");
  const double slope = (k * sxy - sx * sy) / denom;
  return {slope, (sy - slope * sx) / k};
}

}  // namespace qfreg
