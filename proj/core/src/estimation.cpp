#include "qfreg/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "qfreg/error.hpp"
#include "qfreg/parallel.hpp"

namespace qfreg {

std::vector<double> uniform_grid(double xi_max, std::size_t points) {
  if (points < 3 || points % 2 == 0) throw InputError("grid needs an odd number >= 3 of points");
  if (!(xi_max > 0.0)) throw InputError("grid half-width must be positive");
  std::vector<double> g(points);
  const std::size_t half = points / 2;
  const double h = xi_max / static_cast<double>(half);
  for (std::size_t k = 0; k <= half; ++k) {
    const double v = k == half ? xi_max : h * static_cast<double>(k);
    g[half + k] = v;
    g[half - k] = -v;
  }
  return g;
}

double EcfTable::modulus(std::size_t k) const { return std::hypot(re[k], im[k]); }

namespace {

constexpr std::size_t kEcfChunk = 4096;

bool is_symmetric_uniform(const std::vector<double>& g) {
  const std::size_t K = g.size();
  if (K < 3 || K % 2 == 0) return false;
  const std::size_t half = K / 2;
  if (g[half] != 0.0) return false;
  const double h = g[half + 1];
  if (!(h > 0.0)) return false;
  for (std::size_t k = 0; k <= half; ++k) {
    if (g[half - k] != -g[half + k]) return false;
    if (std::abs(g[half + k] - h * static_cast<double>(k)) > 1e-12 * std::max(1.0, g.back())) {
      return false;
    }
  }
  return true;
}

}  // namespace

EcfTable ecf(std::span<const double> samples, const std::vector<double>& xi_grid) {
  if (samples.empty()) throw InputError("ecf needs at least one sample");
  for (double v : samples) {
    if (!std::isfinite(v)) throw InputError("ecf samples must be finite");
  }
  const std::size_t M = samples.size();
  const std::size_t K = xi_grid.size();
  EcfTable t;
  t.xi = xi_grid;
  t.re.assign(K, 0.0);
  t.im.assign(K, 0.0);
  t.M = M;
  t.band = 3.0 / std::sqrt(static_cast<double>(M));

  const bool mirrored = is_symmetric_uniform(xi_grid);
  const std::size_t half = K / 2;
  const std::size_t width = mirrored ? half + 1 : K;
  const std::size_t chunks = chunk_count(M, kEcfChunk);
  std::vector<std::vector<std::complex<double>>> partial(chunks);

  parallel_chunks(M, kEcfChunk, [&](std::size_t c, std::size_t begin, std::size_t end) {
    auto& acc = partial[c];
    acc.assign(width, {0.0, 0.0});
    if (mirrored) {
      const double h = xi_grid[half + 1];
      for (std::size_t m = begin; m < end; ++m) {
        const double x = samples[m];
        const std::complex<double> step(std::cos(h * x), std::sin(h * x));
        std::complex<double> w(1.0, 0.0);
        for (std::size_t k = 0; k < width; ++k) {
          acc[k] += w;
          w *= step;
        }
      }
    } else {
      for (std::size_t m = begin; m < end; ++m) {
        const double x = samples[m];
        for (std::size_t k = 0; k < width; ++k) {
          acc[k] += std::complex<double>(std::cos(xi_grid[k] * x), std::sin(xi_grid[k] * x));
        }
      }
    }
  });

  std::vector<std::complex<double>> total(width, {0.0, 0.0});
  for (const auto& acc : partial) {
    for (std::size_t k = 0; k < width; ++k) total[k] += acc[k];
  }
  const double mf = static_cast<double>(M);
  if (mirrored) {
    for (std::size_t k = 0; k <= half; ++k) {
      const std::complex<double> v = total[k] / mf;
      t.re[half + k] = v.real();
      t.im[half + k] = v.imag();
      t.re[half - k] = v.real();
      t.im[half - k] = -v.imag();
    }
    t.re[half] = 1.0;
    t.im[half] = 0.0;
  } else {
    for (std::size_t k = 0; k < K; ++k) {
      t.re[k] = xi_grid[k] == 0.0 ? 1.0 : total[k].real() / mf;
      t.im[k] = xi_grid[k] == 0.0 ? 0.0 : total[k].imag() / mf;
    }
  }
  return t;
}

EcfTable table_from_modulus(const std::vector<double>& xi_grid,
                            const std::function<double(double)>& modulus) {
  EcfTable t;
  t.xi = xi_grid;
  t.im.assign(xi_grid.size(), 0.0);
  for (double x : xi_grid) t.re.push_back(modulus(x));
  return t;
}

SobolevNorm fourier_sobolev_norm(const EcfTable& table, double s, double p) {
  const std::size_t K = table.xi.size();
  if (K < 2) throw InputError("Sobolev norm needs at least two grid points");
  if (!(p > 0.0)) throw InputError("p must be positive");
  SobolevNorm out;
  out.s = s;
  out.p = p;
  out.grid_points = K;
  std::vector<double> integrand(K);
  double peak = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const double xi = table.xi[k];
    out.xi_max = std::max(out.xi_max, std::abs(xi));
    const double w = std::pow(1.0 + xi * xi, s / 2.0) * table.modulus(k);
    integrand[k] = std::isinf(p) ? w : std::pow(w, p);
    peak = std::max(peak, integrand[k]);
  }
  out.boundary_warning =
      peak > 0.0 && std::max(integrand.front(), integrand.back()) >= 0.01 * peak;
  if (std::isinf(p)) {
    out.value = peak;
    return out;
  }
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < K; ++k) {
    sum += 0.5 * (integrand[k] + integrand[k + 1]) * (table.xi[k + 1] - table.xi[k]);
  }
  out.value = std::pow(sum, 1.0 / p);
  return out;
}

DensityCurve density_reconstruct(const EcfTable& table, double damping,
                                 const std::vector<double>& x_grid) {
  const std::size_t K = table.xi.size();
  if (K < 2) throw InputError("density reconstruction needs at least two grid points");
  if (!(damping >= 0.0)) throw InputError("damping must be nonnegative");
  std::vector<double> weight(K, 0.0);
  for (std::size_t k = 0; k + 1 < K; ++k) {
    const double h = table.xi[k + 1] - table.xi[k];
    weight[k] += 0.5 * h;
    weight[k + 1] += 0.5 * h;
  }
  for (std::size_t k = 0; k < K; ++k) {
    const double d = damping * table.xi[k];
    weight[k] *= std::exp(-0.5 * d * d) / (2.0 * std::numbers::pi);
  }
  DensityCurve c;
  c.x = x_grid;
  c.damping = damping;
  c.density.resize(x_grid.size());
  parallel_chunks(x_grid.size(), 64, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      const double x = x_grid[j];
      double f = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        const double a = table.xi[k] * x;
        f += weight[k] * (table.re[k] * std::cos(a) + table.im[k] * std::sin(a));
      }
      c.density[j] = f;
    }
  });
  for (double f : c.density) c.max_negative = std::min(c.max_negative, f);
  for (std::size_t j = 0; j + 1 < x_grid.size(); ++j) {
    c.integral += 0.5 * (c.density[j] + c.density[j + 1]) * (x_grid[j + 1] - x_grid[j]);
  }
  return c;
}

double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw InputError("ks_distance needs samples");
  std::vector<double> s(samples.begin(), samples.end());
  std::sort(s.begin(), s.end());
  const double mf = static_cast<double>(s.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t j = i;
    while (j < s.size() && s[j] == s[i]) ++j;
    const double f = cdf(s[i]);
    d = std::max({d, std::abs(f - static_cast<double>(i) / mf),
                  std::abs(static_cast<double>(j) / mf - f)});
    i = j;
  }
  return d;
}

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

}  // namespace qfreg
