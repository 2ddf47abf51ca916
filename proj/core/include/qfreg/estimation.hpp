#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace qfreg {

/// Default grid for empirical characteristic functions: [-64, 64], 8193 points.
inline constexpr double kDefaultXiMax = 64.0;
inline constexpr std::size_t kDefaultXiPoints = 8193;

/// `points` equally spaced values on [-xi_max, xi_max]; `points` must be odd
/// so that 0 is a grid point.
std::vector<double> uniform_grid(double xi_max, std::size_t points);

struct EcfTable {
  std::vector<double> xi;
  std::vector<double> re;
  std::vector<double> im;
  std::size_t M = 0;
  /// 3 / sqrt(M).
  double band = 0.0;

  double modulus(std::size_t k) const;
};

/// (1/M) sum exp(i xi x_m). On a symmetric uniform grid with an odd number
/// of points only xi >= 0 is accumulated, by the recurrence
/// exp(i (xi + h) x) = exp(i xi x) exp(i h x); negative frequencies are
/// mirrored as conjugates and xi = 0 is exactly 1. Sums run over fixed-size
/// chunks reduced in order.
EcfTable ecf(std::span<const double> samples, const std::vector<double>& xi_grid);

/// Builds a table from a known modulus (imaginary part zero).
EcfTable table_from_modulus(const std::vector<double>& xi_grid,
                            const std::function<double(double)>& modulus);

struct SobolevNorm {
  double s = 0.0;
  double p = 0.0;  // infinity for the grid sup
  double value = 0.0;
  double xi_max = 0.0;
  std::size_t grid_points = 0;
  /// Integrand at the grid boundary is at least 1% of its maximum.
  bool boundary_warning = false;
};
/// Trapezoid estimate of (int |(1+xi^2)^{s/2} ecf(xi)|^p dxi)^{1/p} over the
/// grid, or the grid sup for p = infinity. Biased low by the truncation.
SobolevNorm fourier_sobolev_norm(const EcfTable& table, double s, double p);

struct DensityCurve {
  std::vector<double> x;
  std::vector<double> density;
  double damping = 0.0;
  /// Most negative value of the curve (0 when nonnegative).
  double max_negative = 0.0;
  /// Trapezoid integral of the curve over x.
  double integral = 0.0;
};
/// Inverse Fourier quadrature of ecf(xi) exp(-(damping xi)^2 / 2).
DensityCurve density_reconstruct(const EcfTable& table, double damping,
                                 const std::vector<double>& x_grid);

/// sup_x |F_M(x) - F(x)| for the empirical CDF of `samples`.
double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf);

double standard_normal_cdf(double x);

}  // namespace qfreg
