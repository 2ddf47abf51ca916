#pragma once

#include <functional>
#include <optional>
#include <string>

namespace qfreg {

/// A named real function supplied with its first two derivatives.
struct SmoothMap {
  std::string name;
  std::function<double(double)> value;
  std::function<double(double)> first;
  std::function<double(double)> second;
  /// Inverse on the range, when available.
  std::function<double(double)> inverse;
  /// Mean and variance of value(N) for a standard Gaussian N, when known.
  std::optional<double> gaussian_mean;
  std::optional<double> gaussian_variance;

  double operator()(double t) const { return value(t); }
};

namespace maps {
SmoothMap identity();
SmoothMap square();
SmoothMap cube();
SmoothMap sine();
/// Standard Gaussian cumulative distribution function.
SmoothMap gaussian_cdf();
}  // namespace maps

/// Looks up a built-in map by name ("identity", "square", "cube", "sin" or "sine",
/// "gaussian_cdf"); throws InputError for unknown names.
SmoothMap smooth_map_by_name(const std::string& name);

}  // namespace qfreg
