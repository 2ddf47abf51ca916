#include "qfreg/smooth_map.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <cmath>
#include <numbers>

#include "qfreg/error.hpp"

namespace qfreg {

namespace maps {

SmoothMap identity() {
  return {"identity", [](double t) { return t; }, [](double) { return 1.0; },
          [](double) { return 0.0; }, [](double x) { return x; }, 0.0, 1.0};
}

SmoothMap square() {
  return {"square", [](double t) { return t * t; }, [](double t) { return 2.0 * t; },
          [](double) { return 2.0; }, {}, 1.0, 2.0};
}

SmoothMap cube() {
  return {"cube", [](double t) { return t * t * t; }, [](double t) { return 3.0 * t * t; },
          [](double t) { return 6.0 * t; }, [](double x) { return std::cbrt(x); }, 0.0, 15.0};
}

SmoothMap sine() {
  const double e2 = std::exp(-2.0);
  return {"sin", [](double t) { return std::sin(t); }, [](double t) { return std::cos(t); },
          [](double t) { return -std::sin(t); }, {}, 0.0, (1.0 - e2) / 2.0};
}

SmoothMap gaussian_cdf() {
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  return {"gaussian_cdf",
          [](double t) { return 0.5 * std::erfc(-t / std::numbers::sqrt2); },
          [=](double t) { return inv_sqrt_2pi * std::exp(-0.5 * t * t); },
          [=](double t) { return -t * inv_sqrt_2pi * std::exp(-0.5 * t * t); },
          [](double x) {
            if (!(x > 0.0 && x < 1.0)) throw InputError("gaussian_cdf inverse needs x in (0,1)");
            return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * x);
          },
          0.5,
          1.0 / 12.0};
}

}  // namespace maps

SmoothMap smooth_map_by_name(const std::string& name) {
  if (name == "identity") return maps::identity();
  if (name == "square") return maps::square();
  if (name == "cube") return maps::cube();
  if (name == "sin" || name == "sine") return maps::sine();
  if (name == "gaussian_cdf" || name == "Phi") return maps::gaussian_cdf();
  throw InputError("unknown smooth map '" + name + "'");
}

}  // namespace qfreg
