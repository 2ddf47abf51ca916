#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qfreg/laws.hpp"
#include "qfreg/spectral.hpp"

namespace qfreg {

enum class OperatorFamily { banded, wigner, custom };
std::string to_string(OperatorFamily f);
OperatorFamily operator_family_from_string(const std::string& s);

/// a_ij = 1/sqrt(2(n-1)) for |i-j| = 1, zero elsewhere.
SymmetricOperator banded_operator(std::size_t n);
/// Symmetric +-1 signs off the diagonal, zero diagonal, normalized to tr A^2 = 1.
SymmetricOperator wigner_operator(std::size_t n, std::uint64_t seed);

struct CltOptions {
  OperatorFamily family = OperatorFamily::banded;
  std::vector<std::size_t> n_list{32, 64, 128, 256};
  std::size_t M = 1'000'000;
  std::uint64_t seed = 1;
  double xi_max = 8.0;
  std::size_t xi_points = 257;
  std::vector<double> s_list{1.0, 2.0, 4.0};
};

struct CltRow {
  std::size_t n = 0;
  double rho = 0.0;
  double tau = 0.0;
  double ks = 0.0;
  /// sup over the grid of (1+xi^2)^{s/2} |ecf(xi)|, one entry per s.
  std::vector<double> profiles;
};

struct CltReport {
  CltOptions options;
  std::string law;
  double law_fourth_moment = 0.0;
  double fourth_moment_band = 0.0;
  bool leptokurtic = false;
  std::vector<CltRow> rows;
  std::vector<std::string> warnings;
};

/// Samples Q = <X, A X> / sqrt(2 tr A^2) for each operator, X with i.i.d.
/// standardized coordinates of `law`. Operators must have a zero diagonal.
CltReport run_clt_experiment(const CltOptions& options, const DirichletVariable& law,
                             const std::vector<SymmetricOperator>& custom = {});

/// M samples of <X, A X> with standardized coordinates X; divided by
/// sqrt(2 tr A^2) when `standardize` is set (which needs a zero diagonal).
std::vector<double> sample_quadratic_form(const SymmetricOperator& a, const DirichletVariable& law,
                                          std::size_t M, std::uint64_t seed,
                                          bool standardize = true);

}  // namespace qfreg
