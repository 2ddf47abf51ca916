#include "naive.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace oracle {

Matrix random_symmetric(std::mt19937_64& rng, std::size_t n, double density) {
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ud;
  Matrix a(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double v = nd(rng);
      if (ud(rng) <= density) a[i][j] = a[j][i] = v;
    }
  }
  return a;
}

Matrix scale(Matrix a, double c) {
  for (auto& row : a) {
    for (auto& v : row) v *= c;
  }
  return a;
}

double frobenius_sq(const Matrix& a) {
  double s = 0.0;
  for (const auto& row : a) {
    for (double v : row) s += v * v;
  }
  return s;
}

std::vector<double> jacobi_eigenvalues(Matrix a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) off += a[i][j] * a[i][j];
      }
    }
    if (off < 1e-30 * std::max(1.0, frobenius_sq(a))) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

namespace {

double tuple_sum(const std::vector<double>& sq, std::size_t q, std::vector<bool>& used) {
  if (q == 0) return 1.0;
  double s = 0.0;
  for (std::size_t i = 0; i < sq.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    s += sq[i] * tuple_sum(sq, q - 1, used);
    used[i] = false;
  }
  return s;
}

}  // namespace

double naive_remainder(const std::vector<double>& eigenvalues, std::size_t q, bool tuple) {
  std::vector<double> sq;
  for (double l : eigenvalues) sq.push_back(l * l);
  if (tuple) {
    std::vector<bool> used(sq.size(), false);
    return tuple_sum(sq, q, used);
  }
  double s = 0.0;
  for (const auto& idx : subsets(sq.size(), q)) {
    double p = 1.0;
    for (std::size_t i : idx) p *= sq[i];
    s += p;
  }
  return s;
}

double leibniz_det(const Matrix& a) {
  const std::size_t n = a.size();
  if (n == 0) return 1.0;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double det = 0.0;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (perm[i] > perm[j]) ++inversions;
      }
    }
    double p = inversions % 2 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) p *= a[i][perm[i]];
    det += p;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t q) {
  std::vector<std::vector<std::size_t>> out;
  if (q > n) return out;
  std::vector<bool> mask(n, false);
  std::fill(mask.begin(), mask.begin() + static_cast<long>(q), true);
  do {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask[i]) s.push_back(i);
    }
    out.push_back(s);
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return out;
}

Matrix submatrix(const Matrix& a, const std::vector<std::size_t>& rows,
                 const std::vector<std::size_t>& cols) {
  Matrix m(rows.size(), std::vector<double>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) m[i][j] = a[rows[i]][cols[j]];
  }
  return m;
}

double naive_minor_sum(const Matrix& a, std::size_t q) {
  double s = 0.0;
  const auto all = subsets(a.size(), q);
  for (const auto& I : all) {
    for (const auto& J : all) {
      const double d = leibniz_det(submatrix(a, I, J));
      s += d * d;
    }
  }
  return s;
}

Ell1 naive_ell1(const Matrix& a, std::size_t q) {
  Ell1 e;
  e.upsilon.assign(a.size(), 0.0);
  const auto all = subsets(a.size(), q);
  for (const auto& I : all) {
    for (const auto& J : all) {
      const double d = leibniz_det(submatrix(a, I, J));
      const double b = d * d;
      e.sigma += b;
      for (std::size_t i = 0; i < a.size(); ++i) {
        const bool in = std::find(I.begin(), I.end(), i) != I.end() ||
                        std::find(J.begin(), J.end(), i) != J.end();
        if (in) e.upsilon[i] += b;
      }
    }
  }
  return e;
}

double naive_tau(const Matrix& a) {
  double t = 0.0;
  for (const auto& row : a) {
    double s = 0.0;
    for (double v : row) s += v * v;
    t = std::max(t, s);
  }
  return t;
}

double naive_multilinear(const std::vector<Term>& terms, const std::vector<double>& x) {
  double s = 0.0;
  for (const auto& [idx, c] : terms) {
    double p = c;
    for (std::size_t i : idx) p *= x[i];
    s += p;
  }
  return s;
}

std::pair<double, double> eig2x2(double a, double b, double c) {
  const double m = 0.5 * (a + c);
  const double r = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
  return {m - r, m + r};
}

std::complex<double> gaussian_qf_cf(const std::vector<double>& lambdas, double xi) {
  // Each factor (1 - 2 i xi l)^{-1/2} in polar form.
  double log_mod = 0.0, arg = 0.0;
  for (double l : lambdas) {
    const double t = 2.0 * xi * l;
    log_mod += -0.25 * std::log1p(t * t);
    arg += 0.5 * std::atan(t);
  }
  return std::polar(std::exp(log_mod), arg);
}

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

}  // namespace oracle
