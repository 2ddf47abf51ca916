#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "naive.hpp"
#include "qfreg/bouleau.hpp"
#include "qfreg/determinantal.hpp"
#include "qfreg/multilinear_polynomial.hpp"
#include "qfreg/spectral.hpp"
#include "replay.hpp"

using nlohmann::json;

namespace {

constexpr int kCases = 500;

qfreg::SymmetricOperator to_operator(const oracle::Matrix& m) {
  const auto n = static_cast<Eigen::Index>(m.size());
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = m[i][j];
  }
  return qfreg::SymmetricOperator(a);
}

json operator_json(const oracle::Matrix& m) {
  return json{{"n", m.size()}, {"format", "dense"}, {"data", m}};
}

bool close_rel(double a, double b, double rel, double abs_floor = 1e-300) {
  return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), abs_floor});
}

/// Records a failing case for replay and reports it through doctest.
void check_case(bool ok, const std::string& name, int index, const json& details) {
  if (!ok) {
    const std::string path = oracle::write_replay(name + "-" + std::to_string(index), details);
    FAIL_CHECK("oracle mismatch in " << name << " case " << index << ", replay: " << path);
  }
}

}  // namespace

TEST_SUITE("oracles") {
  TEST_CASE("naive remainder examples") {
    CHECK(oracle::naive_remainder({1.0, 1.0}, 2, true) == doctest::Approx(2.0));
    CHECK(oracle::naive_remainder({1.0, 2.0, 3.0}, 2, false) == doctest::Approx(49.0));
    const std::vector<double> ev{0.3, -1.2, 2.0};
    CHECK(oracle::naive_remainder(ev, 1, true) == doctest::Approx(0.09 + 1.44 + 4.0));
    CHECK(oracle::naive_remainder(ev, 1, false) == doctest::Approx(0.09 + 1.44 + 4.0));
  }

  TEST_CASE("eigenvalues against Jacobi rotations") {
    std::mt19937_64 rng(11);
    for (int c = 0; c < kCases; ++c) {
      const std::size_t n = 1 + rng() % 8;
      const auto m = oracle::random_symmetric(rng, n, c % 3 == 0 ? 0.5 : 1.0);
      const auto ref = oracle::jacobi_eigenvalues(m);
      const auto op = to_operator(m);
      const auto& ev = op.eigenvalues();
      std::vector<double> got(ev.data(), ev.data() + ev.size());
      std::sort(got.begin(), got.end());
      double err = 0.0;
      for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(got[i] - ref[i]));
      const double scale = std::sqrt(oracle::frobenius_sq(m)) + 1.0;
      check_case(err <= 1e-10 * scale, "eigenvalues", c,
                 {{"operator", operator_json(m)}, {"max_error", err}, {"tolerance", 1e-10 * scale}});
    }
  }

  TEST_CASE("spectral remainders against literal tuple and subset loops") {
    std::mt19937_64 rng(12);
    for (int c = 0; c < kCases; ++c) {
      const std::size_t n = 1 + rng() % 7;
      const std::size_t q = 1 + rng() % std::min<std::size_t>(n, 4);
      const auto m = oracle::random_symmetric(rng, n);
      const auto ref_ev = oracle::jacobi_eigenvalues(m);
      const auto op = to_operator(m);
      const double got_set = qfreg::spectral_remainders(op, q, qfreg::RemainderConvention::set)[q];
      const double got_tuple = qfreg::spectral_remainders(op, q, qfreg::RemainderConvention::tuple)[q];
      const double ref_set = oracle::naive_remainder(ref_ev, q, false);
      const double ref_tuple = oracle::naive_remainder(ref_ev, q, true);
      const bool ok = close_rel(got_set, ref_set, 1e-9) && close_rel(got_tuple, ref_tuple, 1e-9);
      check_case(ok, "remainders", c,
                 {{"operator", operator_json(m)}, {"q", q}, {"set", {got_set, ref_set}},
                  {"tuple", {got_tuple, ref_tuple}}});
    }
  }

  TEST_CASE("Cauchy-Binet against Leibniz minor sums") {
    std::mt19937_64 rng(13);
    for (int c = 0; c < kCases; ++c) {
      const std::size_t n = 1 + rng() % 6;
      const std::size_t q = 1 + rng() % std::min<std::size_t>(n, 4);
      const auto m = oracle::random_symmetric(rng, n);
      const auto op = to_operator(m);
      const double ref = oracle::naive_minor_sum(m, q);
      const double got = qfreg::spectral_remainders(op, q)[q];
      const double got_minors = qfreg::cauchy_binet_oracle(op, q);
      const bool ok = close_rel(got, ref, 1e-8, 1e-12) && close_rel(got_minors, ref, 1e-8, 1e-12);
      check_case(ok, "cauchy-binet", c,
                 {{"operator", operator_json(m)}, {"q", q}, {"naive", ref}, {"remainder", got},
                  {"minor_sum", got_minors}});
    }
  }

  TEST_CASE("determinantal mass and influences against full enumeration") {
    std::mt19937_64 rng(14);
    for (int c = 0; c < kCases; ++c) {
      const std::size_t n = 2 + rng() % 5;
      const std::size_t q = 1 + rng() % std::min<std::size_t>(n, 3);
      const auto m = oracle::random_symmetric(rng, n, 0.6);
      const auto ref = oracle::naive_ell1(m, q);
      const auto b = qfreg::build_from_operator(to_operator(m), q);
      const auto ups = qfreg::ell1_influences(b);
      bool ok = close_rel(b.sigma(), ref.sigma, 1e-9, 1e-12);
      for (std::size_t i = 0; i < n; ++i) ok = ok && close_rel(ups.per_index[i], ref.upsilon[i], 1e-9, 1e-12);
      const double tau = oracle::naive_tau(m);
      ok = ok && close_rel(qfreg::influences(to_operator(m)).max, tau, 1e-12, 1e-300);
      check_case(ok, "determinantal", c,
                 {{"operator", operator_json(m)}, {"q", q}, {"sigma", {b.sigma(), ref.sigma}},
                  {"upsilon", ups.per_index}, {"upsilon_naive", ref.upsilon}});
    }
  }

  TEST_CASE("multilinear evaluation against term-by-term products") {
    std::mt19937_64 rng(15);
    std::normal_distribution<double> nd;
    for (int c = 0; c < kCases; ++c) {
      const std::size_t n = 1 + rng() % 8;
      std::vector<oracle::Term> terms;
      std::vector<qfreg::MultilinearPolynomial::Term> qt;
      const std::size_t count = 1 + rng() % 6;
      for (std::size_t t = 0; t < count; ++t) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < n; ++i) {
          if (rng() % 3 == 0) idx.push_back(i);
        }
        std::shuffle(idx.begin(), idx.end(), rng);
        const double coeff = nd(rng);
        terms.emplace_back(idx, coeff);
        qt.emplace_back(idx, coeff);
      }
      std::vector<double> x(n);
      for (auto& v : x) v = nd(rng);
      const double ref = oracle::naive_multilinear(terms, x);
      const double got = qfreg::MultilinearPolynomial(n, qt).evaluate(x);
      check_case(std::abs(got - ref) <= 1e-12 * (1.0 + std::abs(ref)), "multilinear", c,
                 {{"n", n}, {"x", x}, {"got", got}, {"naive", ref}});
    }
  }

  TEST_CASE("2x2 eigenvalues and spectral radius against the closed form") {
    std::mt19937_64 rng(16);
    std::normal_distribution<double> nd;
    for (int c = 0; c < kCases; ++c) {
      const double a = nd(rng), b = nd(rng), d = nd(rng);
      const auto [lo, hi] = oracle::eig2x2(a, b, d);
      const auto op = to_operator({{a, b}, {b, d}});
      const double rho = std::max(std::abs(lo), std::abs(hi));
      const double e2 = lo * lo * hi * hi;
      const bool ok = std::abs(op.spectral_radius() - rho) <= 1e-12 * (1 + rho) &&
                      close_rel(qfreg::spectral_remainders(op, 2)[2], e2, 1e-9, 1e-20);
      check_case(ok, "eig2x2", c, {{"entries", {a, b, d}}, {"rho", rho}, {"e2", e2}});
    }
  }

  TEST_CASE("Gaussian quadratic-form characteristic function against the polar form") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> ud(-30.0, 30.0);
    for (int c = 0; c < kCases; ++c) {
      std::vector<double> lam(1 + rng() % 10);
      for (auto& l : lam) l = nd(rng);
      const double xi = ud(rng);
      const auto ref = oracle::gaussian_qf_cf(lam, xi);
      const auto val = qfreg::gaussian_qf_cf_value(lam, xi);
      const auto cf = qfreg::gaussian_qf_cf(lam, xi);
      const double tol = 1e-12 * std::max(1e-300, std::abs(ref)) + 1e-300;
      const bool ok = std::abs(val - ref) <= 1e-10 * std::abs(ref) + tol &&
                      close_rel(cf.modulus, std::abs(ref), 1e-10, 1e-300);
      check_case(ok, "gaussian-cf", c,
                 {{"lambdas", lam}, {"xi", xi}, {"reference", {ref.real(), ref.imag()}},
                  {"value", {val.real(), val.imag()}}, {"modulus", cf.modulus}});
    }
  }
}
