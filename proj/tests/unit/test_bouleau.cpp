#include <doctest.h>

#include <cmath>
#include <random>

#include "naive.hpp"
#include "qfreg/bouleau.hpp"
#include "qfreg/error.hpp"
#include "qfreg/estimation.hpp"

using namespace qfreg;

namespace {

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double second_moment(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s / static_cast<double>(v.size());
}

SymmetricOperator offdiag(double c) {
  Eigen::MatrixXd a(2, 2);
  a << 0, c, c, 0;
  return SymmetricOperator(a);
}

SymmetricOperator random_zero_diagonal(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) a(i, j) = a(j, i) = nd(rng);
  return SymmetricOperator(a).normalized();
}

}  // namespace

TEST_SUITE("bouleau") {
  TEST_CASE("built-in fields have consistent derivatives") {
    std::mt19937_64 rng(1);
    const auto a = random_zero_diagonal(rng, 4);
    for (const auto& f : {fields::coordinate(3, 1), fields::linear({1.0, -2.0, 0.5}), fields::coordinate_square(3, 2),
                          fields::quadratic_form(a), fields::sine_chain(4)}) {
      for (const auto& law : {DirichletVariable::gaussian(), DirichletVariable::beta(2, 2), DirichletVariable::gamma(2)}) {
        const auto c = check_derivatives({f, law}, 3);
        CHECK_MESSAGE(c.ok, f.name << " " << law.name() << " " << c.max_gradient_error << " " << c.max_hessian_error);
      }
    }
  }

  TEST_CASE("sharp of a coordinate is a standard Gaussian") {
    const CylinderFunctional F{fields::coordinate(1, 0), DirichletVariable::gaussian()};
    const auto batch = sample_batch(F.law, 1, 200000, 2, false);
    const auto s = sharp_G(F, batch, 3);
    CHECK(std::abs(mean(s)) < 4 / std::sqrt(2e5));
    CHECK(second_moment(s) == doctest::Approx(1.0).epsilon(0.015));
    CHECK(ks_distance(s, standard_normal_cdf) <= 1.63 / std::sqrt(2e5));
  }

  TEST_CASE("sharp of a square has conditional variance 4 X^2") {
    const CylinderFunctional F{fields::coordinate_square(1, 0), DirichletVariable::gaussian()};
    const auto batch = sample_batch(F.law, 1, 1000, 4, false);
    const auto s = sharp_G(F, batch, 5);
    const auto again = sharp_G(F, batch, 5);
    CHECK(s == again);
    for (std::size_t m = 0; m < batch.M; ++m) {
      const double x = batch.x_at(m, 0);
      CHECK(functional_carre_du_champ(F.f, batch, m) == doctest::Approx(4 * x * x));
    }
    // sharp / (2 X) recovers the auxiliary Gaussian; its moments pin the law.
    const auto big = sample_batch(F.law, 1, 200000, 6, false);
    const auto sb = sharp_G(F, big, 7);
    std::vector<double> g(big.M);
    for (std::size_t m = 0; m < big.M; ++m) g[m] = sb[m] / (2 * big.x_at(m, 0));
    CHECK(second_moment(g) == doctest::Approx(1.0).epsilon(0.015));
  }

  TEST_CASE("carre du champ of a quadratic form matches the chain rule") {
    std::mt19937_64 rng(8);
    const auto a = random_zero_diagonal(rng, 5);
    for (const auto& law : {DirichletVariable::gaussian(), DirichletVariable::beta(2, 3), DirichletVariable::gamma(1.5)}) {
      const auto batch = sample_batch(law, 5, 200, 9, false);
      const auto f = fields::quadratic_form(a);
      for (std::size_t m = 0; m < batch.M; ++m) {
        Eigen::VectorXd x(5);
        for (int i = 0; i < 5; ++i) x(i) = batch.x_at(m, i);
        const Eigen::VectorXd ax = a.entries() * x;
        double expect = 0.0;
        for (int i = 0; i < 5; ++i) expect += batch.gamma_at(m, i) * 4 * ax(i) * ax(i);
        CHECK(std::abs(functional_carre_du_champ(f, batch, m) - expect) <= 1e-10 * std::max(1.0, expect));
      }
    }
  }

  TEST_CASE("conditional Fourier-Laplace identity") {
    const CylinderFunctional F1{fields::coordinate(1, 0), DirichletVariable::gaussian()};
    const auto b1 = sample_batch(F1.law, 1, 100, 10, false);
    const auto c1 = conditional_cf_identity(F1, b1, 1.0);
    for (double v : c1.lhs) CHECK(v == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
    CHECK(c1.max_abs_gap <= 1e-12);

    const CylinderFunctional F2{fields::coordinate_square(1, 0), DirichletVariable::gaussian()};
    const auto c2 = conditional_cf_identity(F2, b1, 2.0);
    for (std::size_t m = 0; m < b1.M; ++m) {
      const double x = b1.x_at(m, 0);
      CHECK(c2.rhs[m] == doctest::Approx(std::exp(-8 * x * x)).epsilon(1e-12));
    }
    CHECK(c2.max_abs_gap <= 1e-12);

    std::mt19937_64 rng(11);
    const CylinderFunctional F3{fields::sine_chain(4), DirichletVariable::beta(0.7, 2)};
    const auto b3 = sample_batch(F3.law, 4, 500, 12, false);
    const auto c0 = conditional_cf_identity(F3, b3, 0.0);
    CHECK(c0.lhs_mean == 1.0);
    CHECK(c0.rhs_mean == 1.0);
    CHECK(conditional_cf_identity(F3, b3, 1.7).max_abs_gap <= 1e-12);
  }

  TEST_CASE("sharp law is the Gaussian mixture") {
    std::mt19937_64 rng(13);
    const CylinderFunctional F{fields::quadratic_form(random_zero_diagonal(rng, 4)), DirichletVariable::gamma(2)};
    const std::size_t M = 100000;
    const auto batch = sample_batch(F.law, 4, M, 14, true);
    const auto s = sharp_G(F, batch, 15);
    std::vector<double> g(M);
    for (std::size_t m = 0; m < M; ++m) g[m] = functional_carre_du_champ(F.f, batch, m);
    CHECK(sharp_mixture_ks(s, g) <= 2 / std::sqrt(static_cast<double>(M)) + 0.01);
  }

  TEST_CASE("Markov small-ball bound") {
    const CylinderFunctional F1{fields::coordinate(1, 0), DirichletVariable::gaussian()};
    const auto b = sample_batch(F1.law, 1, 10000, 16, false);
    const auto r1 = markov_smallball_bound(F1, b, {2.0, 1e-8});
    CHECK(r1[0].probability == 0.0);
    CHECK(r1[0].bound == doctest::Approx(std::exp(-1.0)));
    CHECK(r1[1].bound == doctest::Approx(std::exp(1.0)).epsilon(1e-6));
    const CylinderFunctional F2{fields::coordinate_square(1, 0), DirichletVariable::gaussian()};
    for (const auto& row : markov_smallball_bound(F2, b, {1, 10, 100})) {
      CHECK(row.holds);
      CHECK(row.probability <= row.bound + row.band);
    }
  }

  TEST_CASE("Gaussian quadratic form characteristic function") {
    const std::vector<double> one{1.0};
    CHECK(gaussian_qf_cf(one, 0.0).modulus == 1.0);
    CHECK(gaussian_qf_cf(one, 1.0).modulus == doctest::Approx(std::pow(5.0, -0.25)));
    CHECK(gaussian_qf_cf(one, 1.0).modulus == doctest::Approx(0.6687).epsilon(1e-4));
    const std::vector<double> two{1.0, 1.0};
    const auto big = gaussian_qf_cf(two, 1e3);
    CHECK(big.modulus == doctest::Approx(1.0 / (2e3)).epsilon(1e-6));
    REQUIRE(big.bounds.size() == 2);
    CHECK(big.bounds[1].to_double() == doctest::Approx(std::pow(16e12, -0.25)));
    CHECK(big.bounds_hold);

    std::mt19937_64 rng(17);
    std::normal_distribution<double> nd;
    for (int t = 0; t < 200; ++t) {
      std::vector<double> lam(1 + rng() % 8);
      for (auto& l : lam) l = nd(rng);
      const double xi = std::abs(nd(rng)) * 3;
      const auto r = gaussian_qf_cf(lam, xi);
      const auto z = oracle::gaussian_qf_cf(lam, xi);
      CHECK(r.modulus == doctest::Approx(std::abs(z)).epsilon(1e-12));
      CHECK(r.bounds_hold);
      const auto v = gaussian_qf_cf_value(lam, xi);
      CHECK(std::abs(v - z) <= 1e-12);
    }
  }

  TEST_CASE("exact modulus matches the empirical one") {
    const std::vector<double> lam{0.6, -0.5, 0.3, 0.2};
    const std::size_t M = 200000;
    const auto s = sample_gaussian_qf(lam, M, 18);
    const auto table = ecf(s, uniform_grid(6.0, 61));
    for (std::size_t k = 0; k < table.xi.size(); ++k) {
      CHECK(std::abs(table.modulus(k) - gaussian_qf_cf(lam, table.xi[k]).modulus) <= table.band);
    }
  }

  TEST_CASE("orthogonal mixing leaves the law unchanged") {
    std::mt19937_64 rng(19);
    const auto a = random_zero_diagonal(rng, 5);
    const auto& ev = a.eigenvalues();
    const std::vector<double> lam(ev.data(), ev.data() + ev.size());
    const std::size_t M = 200000;
    const QuadraticFunctional Q(a, DirichletVariable::gaussian(), true);
    const auto batch = sample_batch(Q.law, 5, M, 20, false);
    std::vector<double> qa(M);
    for (std::size_t m = 0; m < M; ++m) {
      Eigen::Map<const Eigen::VectorXd> x(batch.row(m).data(), 5);
      qa[m] = x.dot(a.entries() * x);
    }
    const auto ql = sample_gaussian_qf(lam, M, 21);
    const auto grid = uniform_grid(5.0, 51);
    const auto ta = ecf(qa, grid), tl = ecf(ql, grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      CHECK(std::hypot(ta.re[k] - tl.re[k], ta.im[k] - tl.im[k]) <= 2 * ta.band);
    }
  }

  TEST_CASE("Hessian main term") {
    std::mt19937_64 rng(22);
    const auto a = random_zero_diagonal(rng, 4);
    const QuadraticFunctional Qg(a, DirichletVariable::gaussian(), true);
    const auto bg = sample_batch(Qg.law, 4, 20, 23, false);
    for (const auto& m : bouleau_hessian_main_term(Qg, bg)) {
      CHECK((m.entries() - 2 * a.entries()).cwiseAbs().maxCoeff() <= 1e-15);
    }
    const QuadraticFunctional Qc(offdiag(1 / std::sqrt(2.0)), DirichletVariable::gamma(1), true);
    const auto bc = sample_batch(Qc.law, 2, 50, 24, false);
    for (std::size_t m = 0; m < bc.M; ++m) {
      const auto mm = bouleau_hessian_main_term(Qc, bc, m);
      const double expect = 2 / std::sqrt(2.0) * std::sqrt(bc.x_at(m, 0) * bc.x_at(m, 1));
      CHECK(mm.entries()(0, 1) == doctest::Approx(expect).epsilon(1e-14));
      CHECK(mm.entries()(0, 1) == mm.entries()(1, 0));
      CHECK(mm.entries()(0, 0) == 0.0);
    }
    Eigen::MatrixXd d = Eigen::MatrixXd::Identity(2, 2);
    CHECK_THROWS_AS(QuadraticFunctional(SymmetricOperator(d), DirichletVariable::gaussian(), true), InputError);
  }

  TEST_CASE("negative moments of spectral remainders") {
    std::mt19937_64 rng(25);
    const auto a = random_zero_diagonal(rng, 4);
    const QuadraticFunctional Q(a, DirichletVariable::gaussian(), true);
    const auto batch = sample_batch(Q.law, 4, 50, 26, false);
    const auto samples = bouleau_hessian_main_term(Q, batch);
    const auto nm = spectral_remainder_negative_moment(samples, 1, 0.25);
    CHECK(nm.estimate == doctest::Approx(std::pow(4 * a.frobenius_sq(), -0.25)).epsilon(1e-12));
    CHECK(nm.floor_fraction == 0.0);
    const auto nm2 = spectral_remainder_negative_moment({samples[0]}, 2, 0.25);
    const auto r2 = spectral_remainders(samples[0], 2);
    CHECK(nm2.estimate == doctest::Approx(std::pow(r2[2], -0.25)).epsilon(1e-12));

    // Shape 0.02 puts visible mass below the floor for q = n = 2.
    const QuadraticFunctional Qh(offdiag(1 / std::sqrt(2.0)), DirichletVariable::gamma(0.02), true);
    const auto bh = sample_batch(Qh.law, 2, 5000, 27, false);
    const auto heavy = spectral_remainder_negative_moment(bouleau_hessian_main_term(Qh, bh), 2, 0.25);
    CHECK(heavy.floor_fraction > 0.0);
    CHECK(heavy.floor_fraction < 1.0);
    CHECK(heavy.estimate > 1e10);

    const std::vector<SymmetricOperator> zeros(3, SymmetricOperator::zero(2));
    CHECK_THROWS_AS(spectral_remainder_negative_moment(zeros, 1, 0.25), Error);
  }

  TEST_CASE("iterated sharp main term") {
    std::mt19937_64 rng(28);
    const auto a = random_zero_diagonal(rng, 4);
    const QuadraticFunctional Q(a, DirichletVariable::gaussian(), true);
    const std::size_t M = 200000;
    const auto batch = sample_batch(Q.law, 4, M, 29, false);
    const auto v = iterated_sharp(Q, batch, 30, 31, false);
    const auto w = iterated_sharp(Q, batch, 30, 31, true);
    CHECK(v == w);  // Gaussian laws have no diagonal term.
    CHECK(std::abs(mean(v)) <= 4 * 2 / std::sqrt(static_cast<double>(M)));
    CHECK(second_moment(v) == doctest::Approx(4.0).epsilon(0.02));
    const QuadraticFunctional Qb(a, DirichletVariable::beta(2, 2), true);
    const auto bb = sample_batch(Qb.law, 4, 1000, 32, false);
    const auto with = iterated_sharp(Qb, bb, 30, 31, true);
    const auto without = iterated_sharp(Qb, bb, 30, 31, false);
    CHECK(with != without);
  }
}
