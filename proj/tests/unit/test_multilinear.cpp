#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "naive.hpp"
#include "qfreg/error.hpp"
#include "qfreg/laws.hpp"
#include "qfreg/multilinear_polynomial.hpp"

using namespace qfreg;

namespace {

std::vector<MultilinearPolynomial::Term> random_terms(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> count(1, 6);
  std::normal_distribution<double> coef;
  std::bernoulli_distribution coin(0.4);
  std::vector<MultilinearPolynomial::Term> terms;
  const int k = count(rng);
  for (int t = 0; t < k; ++t) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
      if (coin(rng)) idx.push_back(i);
    terms.push_back({idx, coef(rng)});
  }
  return terms;
}

}  // namespace

TEST_SUITE("multilinear") {
  TEST_CASE("evaluation examples") {
    const MultilinearPolynomial p(2, {{{0, 1}, 1.0}});
    CHECK(p.evaluate(std::vector<double>{2, 3}) == 6.0);
    const MultilinearPolynomial c(1, {{{}, 1.0}, {{0}, 1.0}});
    CHECK(c.evaluate(std::vector<double>{5}) == 6.0);
    CHECK(c.constant() == 1.0);
    CHECK_THROWS_AS(p.evaluate(std::vector<double>{1}), InputError);
  }

  TEST_CASE("construction normalizes terms") {
    const MultilinearPolynomial p(3, {{{2, 0}, 1.0}, {{0, 2}, 2.0}, {{1}, 0.0}, {{1}, 1.0}, {{1}, -1.0}});
    CHECK(p.coefficients().size() == 1);
    CHECK(p.coefficients().at({0, 2}) == 3.0);
    CHECK(p.degree() == 2);
    CHECK_THROWS_AS(MultilinearPolynomial(3, {{{1, 1}, 1.0}}), InputError);
    CHECK_THROWS_AS(MultilinearPolynomial(3, {{{3}, 1.0}}), InputError);
    CHECK(MultilinearPolynomial(3, {}).degree() == 0);
  }

  TEST_CASE("random polynomials match the naive evaluator") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> nd;
    for (int t = 0; t < 300; ++t) {
      const std::size_t n = 1 + rng() % 8;
      const auto terms = random_terms(rng, n);
      const MultilinearPolynomial p(n, terms);
      std::vector<double> x(n);
      for (auto& v : x) v = nd(rng);
      std::vector<oracle::Term> ot(terms.begin(), terms.end());
      CHECK(p.evaluate(x) == doctest::Approx(oracle::naive_multilinear(ot, x)).epsilon(1e-12));
    }
  }

  TEST_CASE("influence decomposition") {
    const MultilinearPolynomial p(3, {{{0, 1}, 1.0}, {{2}, 1.0}});
    const auto d = partial_influence_poly(p, 0);
    CHECK(d.s.coefficients().size() == 1);
    CHECK(d.s.coefficients().at({1}) == 1.0);
    CHECK(d.r.coefficients().at({2}) == 1.0);
    CHECK(partial_influence_poly(p, 2).s.coefficients().at({}) == 1.0);
    const MultilinearPolynomial q(3, {{{0}, 1.0}});
    CHECK(partial_influence_poly(q, 1).s.coefficients().empty());
    CHECK_THROWS_AS(partial_influence_poly(q, 3), InputError);

    std::mt19937_64 rng(12);
    std::normal_distribution<double> nd;
    for (int t = 0; t < 1000; ++t) {
      const std::size_t n = 1 + rng() % 7;
      const MultilinearPolynomial r(n, random_terms(rng, n));
      const std::size_t i = rng() % n;
      const auto dec = partial_influence_poly(r, i);
      std::vector<double> x(n);
      for (auto& v : x) v = nd(rng);
      CHECK(r.evaluate(x) == doctest::Approx(x[i] * dec.s.evaluate(x) + dec.r.evaluate(x)).epsilon(1e-12));
      for (const auto& [mono, c] : dec.s.coefficients()) {
        (void)c;
        CHECK(std::find(mono.begin(), mono.end(), i) == mono.end());
      }
    }
  }

  TEST_CASE("variance identity") {
    const MultilinearPolynomial p(3, {{{}, 4.0}, {{0, 1}, 1.0}, {{2}, 0.5}, {{0, 1, 2}, -2.0}});
    CHECK(p.variance() == doctest::Approx(1.0 + 0.25 + 4.0));
    for (const auto& law : {DirichletVariable::gaussian(), DirichletVariable::gamma(2), DirichletVariable::beta(0.5, 2)}) {
      const auto b = sample_batch(law, 3, 200000, 21, true);
      double s = 0.0, s2 = 0.0, s4 = 0.0;
      std::vector<double> v(b.M);
      for (std::size_t m = 0; m < b.M; ++m) {
        v[m] = p.evaluate(b.row(m));
        s += v[m];
      }
      const double M = static_cast<double>(b.M), mean = s / M;
      for (double x : v) {
        s2 += (x - mean) * (x - mean);
        s4 += std::pow(x - mean, 4);
      }
      const double var = s2 / M;
      const double sd_var = std::sqrt(std::max(s4 / M - var * var, 0.0));
      CHECK_MESSAGE(std::abs(var - p.variance()) <= 5 * sd_var / std::sqrt(M), law.name());
    }
  }

  TEST_CASE("theta recursion") {
    const auto one = LogScalar::one();
    CHECK(theta_recursion(one, 1).to_double() == doctest::Approx(1.0));
    CHECK(theta_recursion(one, 2).to_double() == doctest::Approx(1.0 / 16));
    CHECK(theta_recursion(one, 2, ThetaMode::closed_form).to_double() == doctest::Approx(1.0 / 64));
    CHECK(theta_recursion(LogScalar::power_of_two(-20), 3).log2() == doctest::Approx(-22.0));
    CHECK(theta_recursion(one, 4, ThetaMode::log_concave).to_double() == doctest::Approx(0.25));
    CHECK_THROWS_AS(theta_recursion(one, 0), InputError);
    CHECK_THROWS_AS(theta_recursion(LogScalar::zero(), 2), InputError);
    // Deep recursion stays representable.
    CHECK(theta_recursion(LogScalar::from_double(0.5), 4096).log2() < -4000.0);
  }

  TEST_CASE("theta modes are decreasing and agree off the cap") {
    for (double t : {1.0, 0.3, 1.0 / 16, 1e-3}) {
      for (auto mode : {ThetaMode::recursion, ThetaMode::closed_form}) {
        for (std::size_t d = 1; d < 40; ++d) {
          const auto a = theta_recursion(LogScalar::from_double(t), d, mode);
          const auto b = theta_recursion(LogScalar::from_double(t), d + 1, mode);
          CHECK(a > LogScalar::zero());
          CHECK(b < a);
        }
      }
    }
    // With theta small the cap never binds; recursion gives theta 2^{1-d} and
    // the closed form theta 2^{-d}, so they agree up to the base-case factor 2.
    for (std::size_t d = 1; d < 6; ++d) {
      const auto t = LogScalar::power_of_two(-12);
      const double r = theta_recursion(t, d).log2();
      const double c = theta_recursion(t, d, ThetaMode::closed_form).log2();
      CHECK(r == doctest::Approx(-12.0 - (d - 1.0)));
      CHECK(c == doctest::Approx(r - 1.0));
    }
  }
}
