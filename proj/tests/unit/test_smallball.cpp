#include <doctest.h>

#include <cmath>

#include "qfreg/error.hpp"
#include "qfreg/smallball.hpp"

using namespace qfreg;

TEST_SUITE("smallball") {
  TEST_CASE("anticoncentration exponents") {
    CHECK(anticoncentration_exponent(DirichletVariable::gaussian()).to_double() == 1.0);
    CHECK(anticoncentration_exponent(DirichletVariable::beta(0.5, 3)).to_double() == doctest::Approx(0.5));
    CHECK(anticoncentration_exponent(DirichletVariable::beta(2, 3)).to_double() == doctest::Approx(1.0));
    CHECK(anticoncentration_exponent(DirichletVariable::gamma(0.3)).to_double() == doctest::Approx(0.3));
    CHECK(anticoncentration_exponent(DirichletVariable::phi_gaussian(maps::gaussian_cdf())).to_double() == 1.0);
  }

  TEST_CASE("linear polynomial under a Gaussian law") {
    const MultilinearPolynomial p(1, {{{0}, 1.0}});
    const std::size_t M = 400000;
    const auto t = smallball_estimate(p, DirichletVariable::gaussian(), {0.1}, M, 5);
    REQUIRE(t.rows.size() == 1);
    const double exact = std::erf(0.1 / std::sqrt(2.0));
    CHECK(exact == doctest::Approx(0.0797).epsilon(1e-3));
    // The sup over 256 centers is biased upward by a few standard errors.
    CHECK(t.rows[0].probability >= exact - 4 * t.rows[0].std_error);
    CHECK(t.rows[0].probability <= exact + 8 * t.rows[0].std_error);
    CHECK(std::abs(t.rows[0].best_center) < 0.2);
    CHECK(t.degree == 1);
    CHECK(t.certified_theta.to_double() == 1.0);
  }

  TEST_CASE("product polynomial decays at least at the certified rate") {
    const MultilinearPolynomial p(2, {{{0, 1}, 1.0}});
    const auto t = smallball_estimate(p, DirichletVariable::gaussian(), {1e-1, 1e-2, 1e-3}, 400000, 6);
    CHECK(t.certified_theta.to_double() == doctest::Approx(1.0 / 16));
    CHECK(t.slope >= t.certified_theta.to_double() - 0.1);
    for (std::size_t k = 1; k < t.rows.size(); ++k) CHECK(t.rows[k].probability <= t.rows[k - 1].probability);
  }

  TEST_CASE("constant polynomial is fully concentrated") {
    const MultilinearPolynomial p(2, {{{}, 3.0}});
    const auto t = smallball_estimate(p, DirichletVariable::beta(2, 2), {1e-1, 1e-4}, 1000, 7);
    for (const auto& r : t.rows) {
      CHECK(r.probability == 1.0);
      CHECK(r.best_center == 3.0);
    }
  }

  TEST_CASE("reproducible and validated") {
    const MultilinearPolynomial p(2, {{{0, 1}, 1.0}, {{0}, 0.5}});
    const auto a = smallball_estimate(p, DirichletVariable::gamma(2), {1e-2}, 5000, 8);
    const auto b = smallball_estimate(p, DirichletVariable::gamma(2), {1e-2}, 5000, 8);
    CHECK(a.rows[0].probability == b.rows[0].probability);
    CHECK_THROWS_AS(smallball_estimate(p, DirichletVariable::gaussian(), {}, 100, 1), InputError);
    CHECK_THROWS_AS(smallball_estimate(p, DirichletVariable::gaussian(), {-1.0}, 100, 1), InputError);
  }
}
