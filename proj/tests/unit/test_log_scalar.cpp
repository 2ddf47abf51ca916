#include <doctest.h>

#include <cmath>

#include "qfreg/error.hpp"
#include "qfreg/log_scalar.hpp"

using qfreg::LogScalar;

TEST_SUITE("log_scalar") {
  TEST_CASE("round trip through doubles") {
    for (double v : {1e-300, 0.25, 1.0, 3.0, 1e300}) {
      // Relative error grows with |log2 v| times the double epsilon.
      CHECK(LogScalar::from_double(v).to_double() == doctest::Approx(v).epsilon(2e-13));
    }
    CHECK(LogScalar::from_double(0.0).is_zero());
    CHECK_THROWS_AS(LogScalar::from_double(-1.0), qfreg::InputError);
    CHECK_THROWS_AS(LogScalar::from_double(std::nan("")), qfreg::InputError);
  }

  TEST_CASE("exponent arithmetic stays exact far below double range") {
    const LogScalar a = LogScalar::power_of_two(-1466);
    const LogScalar b = LogScalar::power_of_two(-3000);
    CHECK((a * b).log2() == -4466.0);
    CHECK((a / b).log2() == 1534.0);
    CHECK(a.pow(-5).log2() == 7330.0);
    CHECK(a.to_double() == 0.0);
    CHECK(min(a, b) == b);
    CHECK(max(a, b) == a);
    CHECK(b < a);
  }

  TEST_CASE("sums use log-sum-exp") {
    const LogScalar x = LogScalar::power_of_two(-2000);
    CHECK((x + x).log2() == doctest::Approx(-1999.0));
    CHECK((LogScalar::from_double(1.5) + LogScalar::from_double(2.5)).to_double() ==
          doctest::Approx(4.0));
    CHECK((LogScalar::zero() + x) == x);
  }

  TEST_CASE("special values") {
    CHECK(LogScalar::zero().pow(0.0) == LogScalar::one());
    CHECK(LogScalar::zero().pow(-1.0).is_infinite());
    CHECK(LogScalar::infinity().log2() == INFINITY);
    CHECK(LogScalar::zero().log2() == -INFINITY);
    CHECK(LogScalar::zero() < LogScalar::power_of_two(-1e6));
    CHECK(LogScalar::power_of_two(-7).to_string() == "2^-7");
  }
}
