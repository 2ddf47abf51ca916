#include <doctest.h>

#include "qfreg/error.hpp"
#include "qfreg/subsets.hpp"

using namespace qfreg;

TEST_SUITE("subsets") {
  TEST_CASE("encode and decode") {
    const std::vector<std::size_t> idx{0, 3, 5};
    const SubsetCode c = encode_subset(idx);
    CHECK(c == 0b101001u);
    CHECK(decode_subset(c) == idx);
    CHECK(subset_size(c) == 3);
    CHECK(subset_contains(c, 3));
    CHECK_FALSE(subset_contains(c, 4));
    const std::vector<std::size_t> dup{1, 1};
    CHECK_THROWS_AS(encode_subset(dup), InputError);
    const std::vector<std::size_t> big{64};
    CHECK_THROWS_AS(encode_subset(big), InputError);
  }

  TEST_CASE("all subsets in colex order") {
    const auto s = all_subsets(4, 2);
    REQUIRE(s.size() == 6);
    const std::vector<std::vector<std::size_t>> expected{{0, 1}, {0, 2}, {1, 2}, {0, 3}, {1, 3}, {2, 3}};
    for (std::size_t k = 0; k < s.size(); ++k) CHECK(decode_subset(s[k]) == expected[k]);
    CHECK(binomial(10, 3) == 120);
    CHECK(binomial(3, 5) == 0);
    CHECK(all_subsets(5, 0).size() == 1);
  }
}
