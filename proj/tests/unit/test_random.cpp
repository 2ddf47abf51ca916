#include <doctest.h>

#include <cmath>
#include <set>

#include "qfreg/parallel.hpp"
#include "qfreg/random.hpp"

using namespace qfreg::rng;

TEST_SUITE("random") {
  TEST_CASE("Philox4x32-10 known-answer vectors") {
    auto r = Philox4x32::block({0, 0, 0, 0}, {0, 0});
    CHECK(r == Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    r = Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                          {0xffffffffu, 0xffffffffu});
    CHECK(r == Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    r = Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                          {0xa4093822u, 0x299f31d0u});
    CHECK(r == Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
  }

  TEST_CASE("streams are reproducible and separated") {
    CounterStream a(7, StreamTag::sample, 3, 4), b(7, StreamTag::sample, 3, 4);
    for (int k = 0; k < 100; ++k) CHECK(a.next_u64() == b.next_u64());
    std::set<std::uint64_t> firsts;
    for (auto tag : {StreamTag::sample, StreamTag::bouleau_g, StreamTag::bouleau_h}) {
      for (std::uint32_t m = 0; m < 10; ++m) {
        firsts.insert(CounterStream(7, tag, m, 0).next_u64());
        firsts.insert(CounterStream(7, tag, 0, m + 1).next_u64());
      }
    }
    CHECK(firsts.size() == 60);
    CHECK(derive_seed(1, 2) != derive_seed(1, 3));
    CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
  }

  TEST_CASE("moments of uniform, normal and gamma draws") {
    const int N = 200000;
    double su = 0, sn = 0, sn2 = 0, sn4 = 0, sg = 0, sg2 = 0, sgs = 0;
    CounterStream s(99, StreamTag::auxiliary, 0, 0);
    for (int k = 0; k < N; ++k) {
      const double u = s.uniform();
      CHECK_MESSAGE((u > 0.0 && u < 1.0), "uniform out of range");
      su += u;
      const double z = s.normal();
      sn += z;
      sn2 += z * z;
      sn4 += z * z * z * z;
      const double g = s.gamma(2.5);
      sg += g;
      sg2 += g * g;
      sgs += s.gamma(0.3);
    }
    CHECK(su / N == doctest::Approx(0.5).epsilon(0.01));
    CHECK(std::abs(sn / N) < 0.01);
    CHECK(sn2 / N == doctest::Approx(1.0).epsilon(0.01));
    CHECK(sn4 / N == doctest::Approx(3.0).epsilon(0.03));
    CHECK(sg / N == doctest::Approx(2.5).epsilon(0.01));
    CHECK(sg2 / N - (sg / N) * (sg / N) == doctest::Approx(2.5).epsilon(0.03));
    CHECK(sgs / N == doctest::Approx(0.3).epsilon(0.02));
  }

  TEST_CASE("parallel chunks cover the range in chunk order") {
    std::vector<int> hits(1000, 0);
    qfreg::parallel_chunks(1000, 64, [&](std::size_t c, std::size_t b, std::size_t e) {
      CHECK(b == c * 64);
      for (std::size_t i = b; i < e; ++i) ++hits[i];
    });
    for (int h : hits) CHECK(h == 1);
    CHECK(qfreg::chunk_count(1000, 64) == 16);
  }
}
