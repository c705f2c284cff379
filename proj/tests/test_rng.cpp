#include <cmath>
#include <vector>

#include <doctest.h>

#include "aniso/errors.hpp"
#include "aniso/rng.hpp"

using namespace aniso;

TEST_SUITE("rng") {
  TEST_CASE("philox4x32-10 known answers") {
    CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
  }

  TEST_CASE("normal quantile") {
    CHECK(normal_quantile(0.5) == 0.0);
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-15));
    CHECK(normal_quantile(1e-10) == doctest::Approx(-6.361340902404056).epsilon(1e-14));
    CHECK(normal_quantile(0.3) == -normal_quantile(0.7));
    CHECK_THROWS_AS(normal_quantile(0.0), DomainError);
    CHECK_THROWS_AS(normal_quantile(1.0), DomainError);
  }

  TEST_CASE("addressing is order independent") {
    const NormalSource source(42);
    std::vector<double> block(9);
    source.fill(3, 5, block);
    for (std::size_t i = 0; i < block.size(); ++i) CHECK(block[i] == source(3, 5 + i));
    std::vector<double> even(4);
    source.fill(3, 4, even);
    CHECK(even[1] == block[0]);
    CHECK(source(3, 0) != source(4, 0));
    CHECK(NormalSource(43)(3, 0) != source(3, 0));
    CHECK(NormalSource(42)(7, 11) == source(7, 11));
  }

  TEST_CASE("moments") {
    const NormalSource source(2024);
    const int n = 200000;
    double m1 = 0.0, m2 = 0.0, m4 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double z = source(i % 97, static_cast<std::uint64_t>(i / 97));
      m1 += z;
      m2 += z * z;
      m4 += z * z * z * z;
    }
    m1 /= n;
    m2 /= n;
    m4 /= n;
    // Five standard errors of each sample moment.
    CHECK(std::fabs(m1) < 5.0 * std::sqrt(1.0 / n));
    CHECK(std::fabs(m2 - 1.0) < 5.0 * std::sqrt(2.0 / n));
    CHECK(std::fabs(m4 - 3.0) < 5.0 * std::sqrt(96.0 / n));
  }
}
