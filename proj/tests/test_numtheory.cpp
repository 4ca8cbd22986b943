#include <doctest.h>

#include <numeric>
#include <random>
#include <set>

#include "oracles.hpp"
#include "qzeta/numtheory.hpp"

using namespace qzeta;

TEST_CASE("kronecker symbol examples") {
  CHECK(kronecker(5, 2) == -1);
  CHECK(kronecker(12, 6) == 0);
  CHECK(kronecker(8, 3) == -1);
  CHECK(kronecker(5, 0) == 0);
  CHECK(kronecker(1, 0) == 1);
  CHECK(kronecker(8, 2) == 0);
  CHECK(kronecker(17, 2) == 1);
  CHECK(kronecker(13, 1) == 1);
}

TEST_CASE("kronecker agrees with the Euler-criterion oracle") {
  for (std::int64_t d : {5, 8, 12, 13, 17, 21, 24, 28, 29, 40, 1685, 3869, 999997}) {
    for (std::uint64_t n = 1; n < 600; ++n) {
      REQUIRE_MESSAGE(kronecker(d, n) == oracle::kronecker(d, n), "d=" << d << " n=" << n);
    }
  }
}

TEST_CASE("fundamental discriminant membership") {
  CHECK(is_fundamental_discriminant(5));
  CHECK_FALSE(is_fundamental_discriminant(9));
  CHECK_FALSE(is_fundamental_discriminant(20));
  CHECK_FALSE(is_fundamental_discriminant(1));
  CHECK_FALSE(is_fundamental_discriminant(-3));
  CHECK(is_fundamental_discriminant(8));
  CHECK(is_fundamental_discriminant(12));
  CHECK_FALSE(is_fundamental_discriminant(16));
  for (std::int64_t d = -50; d < 20000; ++d) {
    REQUIRE_MESSAGE(is_fundamental_discriminant(d) == oracle::is_fundamental(d), "d=" << d);
  }
}

TEST_CASE("FundamentalDiscriminant rejects invalid values") {
  CHECK_THROWS_AS(FundamentalDiscriminant(9), std::invalid_argument);
  CHECK_FALSE(FundamentalDiscriminant::make(20).has_value());
  CHECK(FundamentalDiscriminant::make(13)->value() == 13);
  CHECK(FundamentalDiscriminant(5) < FundamentalDiscriminant(8));
}

TEST_CASE("enumeration examples") {
  std::vector<std::int64_t> got;
  for (auto d : enumerate_fundamental_discriminants(2, 30)) got.push_back(d.value());
  CHECK(got == std::vector<std::int64_t>{5, 8, 12, 13, 17, 21, 24, 28, 29});
  CHECK(enumerate_fundamental_discriminants(2, 2).empty());
  CHECK(enumerate_fundamental_discriminants(2, 5000).size() == 1516);
  CHECK(enumerate_fundamental_discriminants(2, 1000000).size() == 303957);
}

TEST_CASE("enumeration equals membership on arbitrary windows") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const std::int64_t lo = static_cast<std::int64_t>(rng() % 200000);
    const std::int64_t hi = lo + static_cast<std::int64_t>(rng() % 3000);
    std::vector<std::int64_t> expect;
    for (auto d = lo; d < hi; ++d) {
      if (oracle::is_fundamental(d)) expect.push_back(d);
    }
    std::vector<std::int64_t> got;
    for (auto d : enumerate_fundamental_discriminants(lo, hi)) got.push_back(d.value());
    REQUIRE_MESSAGE(got == expect, "window [" << lo << ", " << hi << ")");
  }
}

TEST_CASE("character properties on D < 10^4") {
  for (auto disc : enumerate_fundamental_discriminants(2, 10000)) {
    const QuadraticCharacter chi(disc);
    const auto D = static_cast<std::uint64_t>(disc.value());
    REQUIRE(chi.period() == D);
    long sum = 0;
    for (std::uint64_t a = 1; a <= D; ++a) {
      sum += chi(a);
      REQUIRE(kronecker(disc.value(), a) == kronecker(disc.value(), a + D));
      REQUIRE((chi(a) == 0) == (std::gcd(a, D) > 1));
    }
    REQUIRE(sum == 0);
  }
}

TEST_CASE("complete multiplicativity") {
  std::mt19937_64 rng(5);
  for (std::int64_t d : {5, 8, 12, 13, 24, 40, 1685, 9997}) {
    if (!is_fundamental_discriminant(d)) continue;
    for (int i = 0; i < 20000; ++i) {
      const std::uint64_t a = 1 + rng() % 10000, b = 1 + rng() % 10000;
      REQUIRE(kronecker(d, a * b) == kronecker(d, a) * kronecker(d, b));
    }
  }
}

TEST_CASE("odd primes") {
  CHECK(odd_primes_below(10) == std::vector<std::uint64_t>{3, 5, 7});
  CHECK(odd_primes_below(3).empty());
  CHECK(odd_primes_below(4) == std::vector<std::uint64_t>{3});
  CHECK(odd_primes_below(100).size() == 24);
  CHECK(odd_primes_below(5000).size() == 668);
  CHECK(is_prime(691));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(91));
}

TEST_CASE("divisor sigma sieve") {
  const auto s1 = divisor_sigma_sieve(1, 10000);
  const auto s3 = divisor_sigma_sieve(3, 10000);
  CHECK(s1[6] == 12);
  CHECK(s3[2] == 9);
  CHECK(s1[1] == 1);
  CHECK(s1.exponent() == 1);
  CHECK(s3.limit() == 10000);
  for (std::uint64_t n = 1; n <= 10000; ++n) {
    REQUIRE(s1[n] == oracle::sigma(1, n));
    REQUIRE(s3[n] == oracle::sigma(3, n));
  }
  CHECK_THROWS_AS(divisor_sigma_sieve(2, 10), std::invalid_argument);
  CHECK_THROWS_AS(divisor_sigma_sieve(1, 0), std::invalid_argument);
}

TEST_CASE("p-adic valuation examples") {
  CHECK(p_adic_valuation(Rational(-2, 5), 5) == PValuation(-1));
  CHECK(p_adic_valuation(Rational(-6), 3) == PValuation(1));
  CHECK(p_adic_valuation(Rational(7, 4), 3) == PValuation(0));
  CHECK(p_adic_valuation(Rational(0), 3).is_infinite());
  CHECK(PValuation(3) < PValuation::infinity());
  CHECK((PValuation(2) + PValuation::infinity()).is_infinite());
}

TEST_CASE("valuation additivity on random rationals") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    const std::uint64_t p = std::vector<std::uint64_t>{3, 5, 7, 37}[rng() % 4];
    auto random_rational = [&] {
      Integer num = Integer(static_cast<long>(rng() % 2000000)) - 1000000;
      if (num == 0) num = 1;
      num *= Integer(static_cast<unsigned long>(oracle::power(p, rng() % 4)));
      Integer den = Integer(static_cast<unsigned long>(1 + rng() % 100000)) *
                    Integer(static_cast<unsigned long>(oracle::power(p, rng() % 3)));
      Rational q(num, den);
      q.canonicalize();
      return q;
    };
    const Rational x = random_rational(), y = random_rational();
    Rational xy = x * y;
    REQUIRE(p_adic_valuation(xy, p) == p_adic_valuation(x, p) + p_adic_valuation(y, p));
  }
}
