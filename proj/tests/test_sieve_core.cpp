#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "roughdiv/errors.hpp"
#include "roughdiv/sieve_core.hpp"

using namespace roughdiv;

TEST_CASE("spf table small values") {
  const auto t10 = build_spf(10);
  CHECK(t10.spf(9) == 3);
  CHECK(t10.spf(7) == 7);
  CHECK(build_spf(100).spf(91) == 7);
  CHECK(build_spf(100).spf(91) == oracle::least_factor(91));
}

TEST_CASE("spf table errors") {
  CHECK_THROWS_AS(build_spf(1), DomainError);
  CHECK_THROWS_AS(build_spf(1000, 500), ResourceError);
  const auto t = build_spf(50);
  CHECK_THROWS_AS(t.spf(51), DomainError);
  CHECK_THROWS_AS(factorize(1, t), DomainError);
  CHECK_THROWS_AS(factorize(51, t), DomainError);
}

TEST_CASE("factorize examples") {
  const auto t = build_spf(1000);
  CHECK(factorize(12, t).factors == std::vector<PrimePower>{{2, 2}, {3, 1}});
  CHECK(factorize(97, t).factors == std::vector<PrimePower>{{97, 1}});
  CHECK(factorize(360, t).factors == std::vector<PrimePower>{{2, 3}, {3, 2}, {5, 1}});
  CHECK(factorize(360, t).tau() == 24);
  CHECK_FALSE(factorize(360, t).squarefree());
  CHECK(factorize(30, t).squarefree());
  CHECK(factorize_trial(360).factors == factorize(360, t).factors);
}

TEST_CASE("spf and factorization agree with trial division up to 1e5") {
  const std::uint64_t limit = 100000;
  const auto t = build_spf(limit);
  for (std::uint64_t n = 2; n <= limit; ++n) {
    REQUIRE(t.spf(n) == oracle::least_factor(n));
    REQUIRE((t.spf(n) == n) == oracle::is_prime(n));
    const auto f = factorize(n, t);
    std::uint64_t prod = 1;
    for (std::size_t i = 0; i < f.factors.size(); ++i) {
      if (i > 0) REQUIRE(f.factors[i - 1].prime < f.factors[i].prime);
      for (std::uint32_t e = 0; e < f.factors[i].exponent; ++e) prod *= f.factors[i].prime;
    }
    REQUIRE(prod == n);
  }
}

TEST_CASE("is_rough") {
  const auto t = build_spf(100000);
  CHECK(is_rough(1, 1000, t));
  CHECK(is_rough(35, 3, t));
  CHECK_FALSE(is_rough(35, 5, t));
  CHECK_THROWS_AS(is_rough(0, 3, t), DomainError);
  for (const std::uint64_t w : {2, 3, 5, 10, 100}) {
    for (std::uint64_t n = 1; n <= 100000; ++n) {
      const bool expected = oracle::rough(n, w);
      REQUIRE(is_rough(n, w, t) == expected);
      if (n % 97 == 0) REQUIRE(is_rough_trial(n, w) == expected);
    }
  }
}

TEST_CASE("segmented prime enumeration") {
  const auto primes = primes_in_range(1, 200000);
  CHECK(primes == primes_up_to(200000));
  CHECK(primes.size() == 17984);
  // window crossing several segments
  const auto window = primes_in_range(999'000, 3'200'000);
  for (std::size_t i = 0; i < window.size(); i += 997) CHECK(oracle::is_prime(window[i]));
  CHECK(window.front() == 999'007);
  CHECK(primes_in_range(24, 28).empty());
}

TEST_CASE("mertens_sum") {
  CHECK(mertens_sum(1, 2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(mertens_sum(2, 7) == doctest::Approx(1.0 / 3 + 1.0 / 5 + 1.0 / 7).epsilon(1e-15));
  CHECK(mertens_sum(7, 7) == 0.0);
  CHECK_THROWS_AS(mertens_sum(8, 7), DomainError);
  // reference value from an independent sympy primerange sum
  CHECK(mertens_sum(1, 10'000'000) - std::log(std::log(1e7)) == doctest::Approx(0.26150678697629326).epsilon(1e-9));
}

TEST_CASE("lambda ladder") {
  const auto ladder = lambda_ladder(100);
  REQUIRE(ladder.lambdas.size() >= 3);
  CHECK(ladder.lambdas[0] == 1);
  CHECK(ladder.lambdas[1] == 2);
  CHECK(ladder.lambdas[2] == 7);
  CHECK(ladder.block(1) == std::vector<std::uint64_t>{2});
  CHECK(ladder.block(2) == std::vector<std::uint64_t>{3, 5, 7});
  CHECK_THROWS_AS(lambda_ladder(1), DomainError);
}

TEST_CASE("lambda ladder greediness up to 1e6") {
  const auto ladder = lambda_ladder(1'000'000);
  const long double log2 = std::numbers::ln2_v<long double>;
  std::uint64_t expected_start = 2;
  for (std::size_t j = 1; j <= ladder.size(); ++j) {
    const auto& block = ladder.block(j);
    REQUIRE(!block.empty());
    CHECK(block.front() == expected_start);
    CHECK(block.back() == ladder.lambdas[j]);
    CHECK(ladder.lambdas[j] > ladder.lambdas[j - 1]);
    CHECK(oracle::is_prime(ladder.lambdas[j]));
    long double s = 0;
    for (const auto p : block) s += 1.0L / p;
    std::uint64_t next = ladder.lambdas[j] + 1;
    while (!oracle::is_prime(next)) ++next;
    CHECK(s <= log2);
    CHECK(s + 1.0L / next > log2);
    expected_start = next;
  }
  // log lambda_j roughly doubles with j
  const double k = ladder_spread(ladder);
  MESSAGE("ladder to 1e6: J = " << ladder.size() << ", measured K' = " << k);
  CHECK(k < 3.0);
}
