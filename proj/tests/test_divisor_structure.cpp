#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "roughdiv/divisor_structure.hpp"
#include "roughdiv/errors.hpp"

using namespace roughdiv;

namespace {

constexpr double kTol = 1e-9;
const double kLog2 = std::numbers::ln2;

}  // namespace

TEST_CASE("divisors") {
  CHECK(divisors(6).divisors == std::vector<std::uint64_t>{1, 2, 3, 6});
  CHECK(divisors(1).divisors == std::vector<std::uint64_t>{1});
  CHECK(divisors(36).divisors == oracle::all_divisors(36));
  CHECK(divisors(36).divisors == std::vector<std::uint64_t>{1, 2, 3, 4, 6, 9, 12, 18, 36});
  // 2^20 has 21 divisors; 30030^2 has 3^6 = 729
  CHECK(divisors(std::uint64_t{1} << 20).tau() == 21);
  CHECK_THROWS_AS(divisors(720720, 100), ResourceError);
  for (std::uint64_t n = 1; n <= 2000; ++n) REQUIRE(divisors(n).divisors == oracle::all_divisors(n));
}

TEST_CASE("tau_interval") {
  CHECK(tau_interval(12, 2, 4) == 2);
  CHECK(tau_interval(7, 8, 100) == 0);
  for (std::uint64_t n = 1; n <= 1000; ++n) REQUIRE(tau_interval(n, 0, static_cast<double>(n)) == divisors(n).tau());
  CHECK_THROWS_AS(tau_interval(12, 4, 4), DomainError);
}

TEST_CASE("script_L examples") {
  CHECK(L_measure(1) == kLog2);
  CHECK(L_measure(2) == doctest::Approx(2 * kLog2).epsilon(1e-15));
  CHECK(std::abs(L_measure(6) - std::log(12.0)) < kTol);
  CHECK(std::abs(L_measure(6) - oracle::L_measure(6)) < kTol);
  const auto u = script_L(6);
  CHECK(u.intervals().size() == 1);
  CHECK(u.contains(0.0));
  CHECK_FALSE(u.contains(std::log(6.0)));
  // 1 and 5: windows [-log2, 0) and [log 2.5, log 5) are apart
  CHECK(script_L(5).intervals().size() == 2);
  CHECK_THROWS_AS(script_L(0), DomainError);
}

TEST_CASE("interval union is canonical") {
  const IntervalUnion u({{2, 3}, {0, 1}, {1, 2}, {5, 5}, {4, 4.5}, {0.5, 0.7}});
  REQUIRE(u.intervals().size() == 2);
  CHECK(u.intervals()[0].lo == 0);
  CHECK(u.intervals()[0].hi == 3);
  CHECK(u.measure() == doctest::Approx(3.5));
}

TEST_CASE("L matches the elementary-piece oracle and is insertion-order invariant") {
  std::mt19937_64 rng(7);
  for (std::uint64_t a = 1; a <= 3000; ++a) {
    const auto d = divisors(a);
    REQUIRE(std::abs(script_L(d).measure() - oracle::L_measure(a)) < kTol);
    std::vector<double> logs;
    for (const auto v : d.divisors) logs.push_back(std::log(static_cast<double>(v)));
    std::shuffle(logs.begin(), logs.end(), rng);
    REQUIRE(std::abs(script_L_from_logs(logs).measure() - script_L(d).measure()) < 1e-12);
  }
}

TEST_CASE("W_star and isolated divisors") {
  CHECK(W_star(1) == 0);
  CHECK(W_star(6) == 3);
  for (const std::uint64_t p : {3, 5, 7, 101, 7919}) {
    CHECK(W_star(p) == 0);
    CHECK(isolated_divisor_count(p) == 2);
  }
  CHECK(isolated_divisor_count(6) == 1);
  CHECK(isolated_divisor_count(1) == 1);
  for (std::uint64_t a = 1; a <= 3000; ++a) {
    REQUIRE(W_star(a) == oracle::W_star(a));
    REQUIRE(isolated_divisor_count(a) == oracle::isolated(a));
  }
}

TEST_CASE("L bound (i) and the isolated-divisor chain for a <= 1e5") {
  for (std::uint64_t a = 1; a <= 100000; ++a) {
    const auto d = divisors(a);
    const double L = script_L(d).measure();
    const double tau = static_cast<double>(d.tau());
    const auto iso = isolated_divisor_count(d);
    const auto ws = W_star(d);
    REQUIRE(L >= kLog2 * static_cast<double>(iso) - kTol);
    REQUIRE(static_cast<double>(iso) >= tau - static_cast<double>(ws));
    REQUIRE(L <= std::min(tau * kLog2, kLog2 + std::log(static_cast<double>(a))) + kTol);
  }
}

TEST_CASE("L bound (ii) on random coprime pairs") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::uint64_t> pick(1, 1000);
  int checked = 0;
  while (checked < 200) {
    const std::uint64_t a = pick(rng);
    const std::uint64_t b = std::uniform_int_distribution<std::uint64_t>(1, 1'000'000 / a)(rng);
    if (std::gcd(a, b) != 1) continue;
    ++checked;
    REQUIRE(L_measure(a * b) <= static_cast<double>(divisors(b).tau()) * L_measure(a) + kTol);
  }
}

TEST_CASE("L bound (iii) on squarefree products up to 1e6") {
  const auto spf = build_spf(1'000'000);
  for (std::uint64_t a = 2; a <= 1'000'000; ++a) {
    const auto f = factorize(a, spf);
    if (!f.squarefree()) continue;
    const auto k = static_cast<int>(f.omega());
    double best = std::ldexp(kLog2, k);  // j = 0
    double log_prefix = 0;
    for (int j = 1; j <= k; ++j) {
      log_prefix += std::log(static_cast<double>(f.factors[static_cast<std::size_t>(j - 1)].prime));
      best = std::min(best, std::ldexp(log_prefix + kLog2, k - j));
    }
    REQUIRE(L_measure(a) <= best + kTol);
  }
}
