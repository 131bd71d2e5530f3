#include <doctest.h>

#include <cmath>
#include <numbers>

#include "roughdiv/errors.hpp"
#include "roughdiv/exact_counters.hpp"
#include "roughdiv/theory_formulas.hpp"

using namespace roughdiv;

namespace {

const double kLn2 = std::numbers::ln2;

double factorial(int n) { return std::tgamma(n + 1.0); }

// Membership in the block-vector set evaluated condition by condition with
// integer arithmetic: scale condition (b) by 2^{J2 + M}.
bool member_oracle(std::int64_t J1, std::int64_t J2, std::int64_t M, const std::vector<std::int64_t>& b,
                   std::int64_t k) {
  std::int64_t sum = 0;
  for (const auto x : b) sum += x;
  if (sum != k) return false;
  unsigned __int128 lhs = 0;
  std::int64_t prefix = 0;
  for (std::int64_t j = J1; j <= J2; ++j) {
    prefix += b[static_cast<std::size_t>(j - J1)];
    const std::int64_t e = prefix - j + J2 + M;
    if (e > 120) return false;
    lhs += static_cast<unsigned __int128>(1) << e;
  }
  if (lhs > (static_cast<unsigned __int128>(1) << J2)) return false;
  const auto v = static_cast<std::int64_t>(b.size());
  for (std::int64_t i = 1; i <= v; ++i) {
    if (b[static_cast<std::size_t>(i - 1)] > M + i * i) return false;
    if (b[static_cast<std::size_t>(v - i)] > M + i * i) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("constants") {
  CHECK(erdos_ford_tenenbaum_constant() == doctest::Approx(0.086071332).epsilon(1e-9 / 0.086));
  CHECK(std::abs(erdos_ford_tenenbaum_constant() - 0.086071332) < 1e-9);
  CHECK(regime_boundary() == doctest::Approx(1 - 1 / std::log(4.0)));
}

TEST_CASE("regime parameters") {
  const auto r = regime(1'000'000'000'000, 100'000, 100'000);
  CHECK(r.delta == doctest::Approx(1.0));
  CHECK(r.regime == Regime::NoClustering);
  CHECK(r.B == 1.0);
  CHECK(r.relaxed);
  const auto s = regime(100'000'000, 10'000, 5);
  CHECK(s.delta == doctest::Approx(std::log(std::log(5.0)) / std::log(std::log(1e4))));
  CHECK(s.regime == Regime::Clustering);
  CHECK_FALSE(s.relaxed);
  CHECK(s.E == erdos_ford_tenenbaum_constant());
  CHECK_THROWS_AS(regime(100, 3, 4), DomainError);
  CHECK_THROWS_AS(regime(100, 100, 3), DomainError);
  for (std::uint64_t y = 16; y <= 1'000'000; y *= 4)
    for (std::uint64_t w = 4; w <= y; w *= 2) {
      const auto p = regime(y * y, y, w);
      REQUIRE(p.delta >= 0);
      REQUIRE(p.delta <= 1);
      REQUIRE(p.B > 0);
      REQUIRE(p.B <= 1);
      const double raw = 1 / (std::sqrt(std::log(std::log(static_cast<double>(y)))) * ((1 - p.delta) * std::log(4.0) - 1));
      if (raw >= 1 || raw < 0) REQUIRE(p.B == 1.0);
      else REQUIRE(p.B == doctest::Approx(raw));
    }
}

TEST_CASE("theorem1_order") {
  const std::uint64_t x = 1'000'000'000'000;
  // regime (i)
  const auto r = regime(x, 100'000, 10'000);
  REQUIRE(r.regime == Regime::NoClustering);
  CHECK(theorem1_order(x, 100'000, 10'000) == doctest::Approx(1e12 / std::pow(std::log(1e4), 2)));
  // regime (ii)
  const auto s = regime(x, 100'000, 5);
  const double expected =
      1e12 * s.delta * s.B * std::pow(std::log(1e5), -s.E + std::log(1 - s.delta) / kLn2);
  CHECK(theorem1_order(x, 100'000, 5) == doctest::Approx(expected));
  // linear in x
  for (const std::uint64_t w : {4, 5, 50, 5000}) {
    CHECK(theorem1_order(2 * x, 100'000, w) == 2 * theorem1_order(x, 100'000, w));
    CHECK(hxy2y_order(2e12, 1e5) == 2 * hxy2y_order(1e12, 1e5));
  }
}

TEST_CASE("theorem1_order is continuous across the regime boundary") {
  const double boundary = regime_boundary();
  for (const std::uint64_t y : {1'000'000ULL, 1'000'000'000ULL, 1'000'000'000'000ULL}) {
    const double ly = std::log(static_cast<double>(y));
    // w just below and just above the boundary value log log w = boundary * log log y
    const double w_star = std::exp(std::exp(boundary * std::log(ly)));
    const auto below = static_cast<std::uint64_t>(std::floor(w_star * 0.999));
    const auto above = static_cast<std::uint64_t>(std::ceil(w_star * 1.001));
    REQUIRE(regime(y * 10, y, below).regime == Regime::Clustering);
    REQUIRE(regime(y * 10, y, above).regime == Regime::NoClustering);
    const double a = theorem1_order(y * 10, y, below);
    const double b = theorem1_order(y * 10, y, above);
    CHECK(a / b < 10);
    CHECK(b / a < 10);
  }
}

TEST_CASE("hxy2y_order") {
  const double ee = std::exp(std::exp(1.0));
  CHECK(hxy2y_order(1e6, ee) == doctest::Approx(1e6 / std::pow(std::exp(1.0), erdos_ford_tenenbaum_constant())));
  CHECK(hxy2y_order(1e6, 1e3) ==
        doctest::Approx(1e6 / (std::pow(std::log(1e3), erdos_ford_tenenbaum_constant()) *
                               std::pow(std::log(std::log(1e3)), 1.5))));
  CHECK_THROWS_AS(hxy2y_order(100, 2), DomainError);
}

TEST_CASE("heuristic estimate") {
  // w = y: only the k = 0 term survives in the first sum
  for (const double y : {100.0, 1e4, 1e8}) {
    REQUIRE(k0_of(y) >= 1);
    CHECK(heuristic_estimate(1e10, y, y) == doctest::Approx(1e10 / std::pow(std::log(y), 2)));
  }
  CHECK_THROWS_AS(heuristic_estimate(100, 10, 3), DomainError);
  CHECK_THROWS_AS(heuristic_estimate(100, 10, 11), DomainError);
  const auto t = heuristic_terms(1e12, 1e6, 10);
  CHECK(t.k0 == static_cast<std::int64_t>(std::floor(std::log(std::log(1e6)) / kLn2)));
  CHECK(t.value == doctest::Approx(1e12 / std::pow(std::log(1e6), 2) * (t.first + t.second)));
  // direct evaluation of both sums
  const double alpha = std::log(std::log(1e6)) - std::log(std::log(10.0));
  double first = 0;
  for (int k = 0; k <= t.k0; ++k) first += std::pow(2 * alpha, k) / factorial(k);
  double second = 0;
  for (int k = static_cast<int>(t.k0); k < 80; ++k) second += std::pow(alpha, k) / factorial(k);
  CHECK(t.first == doctest::Approx(first).epsilon(1e-13));
  CHECK(t.second == doctest::Approx(std::log(1e6) * second).epsilon(1e-13));
}

TEST_CASE("heuristic first-sum dominance and 1/delta excess") {
  // 2^{k0} is about log y, so the first sum leads only up to a constant
  // factor; the worst ratio second/first is recorded and bounded.
  double worst = 0;
  for (double ly10 = 3; ly10 <= 12; ly10 += 1) {
    const double y = std::pow(10.0, ly10);
    for (double w = 4; w * w <= y; w *= 3) {
      const auto t = heuristic_terms(1e18, y, w);
      worst = std::max(worst, t.second / t.first);
      const auto p = regime(1'000'000'000'000'000'000ULL, static_cast<std::uint64_t>(y), static_cast<std::uint64_t>(w));
      const double ratio = t.value / theorem1_order(p.x, p.y, p.w);
      CHECK(ratio >= p.delta / 50);
      CHECK(ratio <= 50 / p.delta);
    }
  }
  MESSAGE("heuristic: max second/first over the grid = " << worst);
  CHECK(worst < 4.0);
  for (const double y : {1e30, 1e100, 1e300}) {
    const auto far = heuristic_terms(1e18, y, 10);
    CHECK(far.second / far.first < 4.0);
  }
}

TEST_CASE("Poisson partial sums") {
  CHECK(poisson_partial_sum(4, 0, 2) == 13.0);
  CHECK(poisson_partial_sum(1, 0, 0) == 1.0);
  CHECK(poisson_partial_sum(10, 10, 10) == doctest::Approx(1e10 / 3628800.0).epsilon(1e-15));
  CHECK(poisson_partial_sum(3, 0, 60) == doctest::Approx(std::exp(3.0)).epsilon(1e-14));
  CHECK_THROWS_AS(poisson_partial_sum(0, 0, 1), DomainError);
  CHECK_THROWS_AS(poisson_partial_sum(1, 3, 2), DomainError);
  // log-space agrees with direct evaluation where both are finite
  for (const double x : {0.5, 3.0, 17.0, 60.0, 150.0})
    for (std::int64_t h = 0; h <= 160; h += 20)
      for (std::int64_t m = h; m <= 170; m += 15) {
        const double direct = poisson_partial_sum(x, h, m);
        if (log_poisson_partial_sum(x, h, m) < -700) continue;  // underflows a double
        REQUIRE(std::log(direct) == doctest::Approx(log_poisson_partial_sum(x, h, m)).epsilon(1e-12));
      }
  // beyond double range only the log form is finite
  const double big = log_poisson_partial_sum(800, 0, 1000);
  CHECK(std::isfinite(big));
  CHECK(big == doctest::Approx(800).epsilon(1e-9));
}

TEST_CASE("Norton bound") {
  CHECK(norton_bound(4, 0, 2) == 16.0);
  for (const double x : {1.0, 5.0, 30.0}) {
    const auto m = static_cast<std::int64_t>(x);
    CHECK(norton_bound(x, m, m) == doctest::Approx(poisson_partial_sum(x, m, m)));
  }
  CHECK_THROWS_AS(norton_bound(4, 0, 5), DomainError);
  CHECK(log_norton_bound(30, 3, 20) == doctest::Approx(std::log(norton_bound(30, 3, 20))));
  double lo = 1e300, hi = 0;
  for (int x = 1; x <= 60; ++x)
    for (int m = 0; m <= x; ++m)
      for (int h = 0; h <= m; ++h) {
        const double r = poisson_partial_sum(x, h, m) / norton_bound(x, h, m);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
  MESSAGE("norton ratio range [" << lo << ", " << hi << "]");
  CHECK(lo > 0);
  CHECK(hi / lo <= 100);
}

TEST_CASE("k0, k2 and case selection") {
  CHECK(k0_of(1e6) == 3);
  CHECK(k0_of(1e12) == 4);
  const double boundary = regime_boundary();
  for (double ly = 5; ly <= 400; ly *= 1.5)
    for (double frac = 0.05; frac < 1; frac += 0.05) {
      const double y = std::exp(ly);
      const double w = std::exp(std::pow(ly, frac));
      if (w < 4) continue;
      const double delta = std::log(std::log(w)) / std::log(std::log(y));
      const double a = std::log(std::log(y)) / kLn2;
      const double b = 2 * (std::log(std::log(y)) - std::log(std::log(w)));
      if (delta >= boundary) REQUIRE(b <= a + 1e-12);
      else REQUIRE(a <= b + 1e-12);
      REQUIRE(k2_of(y, w, 1) == static_cast<std::int64_t>(std::floor(std::min(a, b) - 2)));
    }
  const auto c1 = choose_k1(0.9, 100, 1);
  CHECK(c1.tag == LowerCase::I);
  CHECK(c1.k1 == 90);
  CHECK(c1.admissible);
  CHECK(choose_k1(0.25, 100, 1).tag == LowerCase::II);
  CHECK(choose_k1(0.25, 100, 1).k1 == 90);
  CHECK(choose_k1(0.1, 100, 1).tag == LowerCase::III);
  CHECK(choose_k1(0.1, 100, 1).k1 == 100);
  CHECK_FALSE(choose_k1(0.1, 5, 1).admissible);
}

TEST_CASE("proof indices and derived constants") {
  const auto ladder = lambda_ladder(100'000);
  // lambda = 1.9, 2, 7, 131, 20719
  const auto p = proof_indices(1000, 5, 1, ladder);
  CHECK(p.J1 == 3);  // lambda_2 = 7 > 5 >= lambda_1
  CHECK(p.J2 == 3);  // lambda_3 = 131 <= 1000 < lambda_4
  CHECK(p.v == 1);
  CHECK(p.s == 0);
  CHECK(p.u == static_cast<std::int64_t>(std::floor(std::log(std::log(5.0)) / kLn2)));
  const auto q = proof_indices(50'000, 2, 1, ladder);
  CHECK(q.J1 == 3);
  CHECK(q.J2 == 4);
  CHECK_THROWS_AS(proof_indices(10, 20, 1, ladder), DomainError);
  const auto e = meps_report(1, 1.5);
  CHECK(e.log2_epsilon == -207);
  CHECK(e.loglog_w0 == 200);
}

TEST_CASE("block vectors") {
  CHECK_THROWS_AS(make_block_vector(2, 1, 1, {}), DomainError);
  CHECK_THROWS_AS(make_block_vector(1, 2, 1, {1}), DomainError);
  CHECK_THROWS_AS(make_block_vector(1, 1, 1, {-1}), DomainError);
  const auto zero = make_block_vector(3, 5, 1, {0, 0, 0});
  // 2^-3 + 2^-4 + 2^-5 <= 2^-1
  CHECK(is_in_Bk(zero, 0));
  CHECK_FALSE(is_in_Bk(zero, 1));
  CHECK_FALSE(is_in_Bk(make_block_vector(1, 3, 1, {0, 0, 0}), 0));  // 1/2 + 1/4 + 1/8 > 1/2
  CHECK(is_in_Bk(make_block_vector(2, 3, 1, {0, 0}), 0));           // 1/4 + 1/8 <= 1/2
  // equality case of (b): 2^-2 + 2^-2 = 2^-1
  CHECK(dyadic_condition(make_block_vector(2, 3, 1, {0, 1})));
  CHECK_FALSE(dyadic_condition(make_block_vector(2, 4, 1, {0, 1, 0})));
  // (c) violated with b_{J1} = M + 2
  CHECK_FALSE(growth_caps(make_block_vector(20, 25, 1, {3, 0, 0, 0, 0, 0})));
  const auto ok = make_block_vector(20, 25, 1, {2, 1, 1, 0, 0, 0});
  CHECK(is_in_Bk(ok, 4));
  CHECK(member_oracle(20, 25, 1, ok.counts, 4));
}

TEST_CASE("enumerate_Bk against box enumeration") {
  for (std::int64_t J1 = 1; J1 <= 6; ++J1)
    for (std::int64_t J2 = J1; J2 <= J1 + 4; ++J2)
      for (const std::int64_t M : {0, 1, 2})
        for (std::int64_t k = 0; k <= 8; ++k) {
          const auto got = enumerate_Bk(J1, J2, M, k);
          // every vector in [0, k]^v, in lexicographic order
          std::vector<std::vector<std::int64_t>> expected;
          const auto v = static_cast<std::size_t>(J2 - J1 + 1);
          std::vector<std::int64_t> b(v, 0);
          while (true) {
            if (member_oracle(J1, J2, M, b, k)) expected.push_back(b);
            std::size_t i = v;
            while (i > 0 && b[i - 1] == k) b[--i] = 0;
            if (i == 0) break;
            ++b[i - 1];
          }
          REQUIRE(got.size() == expected.size());
          for (std::size_t i = 0; i < got.size(); ++i) {
            REQUIRE(got[i].counts == expected[i]);
            REQUIRE(is_in_Bk(got[i], k));
          }
        }
  CHECK(enumerate_Bk(1, 1, 1, 0).size() == 1);  // 2^-1 <= 2^-1
  CHECK(enumerate_Bk(1, 1, 2, 0).empty());
  CHECK_THROWS_AS(enumerate_Bk(1, 40, 50, 40, 1000), ResourceError);
}
