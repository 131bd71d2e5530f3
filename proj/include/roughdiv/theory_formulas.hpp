#pragma once
// Closed-form evaluators for the order-of-magnitude formulas, Poisson partial
// sums, and the block-vector machinery of the lower-bound argument.

#include <cstdint>
#include <string>
#include <vector>

#include "roughdiv/sieve_core.hpp"

namespace roughdiv {

// 1 - (1 + log log 2) / log 2 = 0.086071332...
double erdos_ford_tenenbaum_constant();

// Boundary between the two regimes: delta = 1 - 1/log 4.
double regime_boundary();

enum class Regime { NoClustering, Clustering };  // (i) and (ii)

struct RegimeParams {
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  std::uint64_t w = 0;
  double delta = 0;  // log log w / log log y
  double E = 0;
  double B = 1;      // min(1, (log log y)^{-1/2} ((1 - delta) log 4 - 1)^{-1})
  Regime regime = Regime::Clustering;
  // Set when the inputs lie outside 4 <= w <= y/8, 4 <= y <= sqrt(x).
  bool relaxed = false;
};

// Throws DomainError when y < 4 or w < 4.
RegimeParams regime(std::uint64_t x, std::uint64_t y, std::uint64_t w);

// x / log^2 w in regime (i); x delta B (log y)^{-E + log(1-delta)/log 2} in (ii).
double theorem1_order(std::uint64_t x, std::uint64_t y, std::uint64_t w);

// x / ((log y)^E (log log y)^{3/2}); y >= 3.
double hxy2y_order(double x, double y);

struct HeuristicTerms {
  std::int64_t k0 = 0;
  double first = 0;   // sum_{k <= k0} (2 alpha)^k / k!
  double second = 0;  // (log y) sum_{k >= k0} alpha^k / k!
  double value = 0;   // (x / log^2 y) (first + second)
};

HeuristicTerms heuristic_terms(double x, double y, double w);
double heuristic_estimate(double x, double y, double w);

// sum_{h <= k <= m} xr^k / k!
double poisson_partial_sum(double xr, std::int64_t h, std::int64_t m);
double log_poisson_partial_sum(double xr, std::int64_t h, std::int64_t m);
// min(sqrt(xr), xr / (xr - m), m - h + 1) xr^m / m!, requires h <= m <= xr.
double norton_bound(double xr, std::int64_t h, std::int64_t m);
double log_norton_bound(double xr, std::int64_t h, std::int64_t m);

// log(xr^m / m!)
double log_poisson_term(double xr, std::int64_t m);

// floor(log log y / log 2)
std::int64_t k0_of(double y);
// floor(min(log log y / log 2, 2 (log log y - log log w)) - 2M)
std::int64_t k2_of(double y, double w, std::int64_t M);

enum class LowerCase { I, II, III };

struct K1Choice {
  LowerCase tag;
  std::int64_t k1;
  bool admissible;  // 10M <= k1 <= k2
};

// Case I: delta >= 1 - 1/log 4; II: 1/5 <= delta < 1 - 1/log 4; III: below.
// k1 = floor(0.9 k2) in cases I and II, k1 = k2 in case III.
K1Choice choose_k1(double delta, std::int64_t k2, std::int64_t M);

// Indices and sizes derived from (w, y) and the ladder.
struct ProofIndices {
  std::int64_t J1 = 0;  // min{j : lambda_{j-1} > w}
  std::int64_t J2 = 0;  // max{j : lambda_j <= y}
  std::int64_t v = 0;   // J2 - J1 + 1
  std::int64_t s = 0;   // J1 - 2 - M
  std::int64_t u = 0;   // floor(log log w / log 2)
  std::int64_t v_upper = 0;  // floor((log log y - log log w) / log 2)
  std::int64_t k0 = 0;
  std::int64_t k2 = 0;
};

// The ladder must reach past y so that J2 is determined.
ProofIndices proof_indices(double y, double w, std::int64_t M, const LambdaLadder& ladder);

// Derived constants of the lower-bound setup, expressed in log form since
// their raw values under- or overflow.
struct MepsReport {
  double log2_epsilon;  // -200M - 2K - 4
  double loglog_w0;     // 200M
};
MepsReport meps_report(double M, double K);

// (b_{J1}, ..., b_{J2}) together with J1, J2 and the cap parameter M.
struct BlockVector {
  std::int64_t J1 = 1;
  std::int64_t J2 = 1;
  std::int64_t M = 1;
  std::vector<std::int64_t> counts;

  std::int64_t v() const { return J2 - J1 + 1; }
  std::int64_t total() const;
  std::int64_t at(std::int64_t j) const { return counts.at(static_cast<std::size_t>(j - J1)); }
  bool operator==(const BlockVector&) const = default;
};

BlockVector make_block_vector(std::int64_t J1, std::int64_t J2, std::int64_t M, std::vector<std::int64_t> counts);

// sum_{j=J1}^{J2} 2^{-j + b_{J1} + ... + b_j} <= 2^{-M}, decided exactly.
bool dyadic_condition(const BlockVector& bv);
// b_{J1+i-1} <= M + i^2 and b_{J2-i+1} <= M + i^2 for i >= 1.
bool growth_caps(const BlockVector& bv);
bool is_in_Bk(const BlockVector& bv, std::int64_t k);

inline constexpr std::uint64_t kDefaultBkBudget = 1'000'000;

// All vectors of the set, in lexicographic order of counts. Throws
// ResourceError if more than budget candidates satisfy (a), (c) and (d).
std::vector<BlockVector> enumerate_Bk(std::int64_t J1, std::int64_t J2, std::int64_t M, std::int64_t k,
                                      std::uint64_t budget = kDefaultBkBudget);

}  // namespace roughdiv
