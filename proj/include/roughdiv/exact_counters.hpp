#pragma once
// Exact counts: integers with a divisor in an interval restricted to rough
// numbers, rough-integer counts, distinct entries of the restricted
// multiplication table, the Farey product set, and exact sums over
// squarefree integers built from a set of primes.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "roughdiv/sieve_core.hpp"
#include "roughdiv/theory_formulas.hpp"

namespace roughdiv {

inline constexpr std::uint64_t kDefaultMarkingBudget = std::uint64_t{1} << 33;
inline constexpr std::uint64_t kMaxTableSide = std::uint64_t{1} << 16;
inline constexpr std::uint64_t kDefaultTableBits = kMaxTableSide * kMaxTableSide + 1;
inline constexpr std::uint64_t kMaxFareyOrder = 200;
inline constexpr std::size_t kMaxSubsetPrimes = 24;
inline constexpr std::uint64_t kMaxBlockCombinations = 10'000'000;
inline constexpr std::uint64_t kDefaultDivisorWork = std::uint64_t{1} << 30;

struct CountQuery {
  std::uint64_t x = 1;
  std::uint64_t y = 0;
  std::uint64_t z = 1;
  std::uint64_t w = 1;
  bool squarefree_only = false;
};

struct MarkingOptions {
  std::uint64_t budget = kDefaultMarkingBudget;
  unsigned threads = 0;  // 0: hardware concurrency
};

// #{n <= x : P^-(n) > w, d | n for some d in (y, z]}, optionally restricted
// to squarefree n. Requires x >= 1, y < z, w >= 1 and x <= budget.
std::uint64_t count_H(const CountQuery& q, const MarkingOptions& opts = {});

// #{n <= x : P^-(n) > z}, or only n in (x/2, x] when half is set.
std::uint64_t rough_count(std::uint64_t x, std::uint64_t z, bool half, const MarkingOptions& opts = {});

// Distinct a*b, 1 <= a, b <= N, with P^-(ab) > w. N <= 2^16 and N^2 + 1 <= max_bits.
std::uint64_t mult_table_count(std::uint64_t N, std::uint64_t w, std::uint64_t max_bits = kDefaultTableBits);

// Distinct reduced products (a1 a2)/(b1 b2) with a_i/b_i Farey fractions of order N.
std::uint64_t farey_product_count(std::uint64_t N);

enum class Weight { Reciprocal, LogOverA, LOverA, TauOverA, WstarOverA };

std::string_view weight_name(Weight w);
Weight parse_weight(std::string_view name);

struct PSumQuery {
  std::uint64_t w = 2;
  std::uint64_t t = 2;
  std::optional<std::int64_t> k;  // nullopt: all omega(a)
  Weight weight = Weight::Reciprocal;
};

struct SumOptions {
  std::size_t max_primes = kMaxSubsetPrimes;
  // Bound on the total number of divisors touched for the L and W* weights.
  std::uint64_t divisor_work = kDefaultDivisorWork;
};

// Sum of the weight over squarefree a composed of primes in (w, t], 1 included.
double sum_over_P(const PSumQuery& q, const SumOptions& opts = {});

// Sum of the weight over squarefree a with exactly b_j prime factors from D_j.
double sum_over_Ab(const BlockVector& b, const LambdaLadder& ladder, Weight weight,
                   std::uint64_t max_combinations = kMaxBlockCombinations);

// Weight of the squarefree integer with the given distinct primes.
double weight_of(std::span<const std::uint64_t> primes, Weight weight);

}  // namespace roughdiv
