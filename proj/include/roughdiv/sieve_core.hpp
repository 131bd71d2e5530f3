#pragma once
// Prime generation, factorization, roughness tests, prime reciprocal sums
// and the greedy prime-block ladder.

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace roughdiv {

inline constexpr std::uint64_t kDefaultSpfBudget = std::uint64_t{1} << 31;
inline constexpr std::uint64_t kSegmentSize = std::uint64_t{1} << 20;

// Smallest-prime-factor table over [0, limit]. Immutable after construction.
class SpfTable {
 public:
  SpfTable() = default;

  std::uint64_t limit() const { return limit_; }
  // Smallest prime factor of n, 2 <= n <= limit.
  std::uint32_t spf(std::uint64_t n) const;
  std::uint32_t operator[](std::uint64_t n) const { return spf(n); }
  bool is_prime(std::uint64_t n) const { return n >= 2 && n <= limit_ && spf_[n] == n; }

 private:
  friend SpfTable build_spf(std::uint64_t limit, std::uint64_t budget);
  std::uint64_t limit_ = 0;
  std::vector<std::uint32_t> spf_;
};

struct PrimePower {
  std::uint64_t prime;
  std::uint32_t exponent;
  bool operator==(const PrimePower&) const = default;
};

struct Factorization {
  std::uint64_t n = 1;
  std::vector<PrimePower> factors;  // increasing primes

  std::size_t omega() const { return factors.size(); }
  std::uint64_t tau() const;
  bool squarefree() const;
};

// Throws ResourceError when limit exceeds budget, DomainError when limit < 2.
SpfTable build_spf(std::uint64_t limit, std::uint64_t budget = kDefaultSpfBudget);

Factorization factorize(std::uint64_t n, const SpfTable& table);
// Trial division; any n >= 1.
Factorization factorize_trial(std::uint64_t n);

// P^-(n) > w, with P^-(1) = infinity.
bool is_rough(std::uint64_t n, std::uint64_t w, const SpfTable& table);
// Table-free variant: trial division by primes <= w.
bool is_rough_trial(std::uint64_t n, std::uint64_t w);

// All primes <= limit (plain Eratosthenes over odd numbers).
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

// Calls visit(p) for each prime p in [lo, hi], in increasing order, using a
// segmented sieve with segments of kSegmentSize numbers.
void for_each_prime(std::uint64_t lo, std::uint64_t hi,
                    const std::function<void(std::uint64_t)>& visit);
std::vector<std::uint64_t> primes_in_range(std::uint64_t lo, std::uint64_t hi);

// Sum of 1/p over primes a < p <= b.
double mertens_sum(std::uint64_t a, std::uint64_t b);

// Primes partitioned greedily into blocks D_j = (lambda_{j-1}, lambda_j] with
// reciprocal sum <= log 2. lambdas[0] = 1 stands for the start value 1.9; the
// scan of block 1 starts at p = 2.
struct LambdaLadder {
  std::vector<std::uint64_t> lambdas;
  std::vector<std::vector<std::uint64_t>> blocks;  // blocks[j-1] = D_j

  std::size_t size() const { return blocks.size(); }
  const std::vector<std::uint64_t>& block(std::size_t j) const { return blocks.at(j - 1); }
  // Reciprocal sum of D_j.
  double block_sum(std::size_t j) const;
};

// Every lambda_j <= limit, together with its block.
LambdaLadder lambda_ladder(std::uint64_t limit);

// Smallest K' with 2^{j-K'} <= log lambda_j <= 2^{j+K'} for all j >= 1 of
// the ladder, i.e. max_j |log2(log lambda_j) - j|.
double ladder_spread(const LambdaLadder& ladder);

}  // namespace roughdiv
