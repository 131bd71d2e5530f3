#include "roughdiv/sieve_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "roughdiv/errors.hpp"

namespace roughdiv {

namespace {

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

std::uint32_t SpfTable::spf(std::uint64_t n) const {
  if (n < 2 || n > limit_) {
    throw DomainError("spf: n=" + std::to_string(n) + " outside [2, " + std::to_string(limit_) + "]");
  }
  return spf_[n];
}

std::uint64_t Factorization::tau() const {
  std::uint64_t t = 1;
  for (const auto& f : factors) t *= f.exponent + 1;
  return t;
}

bool Factorization::squarefree() const {
  return std::all_of(factors.begin(), factors.end(), [](const PrimePower& f) { return f.exponent == 1; });
}

SpfTable build_spf(std::uint64_t limit, std::uint64_t budget) {
  if (limit < 2) throw DomainError("build_spf: limit must be >= 2");
  if (limit + 1 > budget) {
    throw ResourceError("build_spf: limit " + std::to_string(limit) + " exceeds table budget " +
                        std::to_string(budget));
  }
  SpfTable t;
  t.limit_ = limit;
  t.spf_.assign(limit + 1, 0);
  const std::uint64_t root = isqrt(limit);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (t.spf_[i] != 0) continue;
    t.spf_[i] = static_cast<std::uint32_t>(i);
    if (i > root) continue;
    for (std::uint64_t j = i * i; j <= limit; j += i) {
      if (t.spf_[j] == 0) t.spf_[j] = static_cast<std::uint32_t>(i);
    }
  }
  return t;
}

Factorization factorize(std::uint64_t n, const SpfTable& table) {
  if (n < 2 || n > table.limit()) {
    throw DomainError("factorize: n=" + std::to_string(n) + " outside [2, " +
                      std::to_string(table.limit()) + "]");
  }
  Factorization f;
  f.n = n;
  while (n > 1) {
    const std::uint64_t p = table.spf(n);
    std::uint32_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.factors.push_back({p, e});
  }
  return f;
}

Factorization factorize_trial(std::uint64_t n) {
  if (n == 0) throw DomainError("factorize_trial: n must be >= 1");
  Factorization f;
  f.n = n;
  for (std::uint64_t p = 2; p <= n / p; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    std::uint32_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.factors.push_back({p, e});
  }
  if (n > 1) f.factors.push_back({n, 1});
  return f;
}

bool is_rough(std::uint64_t n, std::uint64_t w, const SpfTable& table) {
  if (n == 0 || n > table.limit()) {
    throw DomainError("is_rough: n=" + std::to_string(n) + " outside [1, " + std::to_string(table.limit()) + "]");
  }
  if (n == 1) return true;
  return table.spf(n) > w;
}

bool is_rough_trial(std::uint64_t n, std::uint64_t w) {
  if (n == 0) throw DomainError("is_rough_trial: n must be >= 1");
  for (std::uint64_t p = 2; p <= w && p <= n; p += (p == 2 ? 1 : 2)) {
    // composite p never divides first: its prime factors were tried earlier
    if (n % p == 0) return false;
  }
  return true;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> primes;
  if (limit < 2) return primes;
  primes.push_back(2);
  // index i <-> odd number 2i + 1
  std::vector<bool> composite(limit / 2 + 1, false);
  for (std::uint64_t i = 1; 2 * i + 1 <= limit; ++i) {
    if (composite[i]) continue;
    const std::uint64_t p = 2 * i + 1;
    primes.push_back(p);
    for (std::uint64_t m = p * p; m <= limit; m += 2 * p) composite[m / 2] = true;
  }
  return primes;
}

void for_each_prime(std::uint64_t lo, std::uint64_t hi, const std::function<void(std::uint64_t)>& visit) {
  lo = std::max<std::uint64_t>(lo, 2);
  if (lo > hi) return;
  const auto base = primes_up_to(isqrt(hi));
  std::vector<char> sieve(kSegmentSize);
  for (std::uint64_t start = lo; start <= hi; start += kSegmentSize) {
    const std::uint64_t end = std::min(hi, start + kSegmentSize - 1);
    std::fill(sieve.begin(), sieve.begin() + static_cast<std::ptrdiff_t>(end - start + 1), 1);
    for (const std::uint64_t p : base) {
      if (p * p > end) break;
      std::uint64_t m = std::max(p * p, (start + p - 1) / p * p);
      for (; m <= end; m += p) sieve[m - start] = 0;
    }
    for (std::uint64_t n = start; n <= end; ++n) {
      if (sieve[n - start]) visit(n);
    }
    if (end == hi) break;
  }
}

std::vector<std::uint64_t> primes_in_range(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  for_each_prime(lo, hi, [&](std::uint64_t p) { out.push_back(p); });
  return out;
}

double mertens_sum(std::uint64_t a, std::uint64_t b) {
  if (a < 1 || a > b) throw DomainError("mertens_sum: need 1 <= a <= b");
  long double s = 0;
  for_each_prime(a + 1, b, [&](std::uint64_t p) { s += 1.0L / static_cast<long double>(p); });
  return static_cast<double>(s);
}

double LambdaLadder::block_sum(std::size_t j) const {
  long double s = 0;
  for (const auto p : block(j)) s += 1.0L / static_cast<long double>(p);
  return static_cast<double>(s);
}

LambdaLadder lambda_ladder(std::uint64_t limit) {
  if (limit < 2) throw DomainError("lambda_ladder: limit must be >= 2");
  // Bertrand: the prime that closes a block with lambda_j <= limit is below 2*limit.
  const auto primes = primes_up_to(2 * limit + 2);
  const long double log2 = std::numbers::ln2_v<long double>;

  LambdaLadder ladder;
  ladder.lambdas.push_back(1);
  std::vector<std::uint64_t> current;
  long double sum = 0;
  for (const auto p : primes) {
    const long double r = 1.0L / static_cast<long double>(p);
    if (sum + r <= log2) {
      if (p > limit) break;
      current.push_back(p);
      sum += r;
      continue;
    }
    ladder.lambdas.push_back(current.back());
    ladder.blocks.push_back(std::move(current));
    current = {};
    if (p > limit) break;
    current.push_back(p);
    sum = r;
  }
  return ladder;
}

double ladder_spread(const LambdaLadder& ladder) {
  double k = 0;
  for (std::size_t j = 1; j < ladder.lambdas.size(); ++j) {
    const double dev = std::log2(std::log(static_cast<double>(ladder.lambdas[j]))) - static_cast<double>(j);
    k = std::max(k, std::abs(dev));
  }
  return k;
}

}  // namespace roughdiv
