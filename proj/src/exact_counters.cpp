#include "roughdiv/exact_counters.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "roughdiv/errors.hpp"

namespace roughdiv {

namespace {

constexpr std::uint64_t kMarkSegmentBits = std::uint64_t{1} << 23;

// Runs job(i) for i in [0, count) on up to `threads` workers and returns the
// per-job results in index order.
std::vector<std::uint64_t> run_jobs(std::size_t count, unsigned threads,
                                    const std::function<std::uint64_t(std::size_t)>& job) {
  std::vector<std::uint64_t> results(count, 0);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) results[i] = job(i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) results[i] = job(i);
    });
  }
  for (auto& th : pool) th.join();
  return results;
}

class SegmentBits {
 public:
  SegmentBits(std::uint64_t lo, std::uint64_t hi) : lo_(lo), hi_(hi), words_((hi - lo + 64) / 64, 0) {}

  void set_multiples(std::uint64_t d) {
    for (std::uint64_t m = first_multiple(d); m <= hi_; m += d) {
      const std::uint64_t i = m - lo_;
      words_[i >> 6] |= std::uint64_t{1} << (i & 63);
    }
  }
  void clear_multiples(std::uint64_t d) {
    for (std::uint64_t m = first_multiple(d); m <= hi_; m += d) {
      const std::uint64_t i = m - lo_;
      words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
    }
  }
  void set_all() {
    std::fill(words_.begin(), words_.end(), ~std::uint64_t{0});
    const std::uint64_t n = hi_ - lo_ + 1;
    if (n % 64 != 0) words_.back() = (std::uint64_t{1} << (n % 64)) - 1;
  }
  std::uint64_t popcount() const {
    std::uint64_t c = 0;
    for (const auto w : words_) c += static_cast<std::uint64_t>(std::popcount(w));
    return c;
  }

 private:
  std::uint64_t first_multiple(std::uint64_t d) const { return (lo_ + d - 1) / d * d; }

  std::uint64_t lo_;
  std::uint64_t hi_;
  std::vector<std::uint64_t> words_;
};

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Integers d in (y, z] with no prime factor <= w.
std::vector<std::uint64_t> rough_in_range(std::uint64_t y, std::uint64_t z, std::uint64_t w) {
  std::vector<std::uint64_t> out;
  if (z <= y) return out;
  const auto small = primes_up_to(std::min(w, z));
  std::vector<char> ok;
  for (std::uint64_t lo = y + 1; lo <= z; lo += kSegmentSize) {
    const std::uint64_t hi = std::min(z, lo + kSegmentSize - 1);
    ok.assign(hi - lo + 1, 1);
    for (const auto p : small) {
      for (std::uint64_t m = (lo + p - 1) / p * p; m <= hi; m += p) ok[m - lo] = 0;
    }
    for (std::uint64_t d = lo; d <= hi; ++d) {
      if (ok[d - lo]) out.push_back(d);
    }
    if (hi == z) break;
  }
  return out;
}

// Counts n in [first, last] surviving the marking/filter passes, segment by segment.
std::uint64_t segmented_count(std::uint64_t first, std::uint64_t last, unsigned threads,
                              const std::function<void(SegmentBits&)>& mark) {
  if (first > last) return 0;
  const std::size_t segments = static_cast<std::size_t>((last - first) / kMarkSegmentBits + 1);
  const auto counts = run_jobs(segments, threads, [&](std::size_t s) {
    const std::uint64_t lo = first + s * kMarkSegmentBits;
    const std::uint64_t hi = std::min(last, lo + kMarkSegmentBits - 1);
    SegmentBits bits(lo, hi);
    mark(bits);
    return bits.popcount();
  });
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

}  // namespace

std::uint64_t count_H(const CountQuery& q, const MarkingOptions& opts) {
  if (q.x < 1) throw DomainError("count_H: x must be >= 1");
  if (q.y >= q.z) throw DomainError("count_H: need y < z");
  if (q.w < 1) throw DomainError("count_H: w must be >= 1");
  if (q.x > opts.budget) {
    throw ResourceError("count_H: x=" + std::to_string(q.x) + " exceeds marking budget " + std::to_string(opts.budget));
  }
  const std::uint64_t zz = std::min(q.z, q.x);
  if (zz <= q.y) return 0;
  // A divisor of a w-rough n is itself w-rough.
  const auto divs = rough_in_range(q.y, zz, q.w);
  const auto small = primes_up_to(std::min(q.w, q.x));
  const auto square_roots = q.squarefree_only ? primes_up_to(isqrt(q.x)) : std::vector<std::uint64_t>{};

  return segmented_count(1, q.x, opts.threads, [&](SegmentBits& bits) {
    for (const auto d : divs) bits.set_multiples(d);
    for (const auto p : small) bits.clear_multiples(p);
    for (const auto p : square_roots) bits.clear_multiples(p * p);
  });
}

std::uint64_t rough_count(std::uint64_t x, std::uint64_t z, bool half, const MarkingOptions& opts) {
  if (x < 1 || z < 1) throw DomainError("rough_count: need x >= 1 and z >= 1");
  if (x > opts.budget) {
    throw ResourceError("rough_count: x=" + std::to_string(x) + " exceeds marking budget " + std::to_string(opts.budget));
  }
  const auto small = primes_up_to(std::min(z, x));
  const std::uint64_t first = half ? x / 2 + 1 : 1;
  return segmented_count(first, x, opts.threads, [&](SegmentBits& bits) {
    bits.set_all();
    for (const auto p : small) bits.clear_multiples(p);
  });
}

std::uint64_t mult_table_count(std::uint64_t N, std::uint64_t w, std::uint64_t max_bits) {
  if (N < 1 || w < 1) throw DomainError("mult_table_count: need N >= 1 and w >= 1");
  if (N > kMaxTableSide) throw ResourceError("mult_table_count: N exceeds 2^16");
  const std::uint64_t bits = N * N + 1;
  if (bits > max_bits) throw ResourceError("mult_table_count: N^2 bits exceed the configured budget");

  std::vector<std::uint64_t> rough;
  for (std::uint64_t a = 1; a <= N; ++a) {
    if (is_rough_trial(a, w)) rough.push_back(a);
  }
  std::vector<std::uint64_t> seen((bits + 63) / 64, 0);
  for (std::size_t i = 0; i < rough.size(); ++i) {
    for (std::size_t j = i; j < rough.size(); ++j) {
      const std::uint64_t v = rough[i] * rough[j];
      seen[v >> 6] |= std::uint64_t{1} << (v & 63);
    }
  }
  std::uint64_t c = 0;
  for (const auto word : seen) c += static_cast<std::uint64_t>(std::popcount(word));
  return c;
}

std::uint64_t farey_product_count(std::uint64_t N) {
  if (N < 1) throw DomainError("farey_product_count: N must be >= 1");
  if (N > kMaxFareyOrder) throw ResourceError("farey_product_count: N exceeds 200");
  struct Frac {
    std::uint64_t num;
    std::uint64_t den;
  };
  std::vector<Frac> farey;
  for (std::uint64_t b = 1; b <= N; ++b) {
    for (std::uint64_t a = 1; a <= b; ++a) {
      if (std::gcd(a, b) == 1) farey.push_back({a, b});
    }
  }
  // Reduced p/q with 1 <= p <= q <= N^2, packed triangularly.
  const std::uint64_t qmax = N * N;
  const std::uint64_t slots = qmax * (qmax + 1) / 2;
  std::vector<std::uint64_t> seen((slots + 63) / 64, 0);
  std::uint64_t distinct = 0;
  for (std::size_t i = 0; i < farey.size(); ++i) {
    for (std::size_t j = i; j < farey.size(); ++j) {
      std::uint64_t p = farey[i].num * farey[j].num;
      std::uint64_t q = farey[i].den * farey[j].den;
      const std::uint64_t g = std::gcd(p, q);
      p /= g;
      q /= g;
      const std::uint64_t slot = q * (q - 1) / 2 + (p - 1);
      const std::uint64_t bit = std::uint64_t{1} << (slot & 63);
      if ((seen[slot >> 6] & bit) == 0) {
        seen[slot >> 6] |= bit;
        ++distinct;
      }
    }
  }
  return distinct;
}

std::string_view weight_name(Weight w) {
  switch (w) {
    case Weight::Reciprocal: return "reciprocal";
    case Weight::LogOverA: return "log_over_a";
    case Weight::LOverA: return "L_over_a";
    case Weight::TauOverA: return "tau_over_a";
    case Weight::WstarOverA: return "Wstar_over_a";
  }
  return "?";
}

Weight parse_weight(std::string_view name) {
  for (const auto w : {Weight::Reciprocal, Weight::LogOverA, Weight::LOverA, Weight::TauOverA, Weight::WstarOverA}) {
    if (weight_name(w) == name) return w;
  }
  throw DomainError("unknown weight '" + std::string(name) + "'");
}

namespace {

using u128 = unsigned __int128;

// Sorted divisors of a squarefree integer, kept either as exact 128-bit
// values or, when the integers are too large, as logarithms.
class DivisorSet {
 public:
  explicit DivisorSet(bool exact) : exact_(exact) {
    if (exact_) {
      values_.push_back(1);
    } else {
      logs_.push_back(0.0L);
    }
  }

  // Divisors of a*p from those of a.
  DivisorSet times(std::uint64_t p) const {
    DivisorSet out(exact_);
    if (exact_) {
      out.values_.clear();
      out.values_.reserve(2 * values_.size());
      std::vector<u128> scaled(values_.size());
      for (std::size_t i = 0; i < values_.size(); ++i) scaled[i] = values_[i] * p;
      std::merge(values_.begin(), values_.end(), scaled.begin(), scaled.end(), std::back_inserter(out.values_));
    } else {
      out.logs_.clear();
      out.logs_.reserve(2 * logs_.size());
      const long double lp = std::log(static_cast<long double>(p));
      std::vector<long double> scaled(logs_.size());
      for (std::size_t i = 0; i < logs_.size(); ++i) scaled[i] = logs_[i] + lp;
      std::merge(logs_.begin(), logs_.end(), scaled.begin(), scaled.end(), std::back_inserter(out.logs_));
    }
    return out;
  }

  std::size_t size() const { return exact_ ? values_.size() : logs_.size(); }

  long double log_at(std::size_t i) const {
    return exact_ ? std::log(static_cast<long double>(values_[i])) : logs_[i];
  }

  // Measure of the union of [log d - log 2, log d): with sorted centres the
  // union grows by min(log 2, gap) per divisor.
  double L() const {
    const long double ln2 = std::numbers::ln2_v<long double>;
    long double m = ln2;
    long double prev = log_at(0);
    for (std::size_t i = 1; i < size(); ++i) {
      const long double cur = log_at(i);
      m += std::min(ln2, cur - prev);
      prev = cur;
    }
    return static_cast<double>(m);
  }

  std::uint64_t w_star() const {
    const long double ln2 = std::numbers::ln2_v<long double>;
    const auto within = [&](std::size_t i, std::size_t r) {
      if (exact_) return values_[r] <= 2 * values_[i];
      const long double gap = logs_[r] - logs_[i] - ln2;
      if (std::fabs(gap) < 1e-12L) throw ResourceError("W*: divisor ratio too close to 2 for log comparison");
      return gap < 0;
    };
    std::uint64_t count = 0;
    std::size_t r = 0;
    for (std::size_t i = 0; i < size(); ++i) {
      r = std::max(r, i + 1);
      while (r < size() && within(i, r)) ++r;
      count += r - i - 1;
    }
    return count;
  }

 private:
  bool exact_;
  std::vector<u128> values_;
  std::vector<long double> logs_;
};

bool fits_exact(std::span<const std::uint64_t> primes) {
  long double bits = 0;
  for (const auto p : primes) bits += std::log2(static_cast<long double>(p));
  return bits < 125.0L;
}

bool needs_divisors(Weight w) { return w == Weight::LOverA || w == Weight::WstarOverA; }

struct PartialProduct {
  long double recip = 1;
  long double log_a = 0;
  std::int64_t omega = 0;
};

double evaluate(const PartialProduct& a, const DivisorSet* divs, Weight weight) {
  switch (weight) {
    case Weight::Reciprocal: return static_cast<double>(a.recip);
    case Weight::LogOverA: return static_cast<double>(a.log_a * a.recip);
    case Weight::TauOverA: return static_cast<double>(std::ldexp(a.recip, static_cast<int>(a.omega)));
    case Weight::LOverA: return divs->L() * static_cast<double>(a.recip);
    case Weight::WstarOverA: return static_cast<double>(divs->w_star()) * static_cast<double>(a.recip);
  }
  return 0;
}

long double binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  long double c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) c = c * static_cast<long double>(n - k + i) / static_cast<long double>(i);
  return c;
}

}  // namespace

double weight_of(std::span<const std::uint64_t> primes, Weight weight) {
  PartialProduct a;
  DivisorSet divs(fits_exact(primes));
  for (const auto p : primes) {
    a.recip /= static_cast<long double>(p);
    a.log_a += std::log(static_cast<long double>(p));
    ++a.omega;
    if (needs_divisors(weight)) divs = divs.times(p);
  }
  return evaluate(a, &divs, weight);
}

double sum_over_P(const PSumQuery& q, const SumOptions& opts) {
  if (q.w < 2 || q.t < q.w) throw DomainError("sum_over_P: need 2 <= w <= t");
  if (q.k && *q.k < 0) throw DomainError("sum_over_P: k must be >= 0");
  const auto primes = primes_in_range(q.w + 1, q.t);
  if (primes.size() > opts.max_primes) {
    throw ResourceError("sum_over_P: " + std::to_string(primes.size()) + " primes in (w,t] exceed the subset guard of " +
                        std::to_string(opts.max_primes));
  }
  const auto n = primes.size();
  if (needs_divisors(q.weight)) {
    // sum over visited a of tau(a) = sum_{j <= kmax} C(n, j) 2^j
    const std::uint64_t kmax = q.k ? std::min<std::uint64_t>(static_cast<std::uint64_t>(*q.k), n) : n;
    long double work = 0;
    for (std::uint64_t j = 0; j <= kmax; ++j) work += binomial(n, j) * std::ldexp(1.0L, static_cast<int>(j));
    if (work > static_cast<long double>(opts.divisor_work)) {
      throw ResourceError("sum_over_P: divisor enumeration work exceeds budget");
    }
  }
  if (q.k && static_cast<std::uint64_t>(*q.k) > n) return 0.0;

  const bool exact = fits_exact(primes);
  long double total = 0;
  std::function<void(std::size_t, const PartialProduct&, const DivisorSet&)> visit =
      [&](std::size_t next, const PartialProduct& a, const DivisorSet& divs) {
        if (!q.k || a.omega == *q.k) total += evaluate(a, &divs, q.weight);
        if (q.k && a.omega >= *q.k) return;
        for (std::size_t i = next; i < n; ++i) {
          if (q.k && static_cast<std::int64_t>(n - i) < *q.k - a.omega) break;
          const auto p = primes[i];
          PartialProduct b{a.recip / static_cast<long double>(p), a.log_a + std::log(static_cast<long double>(p)),
                           a.omega + 1};
          if (needs_divisors(q.weight)) {
            visit(i + 1, b, divs.times(p));
          } else {
            visit(i + 1, b, divs);
          }
        }
      };
  visit(0, PartialProduct{}, DivisorSet(exact));
  return static_cast<double>(total);
}

double sum_over_Ab(const BlockVector& b, const LambdaLadder& ladder, Weight weight, std::uint64_t max_combinations) {
  if (b.J1 < 1 || b.J2 < b.J1 || static_cast<std::int64_t>(b.counts.size()) != b.v()) {
    throw DomainError("sum_over_Ab: malformed block vector");
  }
  long double combos = 1;
  for (std::int64_t j = b.J1; j <= b.J2; ++j) {
    if (b.at(j) == 0) continue;
    if (static_cast<std::size_t>(j) > ladder.size()) throw DomainError("sum_over_Ab: ladder has no block D_" + std::to_string(j));
    combos *= binomial(ladder.block(static_cast<std::size_t>(j)).size(), static_cast<std::uint64_t>(b.at(j)));
  }
  if (combos > static_cast<long double>(max_combinations)) {
    throw ResourceError("sum_over_Ab: combination count exceeds guard");
  }
  if (combos == 0) return 0.0;

  std::vector<std::uint64_t> chosen;
  long double total = 0;
  // Walk blocks in order; inside a block choose b_j primes in increasing order.
  std::function<void(std::int64_t, std::size_t, std::int64_t)> rec = [&](std::int64_t j, std::size_t start,
                                                                         std::int64_t left) {
    if (j > b.J2) {
      total += weight_of(chosen, weight);
      return;
    }
    if (left == 0) {
      const std::int64_t nj = j + 1;
      rec(nj, 0, nj <= b.J2 ? b.at(nj) : 0);
      return;
    }
    const auto& block = ladder.block(static_cast<std::size_t>(j));
    for (std::size_t i = start; i + static_cast<std::size_t>(left) <= block.size(); ++i) {
      chosen.push_back(block[i]);
      rec(j, i + 1, left - 1);
      chosen.pop_back();
    }
  };
  rec(b.J1, 0, b.at(b.J1));
  return static_cast<double>(total);
}

}  // namespace roughdiv
