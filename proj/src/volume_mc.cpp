#include "roughdiv/volume_mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "roughdiv/errors.hpp"

namespace roughdiv {

namespace {

constexpr double kDirectExponentLimit = 500.0;

struct Moments {
  std::uint64_t n = 0;
  double mean = 0;
  double m2 = 0;
  std::uint64_t hits = 0;

  void add(double f) {
    ++n;
    const double d = f - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (f - mean);
    if (f != 0) ++hits;
  }
  void merge(const Moments& o) {
    if (o.n == 0) return;
    const double total = static_cast<double>(n + o.n);
    const double d = o.mean - mean;
    mean += d * static_cast<double>(o.n) / total;
    m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / total;
    n += o.n;
    hits += o.hits;
  }
};

double factorial(std::int64_t k) { return std::tgamma(static_cast<double>(k) + 1.0); }

// log2(2^a + 2^b)
double log2_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log2(1.0 + std::exp2(lo - hi));
}

void check_k(std::int64_t k) {
  if (k < 1) throw DomainError("volume: k must be >= 1");
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void sample_ordered_simplex(std::mt19937_64& rng, std::span<double> out) {
  for (auto& v : out) v = uniform01(rng);
  std::sort(out.begin(), out.end());
}

std::vector<double> sample_ordered_simplex(std::size_t k, std::mt19937_64& rng) {
  if (k < 1) throw DomainError("sample_ordered_simplex: k must be >= 1");
  std::vector<double> xi(k);
  sample_ordered_simplex(rng, xi);
  return xi;
}

VolumeEstimate integrate_ordered_simplex(std::size_t k, const Integrand& f, std::uint64_t samples, std::uint64_t seed,
                                         const McOptions& opts) {
  if (k < 1) throw DomainError("integrate: k must be >= 1");
  if (samples < 2) throw DomainError("integrate: need at least 2 samples");
  const std::uint64_t chunks = (samples + kChunkSamples - 1) / kChunkSamples;
  std::vector<Moments> per_chunk(chunks);

  const auto run_chunk = [&](std::uint64_t c) {
    std::mt19937_64 rng(splitmix64(seed + c * 0x9E3779B97F4A7C15ULL));
    std::vector<double> xi(k);
    const std::uint64_t begin = c * kChunkSamples;
    const std::uint64_t end = std::min(samples, begin + kChunkSamples);
    Moments m;
    for (std::uint64_t i = begin; i < end; ++i) {
      sample_ordered_simplex(rng, xi);
      m.add(f(xi));
    }
    per_chunk[c] = m;
  };

  unsigned threads = opts.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : opts.threads;
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, chunks));
  if (threads <= 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::uint64_t c = next++; c < chunks; c = next++) run_chunk(c);
      });
    }
    for (auto& th : pool) th.join();
  }

  Moments total;
  for (const auto& m : per_chunk) total.merge(m);
  const double norm = 1.0 / factorial(static_cast<std::int64_t>(k));
  VolumeEstimate est;
  est.samples = samples;
  est.seed = seed;
  est.hit_count = total.hits;
  est.mean = total.mean * norm;
  const double var = total.m2 / static_cast<double>(total.n - 1);
  est.std_error = std::sqrt(var / static_cast<double>(total.n)) * norm;
  return est;
}

double log2_sum_pow2(std::span<const double> exponents) {
  if (exponents.empty()) return -std::numeric_limits<double>::infinity();
  const bool direct = std::all_of(exponents.begin(), exponents.end(),
                                  [](double e) { return std::fabs(e) <= kDirectExponentLimit; });
  if (direct) {
    double s = 0;
    for (const double e : exponents) s += std::exp2(e);
    return std::log2(s);
  }
  double acc = -std::numeric_limits<double>::infinity();
  for (const double e : exponents) acc = log2_add(acc, e);
  return acc;
}

bool in_Yk(std::span<const double> xi, std::int64_t s, double v, std::int64_t M) {
  const auto k = static_cast<std::int64_t>(xi.size());
  for (std::int64_t j = 1; j < k; ++j) {
    if (xi[static_cast<std::size_t>(j - 1)] > xi[static_cast<std::size_t>(j)]) return false;
  }
  if (k > 0 && !(xi.back() < 1.0)) return false;
  for (std::int64_t i = 1; M + i * i <= k; ++i) {
    const std::int64_t idx = M + i * i;
    if (idx < 1) continue;
    const double cut = static_cast<double>(i) / v;
    if (!(xi[static_cast<std::size_t>(idx - 1)] > cut)) return false;
    const std::int64_t mirror = k + 1 - idx;
    if (!(xi[static_cast<std::size_t>(mirror - 1)] < 1.0 - cut)) return false;
  }
  std::vector<double> e(xi.size());
  for (std::size_t j = 0; j < xi.size(); ++j) e[j] = static_cast<double>(j + 1) - v * xi[j];
  return log2_sum_pow2(e) <= static_cast<double>(s);
}

bool in_T(std::span<const double> xi, double v, double gamma) {
  const bool direct = v <= kDirectExponentLimit;
  double sum = 0;
  double log_sum = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < xi.size(); ++j) {
    const double need = static_cast<double>(j + 1) - gamma;
    if (direct) {
      sum += std::exp2(v * xi[j]);
      if (sum < std::exp2(need)) return false;
    } else {
      log_sum = log2_add(log_sum, v * xi[j]);
      if (log_sum < need) return false;
    }
  }
  return true;
}

double log2_U_integrand(std::span<const double> xi, double v, double u) {
  double best = 0.0;  // j = 0
  double log_sum = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < xi.size(); ++j) {
    log_sum = log2_add(log_sum, v * xi[j] + u);
    best = std::min(best, -static_cast<double>(j + 1) + log2_add(log_sum, 0.0));
  }
  return best;
}

double U_integrand(std::span<const double> xi, double v, double u) {
  if (v + u > kDirectExponentLimit) return std::exp2(log2_U_integrand(xi, v, u));
  double best = 1.0;
  double sum = 0;
  double scale = 1.0;
  for (const double x : xi) {
    sum += std::exp2(v * x + u);
    scale *= 0.5;
    best = std::min(best, scale * (sum + 1.0));
  }
  return best;
}

VolumeEstimate vol_Yk(std::int64_t k, std::int64_t s, std::int64_t v, std::int64_t M, std::uint64_t samples,
                      std::uint64_t seed, const McOptions& opts) {
  check_k(k);
  if (v < 1) throw DomainError("vol_Yk: v must be >= 1");
  if (samples < 10'000) throw DomainError("vol_Yk: need at least 10^4 samples");
  const auto vd = static_cast<double>(v);
  return integrate_ordered_simplex(
      static_cast<std::size_t>(k), [&](std::span<const double> xi) { return in_Yk(xi, s, vd, M) ? 1.0 : 0.0; },
      samples, seed, opts);
}

VolumeEstimate vol_T(std::int64_t k, std::int64_t v, std::int64_t gamma, std::uint64_t samples, std::uint64_t seed,
                     const McOptions& opts) {
  check_k(k);
  if (gamma < 0) throw DomainError("vol_T: gamma must be >= 0");
  const auto vd = static_cast<double>(v);
  const auto gd = static_cast<double>(gamma);
  return integrate_ordered_simplex(
      static_cast<std::size_t>(k), [&](std::span<const double> xi) { return in_T(xi, vd, gd) ? 1.0 : 0.0; }, samples,
      seed, opts);
}

VolumeEstimate U_k_estimate(std::int64_t k, std::int64_t v, std::int64_t u, std::uint64_t samples, std::uint64_t seed,
                            const McOptions& opts) {
  check_k(k);
  if (u < 1) throw DomainError("U_k_estimate: u must be >= 1");
  const auto vd = static_cast<double>(v);
  const auto ud = static_cast<double>(u);
  return integrate_ordered_simplex(
      static_cast<std::size_t>(k), [&](std::span<const double> xi) { return U_integrand(xi, vd, ud); }, samples, seed,
      opts);
}

double Yk_floor(std::int64_t k, std::int64_t v) { return static_cast<double>(k - v + 1) / factorial(k + 1); }

double T_envelope(std::int64_t k, std::int64_t v, std::int64_t gamma) {
  const std::int64_t b = k - v;
  const double Y = b >= gamma + 5 ? static_cast<double>(b)
                                  : static_cast<double>((gamma + 5 - b) * (gamma + 5 - b) * (gamma + 1));
  // 2^{2^{b-gamma}} overflows for b - gamma >= 10; the envelope is then 0 in double.
  return Y / (std::exp2(std::exp2(static_cast<double>(b - gamma))) * factorial(k + 1));
}

double U_envelope(std::int64_t k, std::int64_t v, std::int64_t u) {
  const std::int64_t c = k - v - u;
  const auto ud = static_cast<double>(u);
  const auto cd = static_cast<double>(c);
  return ud * (1.0 + cd * cd) / (factorial(k + 1) * (std::exp2(cd) + 1.0));
}

}  // namespace roughdiv
