#pragma once
// Monte Carlo integration over the ordered simplex
// 0 <= xi_1 <= ... <= xi_k <= 1 (volume 1/k!).
//
// Estimator: integral of f = E[f(sorted uniforms)] / k!. Samples are split
// into fixed chunks of kChunkSamples; chunk c draws from std::mt19937_64
// seeded with splitmix64(seed + c * 0x9E3779B97F4A7C15), and uniforms are
// the top 53 bits of each output scaled by 2^-53. Chunk sums are combined in
// chunk order, so the estimate does not depend on the worker count.

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace roughdiv {

inline constexpr std::uint64_t kChunkSamples = std::uint64_t{1} << 16;

struct VolumeEstimate {
  double mean = 0;    // integral over the ordered simplex (1/k! applied)
  double std_error = 0;  // sample standard deviation / sqrt(samples), scaled by 1/k!
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t hit_count = 0;  // samples with a nonzero integrand
};

std::uint64_t splitmix64(std::uint64_t x);
double uniform01(std::mt19937_64& rng);

// k independent uniforms on [0,1), sorted ascending.
void sample_ordered_simplex(std::mt19937_64& rng, std::span<double> out);
std::vector<double> sample_ordered_simplex(std::size_t k, std::mt19937_64& rng);

struct McOptions {
  unsigned threads = 0;  // 0: hardware concurrency
};

using Integrand = std::function<double(std::span<const double>)>;

// Generic estimator of the integral of f over the ordered simplex of dimension k.
VolumeEstimate integrate_ordered_simplex(std::size_t k, const Integrand& f, std::uint64_t samples,
                                         std::uint64_t seed, const McOptions& opts = {});

// log2(sum_i 2^{e_i}); exact exponentiation when every |e_i| <= 500.
double log2_sum_pow2(std::span<const double> exponents);

// Membership in Y_k(s,v): ordered; xi_{M+i^2} > i/v and xi_{k+1-(M+i^2)} < 1 - i/v
// for i >= 1 with M + i^2 <= k; sum_j 2^{j - v xi_j} <= 2^s.
bool in_Yk(std::span<const double> xi, std::int64_t s, double v, std::int64_t M);
// Membership in T(k,v,gamma): 2^{v xi_1} + ... + 2^{v xi_j} >= 2^{j - gamma} for all j.
bool in_T(std::span<const double> xi, double v, double gamma);
// min_{0<=j<=k} 2^{-j} (2^{v xi_1 + u} + ... + 2^{v xi_j + u} + 1)
double U_integrand(std::span<const double> xi, double v, double u);
// Same quantity, always evaluated in log2 space.
double log2_U_integrand(std::span<const double> xi, double v, double u);

// samples >= 10^4.
VolumeEstimate vol_Yk(std::int64_t k, std::int64_t s, std::int64_t v, std::int64_t M, std::uint64_t samples,
                      std::uint64_t seed, const McOptions& opts = {});
VolumeEstimate vol_T(std::int64_t k, std::int64_t v, std::int64_t gamma, std::uint64_t samples, std::uint64_t seed,
                     const McOptions& opts = {});
VolumeEstimate U_k_estimate(std::int64_t k, std::int64_t v, std::int64_t u, std::uint64_t samples,
                            std::uint64_t seed, const McOptions& opts = {});

// Comparators of the volume lemmas.
double Yk_floor(std::int64_t k, std::int64_t v);  // (k - v + 1) / (k + 1)!
double T_envelope(std::int64_t k, std::int64_t v, std::int64_t gamma);  // Y / (2^{2^{b-gamma}} (k+1)!)
double U_envelope(std::int64_t k, std::int64_t v, std::int64_t u);  // u(1+|k-v-u|^2) / ((k+1)! (2^{k-v-u}+1))

}  // namespace roughdiv
