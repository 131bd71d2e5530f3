#include "roughdiv/theory_formulas.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>

#include "roughdiv/errors.hpp"

namespace roughdiv {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kLn4 = 2 * std::numbers::ln2;

double loglog(double t) { return std::log(std::log(t)); }

// Terms xr^k/k! for h <= k <= m, either directly or as logs.
std::vector<double> poisson_log_terms(double xr, std::int64_t h, std::int64_t m) {
  std::vector<double> logs;
  logs.reserve(static_cast<std::size_t>(m - h + 1));
  for (std::int64_t k = h; k <= m; ++k) logs.push_back(log_poisson_term(xr, k));
  return logs;
}

// Direct recurrence term_k = term_{k-1} * xr / k; exact for small integer
// inputs. Empty result when it would overflow.
std::vector<double> poisson_direct_terms(double xr, std::int64_t h, std::int64_t m) {
  if (m > 170 || log_poisson_term(xr, std::clamp<std::int64_t>(static_cast<std::int64_t>(xr), h, m)) > 700) {
    return {};
  }
  std::vector<double> terms;
  double t = 1;
  for (std::int64_t k = 0; k <= m; ++k) {
    if (k > 0) t = t * xr / static_cast<double>(k);
    if (k >= h) terms.push_back(t);
  }
  return terms;
}

double sum_descending(std::vector<double> v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  double s = 0;
  for (const double t : v) s += t;
  return s;
}

void check_poisson_args(double xr, std::int64_t h, std::int64_t m) {
  if (!(xr > 0)) throw DomainError("poisson: xr must be > 0");
  if (h < 0 || h > m) throw DomainError("poisson: need 0 <= h <= m");
}

}  // namespace

double erdos_ford_tenenbaum_constant() { return 1.0 - (1.0 + std::log(kLn2)) / kLn2; }

double regime_boundary() { return 1.0 - 1.0 / kLn4; }

RegimeParams regime(std::uint64_t x, std::uint64_t y, std::uint64_t w) {
  if (y < 4) throw DomainError("regime: y must be >= 4");
  if (w < 4) throw DomainError("regime: w must be >= 4");
  RegimeParams r;
  r.x = x;
  r.y = y;
  r.w = w;
  const auto yd = static_cast<double>(y);
  const auto wd = static_cast<double>(w);
  r.delta = loglog(wd) / loglog(yd);
  r.E = erdos_ford_tenenbaum_constant();
  const double denom = (1.0 - r.delta) * kLn4 - 1.0;
  r.B = denom > 0 ? std::min(1.0, 1.0 / (std::sqrt(loglog(yd)) * denom)) : 1.0;
  r.regime = r.delta >= regime_boundary() ? Regime::NoClustering : Regime::Clustering;
  r.relaxed = !(8 * w <= y && y * y <= x);
  return r;
}

double theorem1_order(std::uint64_t x, std::uint64_t y, std::uint64_t w) {
  const auto r = regime(x, y, w);
  const auto xd = static_cast<double>(x);
  if (r.regime == Regime::NoClustering) {
    const double lw = std::log(static_cast<double>(w));
    return xd / (lw * lw);
  }
  const double expo = -r.E + std::log(1.0 - r.delta) / kLn2;
  return xd * r.delta * r.B * std::pow(std::log(static_cast<double>(y)), expo);
}

double hxy2y_order(double x, double y) {
  if (y < 3) throw DomainError("hxy2y_order: y must be >= 3");
  return x / (std::pow(std::log(y), erdos_ford_tenenbaum_constant()) * std::pow(loglog(y), 1.5));
}

HeuristicTerms heuristic_terms(double x, double y, double w) {
  if (w < 4 || w > y) throw DomainError("heuristic_estimate: need 4 <= w <= y");
  HeuristicTerms t;
  const double alpha = loglog(y) - loglog(w);
  t.k0 = k0_of(y);
  const auto pow_over_fact = [](double base, std::int64_t k) {
    if (k == 0) return 1.0;
    if (base == 0) return 0.0;
    return std::exp(log_poisson_term(base, k));
  };

  std::vector<double> first;
  for (std::int64_t k = 0; k <= t.k0; ++k) first.push_back(pow_over_fact(2 * alpha, k));
  t.first = sum_descending(std::move(first));

  std::vector<double> second;
  double partial = 0;
  for (std::int64_t k = t.k0;; ++k) {
    const double term = pow_over_fact(alpha, k);
    second.push_back(term);
    partial += term;
    if (static_cast<double>(k) > alpha && term < 1e-15 * partial) break;
    if (term == 0) break;
  }
  t.second = std::log(y) * sum_descending(std::move(second));
  const double ly = std::log(y);
  t.value = x / (ly * ly) * (t.first + t.second);
  return t;
}

double heuristic_estimate(double x, double y, double w) { return heuristic_terms(x, y, w).value; }

double log_poisson_term(double xr, std::int64_t m) {
  if (m == 0) return 0.0;
  return static_cast<double>(m) * std::log(xr) - std::lgamma(static_cast<double>(m) + 1.0);
}

double poisson_partial_sum(double xr, std::int64_t h, std::int64_t m) {
  check_poisson_args(xr, h, m);
  auto direct = poisson_direct_terms(xr, h, m);
  if (!direct.empty()) return sum_descending(std::move(direct));
  return std::exp(log_poisson_partial_sum(xr, h, m));
}

double log_poisson_partial_sum(double xr, std::int64_t h, std::int64_t m) {
  check_poisson_args(xr, h, m);
  auto logs = poisson_log_terms(xr, h, m);
  const double top = *std::max_element(logs.begin(), logs.end());
  for (auto& l : logs) l = std::exp(l - top);
  return top + std::log(sum_descending(std::move(logs)));
}

namespace {

double norton_factor(double xr, std::int64_t h, std::int64_t m) {
  if (h < 0 || h > m || static_cast<double>(m) > xr) throw DomainError("norton_bound: need 0 <= h <= m <= xr");
  const double md = static_cast<double>(m);
  const double middle = xr == md ? std::numeric_limits<double>::infinity() : xr / (xr - md);
  return std::min({std::sqrt(xr), middle, static_cast<double>(m - h + 1)});
}

}  // namespace

double norton_bound(double xr, std::int64_t h, std::int64_t m) {
  const double factor = norton_factor(xr, h, m);
  const auto direct = poisson_direct_terms(xr, m, m);
  const double term = direct.empty() ? std::exp(log_poisson_term(xr, m)) : direct.front();
  return factor * term;
}

double log_norton_bound(double xr, std::int64_t h, std::int64_t m) {
  return std::log(norton_factor(xr, h, m)) + log_poisson_term(xr, m);
}

std::int64_t k0_of(double y) { return static_cast<std::int64_t>(std::floor(loglog(y) / kLn2)); }

std::int64_t k2_of(double y, double w, std::int64_t M) {
  const double a = loglog(y) / kLn2;
  const double b = 2 * (loglog(y) - loglog(w));
  return static_cast<std::int64_t>(std::floor(std::min(a, b) - 2.0 * static_cast<double>(M)));
}

K1Choice choose_k1(double delta, std::int64_t k2, std::int64_t M) {
  K1Choice c{};
  if (delta >= regime_boundary()) {
    c.tag = LowerCase::I;
  } else if (delta >= 0.2) {
    c.tag = LowerCase::II;
  } else {
    c.tag = LowerCase::III;
  }
  c.k1 = c.tag == LowerCase::III ? k2 : static_cast<std::int64_t>(std::floor(0.9 * static_cast<double>(k2)));
  c.admissible = 10 * M <= c.k1 && c.k1 <= k2;
  return c;
}

ProofIndices proof_indices(double y, double w, std::int64_t M, const LambdaLadder& ladder) {
  if (w < 2 || y <= w) throw DomainError("proof_indices: need 2 <= w < y");
  ProofIndices p;
  const auto& lam = ladder.lambdas;
  // lambda_0 stands for 1.9
  const auto lambda_value = [&](std::size_t j) { return j == 0 ? 1.9 : static_cast<double>(lam[j]); };
  p.J1 = -1;
  for (std::size_t j = 1; j <= lam.size(); ++j) {
    if (lambda_value(j - 1) > w) {
      p.J1 = static_cast<std::int64_t>(j);
      break;
    }
  }
  if (p.J1 < 0) throw DomainError("proof_indices: ladder does not extend past w");
  p.J2 = 0;
  for (std::size_t j = 1; j < lam.size(); ++j) {
    if (lambda_value(j) <= y) p.J2 = static_cast<std::int64_t>(j);
  }
  p.v = p.J2 - p.J1 + 1;
  p.s = p.J1 - 2 - M;
  p.u = static_cast<std::int64_t>(std::floor(loglog(w) / kLn2));
  p.v_upper = static_cast<std::int64_t>(std::floor((loglog(y) - loglog(w)) / kLn2));
  p.k0 = k0_of(y);
  p.k2 = k2_of(y, w, M);
  return p;
}

MepsReport meps_report(double M, double K) { return {-200 * M - 2 * K - 4, 200 * M}; }

std::int64_t BlockVector::total() const {
  std::int64_t s = 0;
  for (const auto b : counts) s += b;
  return s;
}

BlockVector make_block_vector(std::int64_t J1, std::int64_t J2, std::int64_t M, std::vector<std::int64_t> counts) {
  if (J1 < 1 || J2 < J1) throw DomainError("block vector: need 1 <= J1 <= J2");
  if (static_cast<std::int64_t>(counts.size()) != J2 - J1 + 1) {
    throw DomainError("block vector: counts must have J2 - J1 + 1 entries");
  }
  if (std::any_of(counts.begin(), counts.end(), [](std::int64_t b) { return b < 0; })) {
    throw DomainError("block vector: counts must be nonnegative");
  }
  return BlockVector{J1, J2, M, std::move(counts)};
}

bool dyadic_condition(const BlockVector& bv) {
  // Exact binary sum of the powers of two, with carries.
  std::map<std::int64_t, int> bits;
  std::int64_t prefix = 0;
  for (std::int64_t j = bv.J1; j <= bv.J2; ++j) {
    prefix += bv.at(j);
    std::int64_t e = -j + prefix;
    while (bits.count(e) != 0) {
      bits.erase(e);
      ++e;
    }
    bits[e] = 1;
  }
  if (bits.empty()) return true;
  const std::int64_t top = bits.rbegin()->first;
  return top < -bv.M || (top == -bv.M && bits.size() == 1);
}

namespace {

std::int64_t cap_at(std::int64_t M, std::int64_t v, std::int64_t i) {
  const std::int64_t back = v + 1 - i;
  return std::min(M + i * i, M + back * back);
}

}  // namespace

bool growth_caps(const BlockVector& bv) {
  const std::int64_t v = bv.v();
  for (std::int64_t i = 1; i <= v; ++i) {
    if (bv.counts[static_cast<std::size_t>(i - 1)] > cap_at(bv.M, v, i)) return false;
  }
  return true;
}

bool is_in_Bk(const BlockVector& bv, std::int64_t k) {
  return bv.total() == k && dyadic_condition(bv) && growth_caps(bv);
}

std::vector<BlockVector> enumerate_Bk(std::int64_t J1, std::int64_t J2, std::int64_t M, std::int64_t k,
                                      std::uint64_t budget) {
  if (J1 < 1 || J2 < J1 || k < 0) throw DomainError("enumerate_Bk: need 1 <= J1 <= J2 and k >= 0");
  const std::int64_t v = J2 - J1 + 1;
  std::vector<std::int64_t> caps(static_cast<std::size_t>(v));
  for (std::int64_t i = 1; i <= v; ++i) caps[static_cast<std::size_t>(i - 1)] = std::max<std::int64_t>(0, cap_at(M, v, i));

  // ways[i][r]: number of ways positions i.. can sum to r, saturated at budget + 1
  const auto ku = static_cast<std::size_t>(k);
  std::vector<std::vector<std::uint64_t>> ways(static_cast<std::size_t>(v) + 1, std::vector<std::uint64_t>(ku + 1, 0));
  ways[static_cast<std::size_t>(v)][0] = 1;
  for (std::int64_t i = v - 1; i >= 0; --i) {
    const auto iu = static_cast<std::size_t>(i);
    for (std::size_t r = 0; r <= ku; ++r) {
      std::uint64_t total = 0;
      for (std::int64_t b = 0; b <= caps[iu] && static_cast<std::size_t>(b) <= r; ++b) {
        total = std::min(budget + 1, total + ways[iu + 1][r - static_cast<std::size_t>(b)]);
      }
      ways[iu][r] = total;
    }
  }
  if (ways[0][ku] > budget) throw ResourceError("enumerate_Bk: candidate count exceeds budget");

  std::vector<BlockVector> out;
  std::vector<std::int64_t> counts(static_cast<std::size_t>(v), 0);
  std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t i, std::int64_t remaining) {
    if (i == counts.size()) {
      if (remaining != 0) return;
      BlockVector bv{J1, J2, M, counts};
      if (dyadic_condition(bv)) out.push_back(std::move(bv));
      return;
    }
    for (std::int64_t b = 0; b <= std::min(caps[i], remaining); ++b) {
      if (ways[i + 1][static_cast<std::size_t>(remaining - b)] == 0) continue;
      counts[i] = b;
      rec(i + 1, remaining - b);
    }
    counts[i] = 0;
  };
  rec(0, k);
  return out;
}

}  // namespace roughdiv
