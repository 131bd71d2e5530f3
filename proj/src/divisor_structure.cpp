#include "roughdiv/divisor_structure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "roughdiv/errors.hpp"

namespace roughdiv {

IntervalUnion::IntervalUnion(std::vector<Interval> pieces) {
  std::erase_if(pieces, [](const Interval& iv) { return !(iv.hi > iv.lo); });
  std::sort(pieces.begin(), pieces.end(), [](const Interval& a, const Interval& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
  });
  for (const auto& iv : pieces) {
    if (!intervals_.empty() && iv.lo <= intervals_.back().hi) {
      intervals_.back().hi = std::max(intervals_.back().hi, iv.hi);
    } else {
      intervals_.push_back(iv);
    }
  }
}

double IntervalUnion::measure() const {
  double m = 0;
  for (const auto& iv : intervals_) m += iv.length();
  return m;
}

bool IntervalUnion::contains(double t) const {
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), t,
                             [](double v, const Interval& iv) { return v < iv.lo; });
  if (it == intervals_.begin()) return false;
  --it;
  return t < it->hi;
}

DivisorList divisors(const Factorization& f, std::uint64_t cap) {
  std::uint64_t tau = 1;
  for (const auto& pp : f.factors) {
    tau *= pp.exponent + 1;
    if (tau > cap) {
      throw ResourceError("divisors: tau(" + std::to_string(f.n) + ") exceeds cap " + std::to_string(cap));
    }
  }
  DivisorList out;
  out.n = f.n;
  out.divisors.reserve(tau);
  out.divisors.push_back(1);
  for (const auto& pp : f.factors) {
    const std::size_t base = out.divisors.size();
    std::uint64_t pk = 1;
    for (std::uint32_t e = 1; e <= pp.exponent; ++e) {
      pk *= pp.prime;
      for (std::size_t i = 0; i < base; ++i) out.divisors.push_back(out.divisors[i] * pk);
    }
  }
  std::sort(out.divisors.begin(), out.divisors.end());
  return out;
}

DivisorList divisors(std::uint64_t n, std::uint64_t cap) { return divisors(factorize_trial(n), cap); }

std::uint64_t tau_interval(const DivisorList& d, double y, double z) {
  if (!(y < z)) throw DomainError("tau_interval: need y < z");
  std::uint64_t c = 0;
  for (const auto v : d.divisors) {
    const auto x = static_cast<double>(v);
    if (x > y && x <= z) ++c;
  }
  return c;
}

std::uint64_t tau_interval(std::uint64_t n, double y, double z) { return tau_interval(divisors(n), y, z); }

IntervalUnion script_L_from_logs(std::span<const double> log_divisors) {
  std::vector<Interval> pieces;
  pieces.reserve(log_divisors.size());
  for (const double t : log_divisors) pieces.push_back({t - std::numbers::ln2, t});
  return IntervalUnion(std::move(pieces));
}

IntervalUnion script_L(const DivisorList& d) {
  std::vector<double> logs;
  logs.reserve(d.tau());
  for (const auto v : d.divisors) logs.push_back(std::log(static_cast<double>(v)));
  return script_L_from_logs(logs);
}

IntervalUnion script_L(std::uint64_t a) {
  if (a == 0) throw DomainError("script_L: a must be >= 1");
  return script_L(divisors(a));
}

double L_measure(std::uint64_t a) { return script_L(a).measure(); }

std::uint64_t W_star(const DivisorList& d) {
  const auto& v = d.divisors;
  std::uint64_t count = 0;
  std::size_t r = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    r = std::max(r, i + 1);
    while (r < v.size() && v[r] <= 2 * v[i]) ++r;
    count += r - i - 1;
  }
  return count;
}

std::uint64_t W_star(std::uint64_t a) {
  if (a == 0) throw DomainError("W_star: a must be >= 1");
  return W_star(divisors(a));
}

std::uint64_t isolated_divisor_count(const DivisorList& d) {
  const auto& v = d.divisors;
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i + 1 == v.size() || v[i + 1] > 2 * v[i]) ++count;
  }
  return count;
}

std::uint64_t isolated_divisor_count(std::uint64_t a) {
  if (a == 0) throw DomainError("isolated_divisor_count: a must be >= 1");
  return isolated_divisor_count(divisors(a));
}

}  // namespace roughdiv
