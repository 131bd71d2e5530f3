#pragma once
// Divisor enumeration and the divisor-clustering functionals: the union of
// windows [log d - log 2, log d) over d | a, its measure L(a), the close-pair
// count W*(a) and the isolated-divisor count.

#include <cstdint>
#include <span>
#include <vector>

#include "roughdiv/sieve_core.hpp"

namespace roughdiv {

inline constexpr std::uint64_t kDefaultDivisorCap = std::uint64_t{1} << 20;

struct DivisorList {
  std::uint64_t n = 1;
  std::vector<std::uint64_t> divisors;  // strictly increasing

  std::size_t tau() const { return divisors.size(); }
};

struct Interval {
  double lo;
  double hi;
  double length() const { return hi - lo; }
};

// Disjoint, sorted, nonempty half-open intervals. Touching intervals are
// merged, so the representation is canonical.
class IntervalUnion {
 public:
  IntervalUnion() = default;
  // Any order, overlaps allowed; empty intervals are dropped.
  explicit IntervalUnion(std::vector<Interval> pieces);

  const std::vector<Interval>& intervals() const { return intervals_; }
  double measure() const;
  bool contains(double t) const;

 private:
  std::vector<Interval> intervals_;
};

DivisorList divisors(const Factorization& f, std::uint64_t cap = kDefaultDivisorCap);
DivisorList divisors(std::uint64_t n, std::uint64_t cap = kDefaultDivisorCap);

// #{d | n : y < d <= z}
std::uint64_t tau_interval(const DivisorList& d, double y, double z);
std::uint64_t tau_interval(std::uint64_t n, double y, double z);

IntervalUnion script_L(const DivisorList& d);
IntervalUnion script_L(std::uint64_t a);
// L(a) = measure of script_L(a).
double L_measure(std::uint64_t a);

// Union of [t - log 2, t) over already-computed log-divisors, in any order.
IntervalUnion script_L_from_logs(std::span<const double> log_divisors);

// #{(d, d') : d | a, d' | a, d < d' <= 2d}
std::uint64_t W_star(const DivisorList& d);
std::uint64_t W_star(std::uint64_t a);

// #{d | a : no divisor of a lies in (d, 2d]}
std::uint64_t isolated_divisor_count(const DivisorList& d);
std::uint64_t isolated_divisor_count(std::uint64_t a);

}  // namespace roughdiv
