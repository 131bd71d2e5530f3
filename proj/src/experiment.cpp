#include "roughdiv/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <new>
#include <ostream>
#include <sstream>

#include "roughdiv/divisor_structure.hpp"
#include "roughdiv/errors.hpp"
#include "roughdiv/exact_counters.hpp"
#include "roughdiv/sieve_core.hpp"
#include "roughdiv/theory_formulas.hpp"
#include "roughdiv/volume_mc.hpp"

namespace roughdiv {

namespace {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::vector<std::string>> summary;

  void write(std::ostream& os) const {
    const auto line = [&os](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
      os << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    for (const auto& r : summary) {
      std::vector<std::string> cells{"#summary"};
      cells.insert(cells.end(), r.begin(), r.end());
      line(cells);
    }
  }
};

std::string str(std::uint64_t v) { return std::to_string(v); }
std::string str(std::int64_t v) { return std::to_string(v); }
std::string num(double v) { return format_number(v); }

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

template <typename T>
void require_grid(const std::vector<T>& grid, const char* flag) {
  require(!grid.empty(), std::string("missing grid for --") + flag);
}

// Tracks min/max of a ratio column and emits the summary row.
struct RatioRange {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double r) {
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  std::vector<std::string> summary(const std::string& what = "ratio") const {
    return {"min_" + what, num(lo), "max_" + what, num(hi), "spread", num(hi / lo)};
  }
};

MarkingOptions marking(const ExperimentConfig& c) {
  MarkingOptions m;
  if (c.marking_budget) m.budget = *c.marking_budget;
  m.threads = c.threads;
  return m;
}

std::uint64_t table_bits(const ExperimentConfig& c) { return c.table_bits.value_or(kDefaultTableBits); }

std::vector<std::uint64_t> hvo_default_y() { return {1000, 2000, 5000, 10000}; }

// x grid for ratio sweeps: explicit values, otherwise 10 y^2 per y.
std::vector<std::pair<std::uint64_t, std::uint64_t>> xy_pairs(const ExperimentConfig& c,
                                                              const std::vector<std::uint64_t>& ys) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  for (const auto y : ys) {
    if (c.x.empty()) {
      out.emplace_back(10 * y * y, y);
    } else {
      for (const auto x : c.x) out.emplace_back(x, y);
    }
  }
  return out;
}

std::vector<std::uint64_t> or_default(const std::vector<std::uint64_t>& g, std::vector<std::uint64_t> d) {
  return g.empty() ? d : g;
}

Table count_h_table(const ExperimentConfig& c) {
  Table t{{"x", "y", "z", "w", "count", "squarefree"}, {}, {}};
  for (const auto x : c.x)
    for (const auto y : c.y)
      for (const auto z : c.z)
        for (const auto w : c.w) {
          const auto n = count_H({x, y, z, w, c.squarefree}, marking(c));
          t.rows.push_back({str(x), str(y), str(z), str(w), str(n), c.squarefree ? "1" : "0"});
        }
  return t;
}

Table rough_count_table(const ExperimentConfig& c) {
  Table t{{"x", "z", "half", "count"}, {}, {}};
  for (const auto x : c.x)
    for (const auto z : c.z) t.rows.push_back({str(x), str(z), c.half ? "1" : "0", str(rough_count(x, z, c.half, marking(c)))});
  return t;
}

Table mult_table_table(const ExperimentConfig& c) {
  Table t{{"n", "w", "count"}, {}, {}};
  for (const auto n : c.n)
    for (const auto w : c.w) t.rows.push_back({str(n), str(w), str(mult_table_count(n, w, table_bits(c)))});
  return t;
}

Table farey_table(const ExperimentConfig& c) {
  Table t{{"n", "count", "mult_table", "mult_table_squared"}, {}, {}};
  for (const auto n : c.n) {
    const auto m = mult_table_count(n, 1, table_bits(c));
    t.rows.push_back({str(n), str(farey_product_count(n)), str(m), str(m * m)});
  }
  return t;
}

Table ladder_table(const ExperimentConfig& c) {
  Table t{{"limit", "j", "lambda", "block_size", "block_sum"}, {}, {}};
  for (const auto limit : c.limit) {
    const auto ladder = lambda_ladder(limit);
    for (std::size_t j = 1; j <= ladder.size(); ++j) {
      t.rows.push_back({str(limit), str(static_cast<std::uint64_t>(j)), str(ladder.lambdas[j]),
                        str(static_cast<std::uint64_t>(ladder.block(j).size())), num(ladder.block_sum(j))});
    }
    t.summary.push_back({"limit", str(limit), "K_prime", num(ladder_spread(ladder))});
  }
  return t;
}

Table l_of_a_table(const ExperimentConfig& c) {
  Table t{{"a", "tau", "L", "W_star", "isolated", "L_cap"}, {}, {}};
  for (const auto a : c.a) {
    const auto d = divisors(a);
    const double L = script_L(d).measure();
    const double cap = std::min(static_cast<double>(d.tau()) * std::log(2.0), std::log(2.0) + std::log(static_cast<double>(a)));
    t.rows.push_back({str(a), str(static_cast<std::uint64_t>(d.tau())), num(L), str(W_star(d)),
                      str(isolated_divisor_count(d)), num(cap)});
  }
  return t;
}

Table sum_p_table(const ExperimentConfig& c) {
  Table t{{"w", "t", "k", "weight", "value"}, {}, {}};
  const Weight weight = parse_weight(c.weight);
  std::vector<std::optional<std::int64_t>> ks;
  if (c.k.empty()) {
    ks.emplace_back(std::nullopt);
  } else {
    for (const auto k : c.k) ks.emplace_back(k);
  }
  for (const auto w : c.w)
    for (const auto tt : c.t)
      for (const auto& k : ks) {
        const double v = sum_over_P({w, tt, k, weight});
        t.rows.push_back({str(w), str(tt), k ? str(*k) : "all", std::string(weight_name(weight)), num(v)});
      }
  return t;
}

Table volume_table(const ExperimentConfig& c) {
  Table t{{"kind", "k", "v", "s", "M", "gamma", "u", "samples", "seed", "mean", "stderr", "hit_count", "comparator",
           "ratio"},
          {},
          {}};
  RatioRange range;
  const McOptions mc{c.threads};
  const auto emit = [&](std::int64_t k, std::int64_t v, std::string s, std::string M, std::string g, std::string u,
                        const VolumeEstimate& e, double comparator) {
    const double ratio = e.mean / comparator;
    if (std::isfinite(ratio)) range.add(ratio);
    t.rows.push_back({c.kind, str(k), str(v), std::move(s), std::move(M), std::move(g), std::move(u), str(e.samples),
                      str(e.seed), num(e.mean), num(e.std_error), str(e.hit_count), num(comparator), num(ratio)});
  };
  for (const auto k : c.k)
    for (const auto v : c.v) {
      if (c.kind == "Yk") {
        for (const auto s : c.s)
          for (const auto M : c.M)
            emit(k, v, str(s), str(M), "", "", vol_Yk(k, s, v, M, c.samples, c.seed, mc), Yk_floor(k, v));
      } else if (c.kind == "T") {
        for (const auto g : c.gamma) emit(k, v, "", "", str(g), "", vol_T(k, v, g, c.samples, c.seed, mc), T_envelope(k, v, g));
      } else {
        for (const auto u : c.u) emit(k, v, "", "", "", str(u), U_k_estimate(k, v, u, c.samples, c.seed, mc), U_envelope(k, v, u));
      }
    }
  if (range.lo <= range.hi) t.summary.push_back(range.summary());
  return t;
}

Table theory_table(const ExperimentConfig& c) {
  Table t{{"x", "y", "w", "delta", "regime", "B", "relaxed", "theorem1_order", "hxy2y_order", "heuristic"}, {}, {}};
  for (const auto x : c.x)
    for (const auto y : c.y)
      for (const auto w : c.w) {
        const auto r = regime(x, y, w);
        const auto xd = static_cast<double>(x);
        const auto yd = static_cast<double>(y);
        const std::string heur = w <= y ? num(heuristic_estimate(xd, yd, static_cast<double>(w))) : "";
        t.rows.push_back({str(x), str(y), str(w), num(r.delta), r.regime == Regime::NoClustering ? "i" : "ii", num(r.B),
                          r.relaxed ? "1" : "0", num(theorem1_order(x, y, w)), num(hxy2y_order(xd, yd)), heur});
      }
  return t;
}

Table ratio_sweep_table(const ExperimentConfig& c) {
  Table t;
  RatioRange range;
  if (c.kind == "H_vs_order") {
    t.header = {"x", "y", "w", "count", "order", "ratio"};
    const auto ws = or_default(c.w, {1});
    for (const auto& [x, y] : xy_pairs(c, or_default(c.y, hvo_default_y())))
      for (const auto w : ws) {
        const double order = w <= 1 ? hxy2y_order(static_cast<double>(x), static_cast<double>(y)) : theorem1_order(x, y, w);
        const auto count = count_H({x, y, 2 * y, w, false}, marking(c));
        const double ratio = static_cast<double>(count) / order;
        range.add(ratio);
        t.rows.push_back({str(x), str(y), str(w), str(count), num(order), num(ratio)});
      }
  } else if (c.kind == "heuristic_vs_exact") {
    t.header = {"x", "y", "w", "count", "heuristic", "ratio"};
    for (const auto& [x, y] : xy_pairs(c, or_default(c.y, {1000, 2000})))
      for (const auto w : or_default(c.w, {4, 5, 10})) {
        const double h = heuristic_estimate(static_cast<double>(x), static_cast<double>(y), static_cast<double>(w));
        const auto count = count_H({x, y, 2 * y, w, false}, marking(c));
        const double ratio = static_cast<double>(count) / h;
        range.add(ratio);
        t.rows.push_back({str(x), str(y), str(w), str(count), num(h), num(ratio)});
      }
  } else if (c.kind == "norton") {
    t.header = {"x", "h", "m", "partial_sum", "bound", "ratio"};
    std::vector<std::uint64_t> xs = c.x;
    if (xs.empty()) {
      for (std::uint64_t x = 1; x <= 60; ++x) xs.push_back(x);
    }
    for (const auto x : xs) {
      const auto xd = static_cast<double>(x);
      for (std::int64_t m = 0; m <= static_cast<std::int64_t>(x); ++m)
        for (std::int64_t h = 0; h <= m; ++h) {
          const double ratio = std::exp(log_poisson_partial_sum(xd, h, m) - log_norton_bound(xd, h, m));
          range.add(ratio);
          t.rows.push_back({str(x), str(h), str(m), num(poisson_partial_sum(xd, h, m)), num(norton_bound(xd, h, m)),
                            num(ratio)});
        }
    }
  } else {  // HL_ratio
    t.header = {"x", "y", "w", "H_diff", "lhs", "rhs", "ratio"};
    for (const auto x : or_default(c.x, {100'000'000}))
      for (const auto y : or_default(c.y, {40}))
        for (const auto w : or_default(c.w, {5})) {
          const auto full = count_H({x, y, 2 * y, w, false}, marking(c));
          const auto half = count_H({x / 2, y, 2 * y, w, false}, marking(c));
          const double ly = std::log(static_cast<double>(y));
          const double lhs = static_cast<double>(full - half) * ly * ly / static_cast<double>(x);
          const double rhs = sum_over_P({w, y, std::nullopt, Weight::LOverA});
          const double ratio = lhs / rhs;
          range.add(ratio);
          t.rows.push_back({str(x), str(y), str(w), str(full - half), num(lhs), num(rhs), num(ratio)});
        }
  }
  if (!t.rows.empty()) t.summary.push_back(range.summary());
  return t;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void validate(const ExperimentConfig& c) {
  if (c.marking_budget) require(*c.marking_budget <= kDefaultMarkingBudget, "--marking-budget exceeds 2^33");
  if (c.table_bits) require(*c.table_bits <= kDefaultTableBits, "--table-bits exceeds 2^32 + 1");
  const std::uint64_t budget = c.marking_budget.value_or(kDefaultMarkingBudget);
  const auto check_x = [&](std::uint64_t x) {
    if (x > budget) throw ResourceError("x=" + std::to_string(x) + " exceeds marking budget");
  };

  switch (c.subcommand) {
    case Subcommand::CountH:
      require_grid(c.x, "x");
      require_grid(c.y, "y");
      require_grid(c.z, "z");
      require_grid(c.w, "w");
      for (const auto x : c.x) {
        require(x >= 1, "x must be >= 1");
        check_x(x);
      }
      for (const auto y : c.y)
        for (const auto z : c.z) require(y < z, "need y < z for every grid pair");
      for (const auto w : c.w) require(w >= 1, "w must be >= 1");
      break;
    case Subcommand::RoughCount:
      require_grid(c.x, "x");
      require_grid(c.z, "z");
      for (const auto x : c.x) {
        require(x >= 1, "x must be >= 1");
        check_x(x);
      }
      for (const auto z : c.z) require(z >= 1, "z must be >= 1");
      break;
    case Subcommand::MultTable:
    case Subcommand::Farey:
      require_grid(c.n, "n");
      if (c.subcommand == Subcommand::MultTable) require_grid(c.w, "w");
      for (const auto w : c.w) require(w >= 1, "w must be >= 1");
      for (const auto n : c.n) {
        require(n >= 1, "n must be >= 1");
        if (n > kMaxTableSide || n * n + 1 > table_bits(c)) throw ResourceError("n exceeds the multiplication-table budget");
        if (c.subcommand == Subcommand::Farey && n > kMaxFareyOrder) throw ResourceError("n exceeds 200 for farey");
      }
      break;
    case Subcommand::LambdaLadder:
      require_grid(c.limit, "limit");
      for (const auto l : c.limit) {
        require(l >= 2, "limit must be >= 2");
        if (l > (std::uint64_t{1} << 32)) throw ResourceError("limit exceeds 2^32");
      }
      break;
    case Subcommand::LOfA:
      require_grid(c.a, "a");
      for (const auto a : c.a) require(a >= 1, "a must be >= 1");
      break;
    case Subcommand::SumP:
      require_grid(c.w, "w");
      require_grid(c.t, "t");
      parse_weight(c.weight);
      for (const auto k : c.k) require(k >= 0, "k must be >= 0");
      for (const auto w : c.w)
        for (const auto t : c.t) {
          require(w >= 2 && w <= t, "need 2 <= w <= t");
          if (primes_in_range(w + 1, t).size() > kMaxSubsetPrimes) throw ResourceError("more than 24 primes in (w,t]");
        }
      break;
    case Subcommand::Volume:
      require(c.kind == "Yk" || c.kind == "T" || c.kind == "U", "--kind must be Yk, T or U");
      require_grid(c.k, "k");
      require_grid(c.v, "v");
      for (const auto k : c.k) require(k >= 1, "k must be >= 1");
      if (c.kind == "Yk") {
        require_grid(c.s, "s");
        require_grid(c.M, "M");
        require(c.samples >= 10'000, "--samples must be >= 10^4");
        for (const auto v : c.v) require(v >= 1, "v must be >= 1");
      } else if (c.kind == "T") {
        require_grid(c.gamma, "gamma");
        for (const auto g : c.gamma) require(g >= 0, "gamma must be >= 0");
      } else {
        require_grid(c.u, "u");
        for (const auto u : c.u) require(u >= 1, "u must be >= 1");
      }
      require(c.samples >= 2, "--samples must be >= 2");
      break;
    case Subcommand::Theory:
      require_grid(c.x, "x");
      require_grid(c.y, "y");
      require_grid(c.w, "w");
      for (const auto y : c.y) require(y >= 4, "y must be >= 4");
      for (const auto w : c.w) require(w >= 4, "w must be >= 4");
      break;
    case Subcommand::RatioSweep: {
      require(c.kind == "H_vs_order" || c.kind == "heuristic_vs_exact" || c.kind == "norton" || c.kind == "HL_ratio",
              "--kind must be H_vs_order, heuristic_vs_exact, norton or HL_ratio");
      if (c.kind == "norton") {
        for (const auto x : c.x) require(x >= 1, "x must be >= 1");
        break;
      }
      for (const auto y : c.y) require(y >= 3, "y must be >= 3");
      if (c.kind == "heuristic_vs_exact") {
        for (const auto w : c.w) require(w >= 4, "w must be >= 4");
        for (const auto y : c.y)
          for (const auto w : c.w) require(w <= y, "need w <= y");
      }
      if (c.kind == "H_vs_order") {
        for (const auto w : c.w) require(w <= 1 || w >= 4, "w must be 1 or >= 4");
      }
      if (c.kind == "HL_ratio") {
        for (const auto w : or_default(c.w, {5})) require(w >= 2, "w must be >= 2");
        for (const auto y : or_default(c.y, {40}))
          for (const auto w : or_default(c.w, {5})) {
            require(w <= y, "need w <= y");
            if (primes_in_range(w + 1, y).size() > kMaxSubsetPrimes) throw ResourceError("more than 24 primes in (w,y]");
          }
      }
      for (const auto& [x, y] : xy_pairs(c, c.kind == "HL_ratio" ? or_default(c.y, {40}) : or_default(c.y, hvo_default_y()))) {
        check_x(x);
        (void)y;
      }
      break;
    }
  }
}

void run(const ExperimentConfig& c, std::ostream& out) {
  validate(c);
  Table t;
  switch (c.subcommand) {
    case Subcommand::CountH: t = count_h_table(c); break;
    case Subcommand::RoughCount: t = rough_count_table(c); break;
    case Subcommand::MultTable: t = mult_table_table(c); break;
    case Subcommand::Farey: t = farey_table(c); break;
    case Subcommand::LambdaLadder: t = ladder_table(c); break;
    case Subcommand::LOfA: t = l_of_a_table(c); break;
    case Subcommand::SumP: t = sum_p_table(c); break;
    case Subcommand::Volume: t = volume_table(c); break;
    case Subcommand::Theory: t = theory_table(c); break;
    case Subcommand::RatioSweep: t = ratio_sweep_table(c); break;
  }
  if (c.out.empty()) {
    t.write(out);
    return;
  }
  std::ofstream file(c.out, std::ios::binary);
  if (!file) throw DomainError("cannot open output file '" + c.out + "'");
  t.write(file);
}

int run_guarded(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  try {
    run(config, out);
    return kOk;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kDomain;
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << '\n';
    return kResource;
  } catch (const std::bad_alloc&) {
    err << "resource error: out of memory\n";
    return kResource;
  }
}

}  // namespace roughdiv
