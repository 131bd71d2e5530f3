// roughdiv: command-line front end for the exact counters, divisor
// functionals, order formulas and Monte Carlo volumes. Emits CSV.

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

#include "roughdiv/experiment.hpp"

namespace {

using roughdiv::ExperimentConfig;
using roughdiv::Subcommand;

template <typename T>
void grid(CLI::App* app, const std::string& name, std::vector<T>& into, const std::string& help) {
  app->add_option("--" + name, into, help + " (repeat or comma-separate for a grid)")->delimiter(',');
}

void common(CLI::App* app, ExperimentConfig& c) {
  app->add_option("--out", c.out, "CSV output path (default: stdout)");
  app->add_option("--threads", c.threads, "worker threads, 0 = hardware concurrency")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact counts and order-of-magnitude checks for rough integers with a divisor in an interval"};
  app.require_subcommand(1);
  ExperimentConfig c;
  std::uint64_t marking_budget = 0;
  std::uint64_t table_bits = 0;
  std::map<CLI::App*, Subcommand> which;

  auto* count_h = app.add_subcommand("count-h", "count n <= x, P^-(n) > w, with a divisor in (y,z]");
  grid(count_h, "x", c.x, "upper bound x");
  grid(count_h, "y", c.y, "interval start y (exclusive)");
  grid(count_h, "z", c.z, "interval end z (inclusive)");
  grid(count_h, "w", c.w, "roughness w (w = 1: no restriction)");
  count_h->add_flag("--squarefree", c.squarefree, "count squarefree n only");
  count_h->add_option("--marking-budget", marking_budget, "max x (default 2^33)");
  which[count_h] = Subcommand::CountH;

  auto* rough = app.add_subcommand("rough-count", "count n <= x with P^-(n) > z");
  grid(rough, "x", c.x, "upper bound x");
  grid(rough, "z", c.z, "sieving bound z");
  rough->add_flag("--half", c.half, "restrict to n in (x/2, x]");
  rough->add_option("--marking-budget", marking_budget, "max x (default 2^33)");
  which[rough] = Subcommand::RoughCount;

  auto* mult = app.add_subcommand("mult-table", "distinct w-rough entries of the N x N multiplication table");
  grid(mult, "n", c.n, "table side N (<= 65536)");
  grid(mult, "w", c.w, "roughness w");
  mult->add_option("--table-bits", table_bits, "bitset budget in bits (default 2^32 + 1)");
  which[mult] = Subcommand::MultTable;

  auto* farey = app.add_subcommand("farey", "size of the Farey product set F_N F_N");
  grid(farey, "n", c.n, "order N (<= 200)");
  which[farey] = Subcommand::Farey;

  auto* ladder = app.add_subcommand("lambda-ladder", "greedy prime blocks with reciprocal sum <= log 2");
  grid(ladder, "limit", c.limit, "largest lambda to report");
  which[ladder] = Subcommand::LambdaLadder;

  auto* loa = app.add_subcommand("l-of-a", "L(a), W*(a) and isolated-divisor counts");
  grid(loa, "a", c.a, "integer a >= 1");
  which[loa] = Subcommand::LOfA;

  auto* sump = app.add_subcommand("sum-p", "exact weighted sum over squarefree a built from primes in (w,t]");
  grid(sump, "w", c.w, "lower prime bound w (exclusive)");
  grid(sump, "t", c.t, "upper prime bound t");
  grid(sump, "k", c.k, "number of prime factors (default: all)");
  sump->add_option("--weight", c.weight, "reciprocal | log_over_a | L_over_a | tau_over_a | Wstar_over_a")
      ->capture_default_str();
  which[sump] = Subcommand::SumP;

  auto* vol = app.add_subcommand("volume", "Monte Carlo volumes over the ordered simplex");
  vol->add_option("--kind", c.kind, "Yk | T | U")->required();
  grid(vol, "k", c.k, "dimension k");
  grid(vol, "v", c.v, "scale v");
  grid(vol, "s", c.s, "Yk: budget exponent s");
  grid(vol, "M", c.M, "Yk: cap offset M");
  grid(vol, "gamma", c.gamma, "T: slack gamma");
  grid(vol, "u", c.u, "U: shift u");
  vol->add_option("--samples", c.samples, "sample count")->capture_default_str();
  vol->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
  which[vol] = Subcommand::Volume;

  auto* theory = app.add_subcommand("theory", "regime parameters and order formulas");
  grid(theory, "x", c.x, "x");
  grid(theory, "y", c.y, "y >= 4");
  grid(theory, "w", c.w, "w >= 4");
  which[theory] = Subcommand::Theory;

  auto* sweep = app.add_subcommand("ratio-sweep", "exact counts against order formulas, with min/max summary");
  sweep->add_option("--kind", c.kind, "H_vs_order | heuristic_vs_exact | norton | HL_ratio")->required();
  grid(sweep, "x", c.x, "x (default: 10 y^2; norton: 1..60)");
  grid(sweep, "y", c.y, "y");
  grid(sweep, "w", c.w, "w");
  sweep->add_option("--marking-budget", marking_budget, "max x (default 2^33)");
  which[sweep] = Subcommand::RatioSweep;

  for (auto& [sub, tag] : which) common(sub, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return roughdiv::kUsage;
  }

  for (auto& [sub, tag] : which) {
    if (sub->parsed()) c.subcommand = tag;
  }
  if (marking_budget != 0) c.marking_budget = marking_budget;
  if (table_bits != 0) c.table_bits = table_bits;
  return roughdiv::run_guarded(c, std::cout, std::cerr);
}
