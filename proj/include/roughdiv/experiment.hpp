#pragma once
// Parameter sweeps over the library operations, emitted as CSV.
//
// CSV layout: one header row naming every column, one data row per grid point
// in grid order, then optional rows starting with "#summary". Numbers use '.'
// as decimal separator and shortest round-trip formatting, independent of
// the locale.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace roughdiv {

enum class Subcommand {
  CountH,
  RoughCount,
  MultTable,
  Farey,
  LambdaLadder,
  LOfA,
  SumP,
  Volume,
  Theory,
  RatioSweep,
};

struct ExperimentConfig {
  Subcommand subcommand = Subcommand::CountH;
  std::vector<std::uint64_t> x, y, z, w, n, a, t, limit;
  std::vector<std::int64_t> k, v, s, M, gamma, u;
  bool squarefree = false;
  bool half = false;
  std::string weight = "reciprocal";
  std::string kind;  // volume: Yk | T | U; ratio-sweep: H_vs_order | heuristic_vs_exact | norton | HL_ratio
  std::uint64_t seed = 1;
  std::uint64_t samples = 1'000'000;
  std::string out;  // empty: the stream passed to run()
  std::optional<std::uint64_t> marking_budget;
  std::optional<std::uint64_t> table_bits;
  unsigned threads = 0;
};

enum ExitCode : int { kOk = 0, kUsage = 1, kDomain = 2, kResource = 3 };

// Computes every row, then writes the CSV to config.out (or `out` when no
// path is set). Throws DomainError / ResourceError; nothing is written on error.
void run(const ExperimentConfig& config, std::ostream& out);

// run() with errors mapped to exit codes and messages written to err.
int run_guarded(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

// Rejects configurations before any table is allocated.
void validate(const ExperimentConfig& config);

std::string format_number(double v);

}  // namespace roughdiv
