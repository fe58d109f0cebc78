#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cgdoi/cg_driver.hpp"
#include "cgdoi/instance.hpp"

namespace cgdoi {

/// A seed-by-stabilization benchmark sweep over generated vehicle-routing
/// instances, with per-run convergence CSVs and a cross-method summary table.
struct BenchConfig {
  std::vector<std::uint64_t> seeds;  // one instance per seed; must be nonempty
  int n_items = 40;
  int grid_size = 100;
  int capacity = 10;
  int n_vehicles = 5;
  DemandRule demand = DemandRule::unit();
  std::vector<Stabilization> stabs = {Stabilization::None, Stabilization::Sdoi,
                                      Stabilization::DtDoiReduced};
  std::string out_dir;  // empty: skip CSV output
  /// Run the seed-by-stab matrix one job at a time, in order, so wall-clock
  /// measurements do not contend for cores. Off: a bounded worker pool.
  bool sequential_timing = false;
  int jobs = 0;  // worker cap when parallel; 0 picks the hardware default
  CgConfig cg;   // stab is overridden per run
};

/// Outcome of one (seed, stabilization) cell.
struct BenchRun {
  std::uint64_t seed = 0;
  Stabilization stab = Stabilization::None;
  CgTermination termination = CgTermination::Optimal;
  double objective = 0.0;
  long iterations = 0;
  double seconds = 0.0;  // solver loop only; generation and IO excluded
  long columns = 0;      // generated (non-artificial) columns at the end
  /// Largest primal value over pairwise-exchange stabilization columns and
  /// over artificial slacks in the final master; 0 when none exist. Runs
  /// folded back from CSVs leave both at 0.
  double max_swap_primal = 0.0;
  double max_artificial_primal = 0.0;
  std::string csv_path;  // empty when CSVs were not written
};

/// One summary-table line per seed. Speedups are unstabilized metric over
/// method metric and exist only when both runs solved to optimality; the
/// detour column prefers the reduced variant when both were benchmarked.
struct SummaryRow {
  std::string instance;
  std::optional<double> unstab_time, dtdoi_time, sdoi_time;
  std::optional<double> dtdoi_speedup, sdoi_speedup;
  std::optional<long> unstab_iters, dtdoi_iters, sdoi_iters;
  std::optional<double> dtdoi_iter_speedup, sdoi_iter_speedup;
  bool complete = false;  // every run for this seed reached optimality
};

struct BenchResult {
  std::vector<BenchRun> runs;  // seed-major, stabs in config order
  std::vector<SummaryRow> rows;
  bool all_optimal = false;
  /// True when, per seed, all optimal runs report the same objective to
  /// within a 1e-6 relative tolerance.
  bool objectives_agree = false;
};

/// Runs every (seed, stab) cell, writes inst<seed>_<stab>.csv convergence
/// logs under out_dir when set, and cross-checks objectives. Solve failures
/// (CgError) propagate; runs that hit an iteration or time cap are kept but
/// leave their summary row incomplete.
BenchResult run_benchmark(const BenchConfig& config);

/// Groups runs by seed into summary rows (first-appearance seed order).
std::vector<SummaryRow> summarize_runs(const std::vector<BenchRun>& runs);

/// True when, per seed, the optimal runs' objectives agree to 1e-6 relative.
bool runs_objectives_agree(const std::vector<BenchRun>& runs);

/// Rebuilds runs from the convergence CSVs a previous sweep left in dir.
/// A run counts as optimal when its last logged reduced cost has converged.
/// Only iteration, timing, and objective fields are recovered.
std::vector<BenchRun> fold_runs_from_dir(const std::string& dir);

/// Renders rows as "csv" or "markdown", appending mean and median footer
/// lines computed over the complete rows (per column, over present values).
/// Throws std::invalid_argument on an unknown format or if no row is
/// complete.
std::string emit_summary(const std::vector<SummaryRow>& rows,
                         const std::string& format);

}  // namespace cgdoi
