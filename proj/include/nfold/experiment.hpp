#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nfold/augment.hpp"
#include "nfold/oracle.hpp"
#include "nfold/run_log.hpp"

namespace nfold {

/// One instance of a grid, either in memory or as a JSON file that is read
/// when its cells run (a broken file fails only its own cells).
struct GridInstance {
  std::optional<NFoldInstance> inst;
  std::filesystem::path path;
};

struct ExperimentGrid {
  std::vector<GridInstance> instances;
  std::vector<Int> gc_values;
  std::vector<std::string> gammas;  // unit, best, logC
  std::filesystem::path logdir = "logs";
  std::optional<std::int64_t> augip_timelimit_ms;  // per inner loop
  std::optional<std::size_t> max_outer_iters;
  bool disable_nfold = false;  // oracle and LP export only
  bool compute_exact = true;   // try an exact reference per instance
  OracleBudget oracle_budget;
  std::size_t jobs = 1;
};

struct CellResult {
  RunKey key;
  bool ok = false;
  std::string error;
  RunLog log;
  std::filesystem::path trace_path;
  std::filesystem::path log_path;
};

struct RunMetrics {
  RunKey key;
  Int final_objective = 0;
  Int reference = 0;
  Int gap = 0;
  GapKind gap_kind = GapKind::relative;
  // Inner iterations spent up to the end of the outer iteration that first
  // reached the reference; nullopt if it was never reached.
  std::optional<std::size_t> iters_to_reference;
  double convergence_rate = 0;
};

struct GridResult {
  std::vector<CellResult> cells;
  std::vector<SummaryRow> summary;
  std::vector<RunMetrics> metrics;
  std::vector<std::string> failures;
  int exit_code = 0;
};

/// Exact optimum when one can be computed cheaply: the packing DP for
/// scheduling models, box enumeration for tiny instances.
std::optional<Int> exact_reference(const NFoldInstance& inst,
                                   OracleBudget budget = {});

/// Inner iterations up to the end of the outer iteration whose step first
/// brings the objective to `reference` or below; 0 when the start already
/// does.
std::optional<std::size_t> iterations_to_reach(const RunLog& log,
                                               Int reference);

/// Gap and convergence rate for all runs of one instance. Without an exact
/// value the reference is the best final objective over the runs. Rates are
/// it_min / it(gc) within each gamma; a run that never reaches the
/// reference gets rate 0.
std::vector<RunMetrics> compute_metrics(
    const std::vector<std::pair<RunKey, RunLog>>& runs,
    std::optional<Int> exact);

/// {logdir}/{Nt}/{delta}/{instance_id}
std::filesystem::path instance_dir(const std::filesystem::path& logdir,
                                   const NFoldInstance& inst);

/// Runs every instance x gc x gamma cell. Writes a trace CSV and a text log
/// per cell, plus summary.csv and metrics.csv under logdir. Exit code 0 iff
/// every cell completed.
GridResult run_grid(const ExperimentGrid& grid);

/// Runs the solver from the instance's start point, or through phase 1
/// when it has none.
AugmentResult solve_instance(const SolverConfig& cfg,
                             const NFoldInstance& inst);

void write_metrics_csv(std::ostream& out, const std::vector<RunMetrics>& rows);

}  // namespace nfold
