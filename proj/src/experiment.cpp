#include "nfold/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "nfold/instance_io.hpp"
#include "nfold/phase1.hpp"
#include "nfold/scheduling.hpp"

namespace nfold {

namespace fs = std::filesystem;

std::optional<Int> exact_reference(const NFoldInstance& inst,
                                   OracleBudget budget) {
  const auto& meta = inst.meta;
  if (meta.is_object() && meta.value("generator", "") == "sched" &&
      meta.contains("capacities") && meta.contains("sizes") &&
      meta.contains("multiplicities")) {
    try {
      return sched_packing_optimum(meta.at("sizes").get<IntVector>(),
                                   meta.at("capacities").get<IntVector>(),
                                   meta.at("multiplicities").get<IntVector>(),
                                   budget.max_points);
    } catch (const std::length_error&) {
      return std::nullopt;
    }
  }
  try {
    const OracleResult res = brute_force_optimum(inst, budget);
    if (res.status == OracleStatus::optimal) return res.value;
  } catch (const OracleCapExceeded&) {
  }
  return std::nullopt;
}

std::optional<std::size_t> iterations_to_reach(const RunLog& log,
                                               Int reference) {
  if (log.summary.start_objective <= reference) return 0;
  std::optional<std::size_t> hit_outer;
  for (const InnerRecord& rec : log.inner) {
    if (rec.chosen && rec.objective <= reference) {
      hit_outer = rec.outer_iter;
      break;
    }
  }
  if (!hit_outer) return std::nullopt;
  std::size_t last = 0;
  for (const InnerRecord& rec : log.inner) {
    if (rec.outer_iter == *hit_outer) last = std::max(last, rec.inner_iter);
  }
  return last;
}

std::vector<RunMetrics> compute_metrics(
    const std::vector<std::pair<RunKey, RunLog>>& runs,
    std::optional<Int> exact) {
  std::vector<RunMetrics> out;
  if (runs.empty()) return out;
  Int reference = 0;
  if (exact) {
    reference = *exact;
  } else {
    reference = runs.front().second.summary.final_objective;
    for (const auto& [key, log] : runs) {
      reference = std::min(reference, log.summary.final_objective);
    }
  }
  std::map<std::string, std::size_t> it_min;  // per gamma
  for (const auto& [key, log] : runs) {
    RunMetrics m;
    m.key = key;
    m.final_objective = log.summary.final_objective;
    m.reference = reference;
    m.gap = checked_sub(m.final_objective, reference);
    m.gap_kind = exact ? GapKind::exact : GapKind::relative;
    m.iters_to_reference = iterations_to_reach(log, reference);
    if (m.iters_to_reference) {
      auto [it, inserted] = it_min.emplace(key.gamma, *m.iters_to_reference);
      if (!inserted) it->second = std::min(it->second, *m.iters_to_reference);
    }
    out.push_back(m);
  }
  for (RunMetrics& m : out) {
    if (!m.iters_to_reference) {
      m.convergence_rate = 0.0;
    } else if (*m.iters_to_reference == 0) {
      m.convergence_rate = 1.0;
    } else {
      m.convergence_rate = static_cast<double>(it_min.at(m.key.gamma)) /
                           static_cast<double>(*m.iters_to_reference);
    }
  }
  return out;
}

fs::path instance_dir(const fs::path& logdir, const NFoldInstance& inst) {
  const std::string id = inst.id.empty() ? "instance" : inst.id;
  return logdir / std::to_string(inst.dimension()) /
         std::to_string(inst.delta()) / id;
}

AugmentResult solve_instance(const SolverConfig& cfg,
                             const NFoldInstance& inst) {
  if (inst.start) return augment_to_optimum(cfg, inst, *inst.start);
  const Phase1Build p1 = build_phase1(inst);
  const AugmentResult first = augment_to_optimum(cfg, p1.p1.extended, p1.start);
  const Phase1Outcome found = extract_feasible(p1.p1, first.x);
  if (const auto* nf = std::get_if<Phase1NotFound>(&found)) {
    throw NFoldError("phase 1 ended with residual " +
                     std::to_string(nf->residual) + " at gc " +
                     std::to_string(cfg.gc));
  }
  return augment_to_optimum(cfg, inst, std::get<Phase1Found>(found).x);
}

void write_metrics_csv(std::ostream& out, const std::vector<RunMetrics>& rows) {
  out << "run_id,instance_id,gc,gamma,final_objective,reference_optimum,gap,"
         "gap_kind,iters_to_reference,convergence_rate\n";
  for (const RunMetrics& m : rows) {
    char rate[32];
    std::snprintf(rate, sizeof rate, "%.6f", m.convergence_rate);
    out << m.key.run_id << ',' << m.key.instance_id << ',' << m.key.gc << ','
        << m.key.gamma << ',' << m.final_objective << ',' << m.reference << ','
        << m.gap << ',' << gap_kind_name(m.gap_kind) << ',';
    if (m.iters_to_reference) out << *m.iters_to_reference;
    out << ',' << rate << '\n';
  }
}

namespace {

struct LoadedInstance {
  std::optional<NFoldInstance> inst;
  std::string error;
  std::optional<Int> exact;
};

struct Cell {
  std::size_t instance = 0;
  Int gc = 0;
  std::string gamma;
};

std::string cell_name(const LoadedInstance& li, const GridInstance& gi,
                      const Cell& cell) {
  const std::string id =
      li.inst ? li.inst->id : gi.path.string();
  return id + " " + cell.gamma + " gc=" + std::to_string(cell.gc);
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw NFoldError("cannot write " + path.string());
}

CellResult run_cell(const ExperimentGrid& grid, const LoadedInstance& li,
                    const Cell& cell) {
  CellResult res;
  const NFoldInstance& inst = *li.inst;
  const std::string id = inst.id.empty() ? "instance" : inst.id;
  res.key = {id + "_" + cell.gamma + "_gc" + std::to_string(cell.gc),
             id,
             inst.dimension(),
             inst.delta(),
             cell.gc,
             cell.gamma};
  bool have_log = false;
  try {
    SolverConfig cfg = config_for_gamma(cell.gamma, cell.gc);
    cfg.inner_time_budget_ms = grid.augip_timelimit_ms;
    cfg.max_outer_iters = grid.max_outer_iters;
    res.log = solve_instance(cfg, inst).log;
    have_log = true;
    res.ok = true;
  } catch (const AugmentAborted& e) {
    res.log = e.partial_log();
    have_log = true;
    res.error = e.what();
  } catch (const std::exception& e) {
    res.error = e.what();
  }
  try {
    const fs::path dir = instance_dir(grid.logdir, inst);
    fs::create_directories(dir);
    const std::string stem = cell.gamma + "_" + std::to_string(cell.gc);
    res.trace_path = dir / (stem + ".csv");
    res.log_path = dir / (stem + ".log");
    std::ostringstream trace, text;
    write_trace_csv(trace, res.key, res.log);
    if (have_log) {
      write_text_log(text, res.key, inst.max_coefficient(), res.log);
    }
    if (!res.ok) text << "error: " << res.error << "\n";
    write_file(res.trace_path, trace.str());
    write_file(res.log_path, text.str());
  } catch (const std::exception& e) {
    if (res.ok) {
      res.ok = false;
      res.error = e.what();
    }
  }
  return res;
}

void run_disabled(const ExperimentGrid& grid,
                  std::vector<LoadedInstance>& loaded, GridResult& out) {
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    LoadedInstance& li = loaded[i];
    if (!li.inst) {
      out.failures.push_back(grid.instances[i].path.string() + ": " + li.error);
      continue;
    }
    const NFoldInstance& inst = *li.inst;
    const fs::path dir = instance_dir(grid.logdir, inst);
    fs::create_directories(dir);
    nlohmann::json report = {{"instance_id", inst.id},
                             {"Nt", inst.dimension()},
                             {"delta", inst.delta()},
                             {"max_coefficient", inst.max_coefficient()}};
    if (li.exact) {
      report["exact_optimum"] = *li.exact;
    } else {
      report["exact_optimum"] = nullptr;
    }
    write_file(dir / "oracle.json", report.dump(2) + "\n");
    if (!inst.start) continue;
    for (Int gc : grid.gc_values) {
      AugQuery q;
      q.inst = &inst;
      q.x = *inst.start;
      q.lambda = 1;
      q.gc = gc;
      export_augip_lp(q, dir / augip_lp_filename(q));
    }
  }
}

}  // namespace

GridResult run_grid(const ExperimentGrid& grid) {
  GridResult out;
  std::vector<LoadedInstance> loaded(grid.instances.size());
  for (std::size_t i = 0; i < grid.instances.size(); ++i) {
    const GridInstance& gi = grid.instances[i];
    try {
      loaded[i].inst = gi.inst ? *gi.inst : read_instance(gi.path);
      loaded[i].inst->validate();
      if (grid.compute_exact) {
        loaded[i].exact = exact_reference(*loaded[i].inst, grid.oracle_budget);
      }
    } catch (const std::exception& e) {
      loaded[i].inst.reset();
      loaded[i].error = e.what();
    }
  }

  if (grid.disable_nfold) {
    run_disabled(grid, loaded, out);
    out.exit_code = out.failures.empty() ? 0 : 1;
    return out;
  }

  std::vector<Cell> cells;
  for (std::size_t i = 0; i < grid.instances.size(); ++i) {
    for (const std::string& gamma : grid.gammas) {
      for (Int gc : grid.gc_values) cells.push_back({i, gc, gamma});
    }
  }
  if (cells.empty()) return out;

  out.cells.resize(cells.size());
  std::vector<char> skipped(cells.size(), 0);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t c = next++; c < cells.size(); c = next++) {
      const LoadedInstance& li = loaded[cells[c].instance];
      if (!li.inst) {
        skipped[c] = 1;
        continue;
      }
      out.cells[c] = run_cell(grid, li, cells[c]);
    }
  };
  const std::size_t jobs = std::max<std::size_t>(1, grid.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < std::min(jobs, cells.size()); ++j) {
      pool.emplace_back(worker);
    }
    for (std::thread& th : pool) th.join();
  }

  for (std::size_t c = 0; c < cells.size(); ++c) {
    const GridInstance& gi = grid.instances[cells[c].instance];
    const LoadedInstance& li = loaded[cells[c].instance];
    if (skipped[c]) {
      out.failures.push_back(cell_name(li, gi, cells[c]) + ": " + li.error);
    } else if (!out.cells[c].ok) {
      out.failures.push_back(cell_name(li, gi, cells[c]) + ": " +
                             out.cells[c].error);
    }
  }

  for (std::size_t i = 0; i < grid.instances.size(); ++i) {
    std::vector<std::pair<RunKey, RunLog>> runs;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (cells[c].instance == i && !skipped[c] && out.cells[c].ok) {
        runs.emplace_back(out.cells[c].key, out.cells[c].log);
      }
    }
    for (const RunMetrics& m : compute_metrics(runs, loaded[i].exact)) {
      out.metrics.push_back(m);
      const RunLog* log = nullptr;
      for (const auto& [key, l] : runs) {
        if (key == m.key) log = &l;
      }
      SummaryRow row;
      row.key = m.key;
      row.final_objective = m.final_objective;
      row.reference_optimum = m.reference;
      row.gap = m.gap;
      row.gap_kind = m.gap_kind;
      row.outer_iters = log->summary.outer_iters;
      row.inner_iters = log->summary.inner_iters;
      row.total_ms = log->summary.total_ms;
      out.summary.push_back(row);
    }
  }

  fs::create_directories(grid.logdir);
  std::ostringstream summary, metrics;
  write_summary_header(summary);
  for (const SummaryRow& row : out.summary) write_summary_row(summary, row);
  write_metrics_csv(metrics, out.metrics);
  write_file(grid.logdir / "summary.csv", summary.str());
  write_file(grid.logdir / "metrics.csv", metrics.str());
  out.exit_code = out.failures.empty() ? 0 : 1;
  return out;
}

}  // namespace nfold
