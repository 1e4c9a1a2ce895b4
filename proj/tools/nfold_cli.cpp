// nfold: generate N-fold instances, run augmentation grids, solve and export.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "nfold/augment.hpp"
#include "nfold/batch.hpp"
#include "nfold/closest_string.hpp"
#include "nfold/experiment.hpp"
#include "nfold/instance_io.hpp"
#include "nfold/scheduling.hpp"

namespace fs = std::filesystem;
using namespace nfold;

namespace {

struct BatchFlags {
  std::string instance_type = "sched";
  SchedBatch sched;
  CsBatch cs;
  std::uint64_t seed = 1;
};

void add_batch_flags(CLI::App* app, BatchFlags& f) {
  app->add_option("--instance_type", f.instance_type, "sched or cs")
      ->check(CLI::IsMember({"sched", "cs"}))
      ->capture_default_str();
  app->add_option("--seed", f.seed, "base seed of the batch")->capture_default_str();
  app->add_option("--machines", f.sched.machines)->capture_default_str();
  app->add_option("--number_job_types", f.sched.number_job_types)
      ->capture_default_str();
  app->add_option("--slacks", f.sched.slacks)->capture_default_str();
  app->add_option("--p_s", f.sched.p_s)->capture_default_str();
  app->add_option("--count_for_each_p", f.sched.count_for_each_p)
      ->capture_default_str();
  app->add_option("--min_capacity", f.sched.min_capacity, "S")
      ->capture_default_str();
  app->add_option("--max_capacity", f.sched.max_capacity, "L")
      ->capture_default_str();
  app->add_option("--str_len", f.cs.str_len)->capture_default_str();
  app->add_option("--str_num", f.cs.str_num)->capture_default_str();
  app->add_option("--ratio", f.cs.ratio)->capture_default_str();
  app->add_option("--sigma", f.cs.sigma, "alphabet sizes")->capture_default_str();
  app->add_option("--distance_factor", f.cs.distance_factor)
      ->capture_default_str();
}

std::vector<NFoldInstance> make_batch(BatchFlags& f) {
  f.sched.seed = f.seed;
  f.cs.seed = f.seed;
  return f.instance_type == "cs" ? generate_cs_batch(f.cs)
                                 : generate_sched_batch(f.sched);
}

struct GridFlags {
  std::vector<Int> gc{4, 8, 12, 20, 30, 40, 50, 75, 100};
  std::vector<std::string> gammas{"log2"};
  std::string logdir = "logs";
  std::optional<std::int64_t> augip_timelimit;
  std::optional<std::int64_t> milp_timelimit;
  std::optional<std::size_t> max_outer;
  bool disable_nfold = false;
  std::size_t jobs = 1;
};

void add_grid_flags(CLI::App* app, GridFlags& f) {
  app->add_option("--gc,--gc_values", f.gc, "l1 budgets")->capture_default_str();
  app->add_option("--gammas", f.gammas, "unit, best, log2, log5, log10")
      ->capture_default_str();
  app->add_option("--logdir", f.logdir)->capture_default_str();
  app->add_option("--augip_timelimit", f.augip_timelimit,
                  "seconds per inner loop");
  app->add_option("--milp_timelimit", f.milp_timelimit, "ignored");
  app->add_option("--max_outer_iters", f.max_outer);
  app->add_flag("--disable_nfold", f.disable_nfold,
                "skip the solver; write exact references and LP files only");
  app->add_option("-j,--jobs", f.jobs, "cells run in parallel")
      ->capture_default_str();
}

ExperimentGrid make_grid(const GridFlags& f) {
  if (f.milp_timelimit) {
    std::cerr << "warning: --milp_timelimit is accepted but ignored\n";
  }
  for (const std::string& g : f.gammas) config_for_gamma(g, 1);
  ExperimentGrid grid;
  grid.gc_values = f.gc;
  grid.gammas = f.gammas;
  grid.logdir = f.logdir;
  if (f.augip_timelimit) grid.augip_timelimit_ms = *f.augip_timelimit * 1000;
  grid.max_outer_iters = f.max_outer;
  grid.disable_nfold = f.disable_nfold;
  grid.jobs = f.jobs;
  return grid;
}

int report(const GridResult& res) {
  std::cout << res.summary.size() << " runs completed, " << res.failures.size()
            << " failed\n";
  for (const std::string& f : res.failures) std::cerr << "failed: " << f << "\n";
  return res.exit_code;
}

IntVector read_vector_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw NFoldError("cannot open " + path.string());
  nlohmann::json j;
  in >> j;
  return j.get<IntVector>();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"N-fold integer programming by approximate Graver augmentation"};
  app.require_subcommand(1);

  BatchFlags gen_flags;
  std::string out_dir = "instances";
  auto* gen = app.add_subcommand("generate", "write a random instance batch");
  add_batch_flags(gen, gen_flags);
  gen->add_option("-o,--out", out_dir)->capture_default_str();

  BatchFlags run_batch;
  GridFlags run_grid_flags;
  auto* run = app.add_subcommand(
      "run", "generate a batch in memory and run the solver grid on it");
  add_batch_flags(run, run_batch);
  add_grid_flags(run, run_grid_flags);

  std::vector<std::string> grid_files;
  GridFlags grid_flags;
  auto* grid = app.add_subcommand("grid", "run the solver grid on instance files");
  grid->add_option("instances", grid_files, "instance JSON files")->required();
  add_grid_flags(grid, grid_flags);

  std::string solve_file, solve_gamma = "log2", solve_out;
  Int solve_gc = 20;
  std::optional<std::int64_t> solve_timelimit;
  auto* solve = app.add_subcommand("solve", "solve one instance");
  solve->add_option("instance", solve_file)->required();
  solve->add_option("--gc", solve_gc)->capture_default_str();
  solve->add_option("--gamma", solve_gamma)->capture_default_str();
  solve->add_option("--augip_timelimit", solve_timelimit, "seconds per inner loop");
  solve->add_option("-o,--out", solve_out, "write the final x as JSON");

  std::string lp_file, lp_x, lp_out;
  Int lp_lambda = 1, lp_gc = 4;
  auto* lp = app.add_subcommand("export-lp", "write one augmentation subproblem");
  lp->add_option("instance", lp_file)->required();
  lp->add_option("--lambda", lp_lambda)->capture_default_str();
  lp->add_option("--gc", lp_gc)->capture_default_str();
  lp->add_option("--x", lp_x, "JSON file with the point (default: x0)");
  lp->add_option("-o,--out", lp_out, "output path (default: conventional name)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const auto batch = make_batch(gen_flags);
      fs::create_directories(out_dir);
      for (const NFoldInstance& inst : batch) {
        write_instance(inst, fs::path(out_dir) / (inst.id + ".json"));
      }
      std::cout << "wrote " << batch.size() << " instances to " << out_dir << "\n";
      return 0;
    }
    if (*run) {
      ExperimentGrid g = make_grid(run_grid_flags);
      for (NFoldInstance& inst : make_batch(run_batch)) {
        g.instances.push_back({std::move(inst), {}});
      }
      return report(run_grid(g));
    }
    if (*grid) {
      ExperimentGrid g = make_grid(grid_flags);
      for (const std::string& f : grid_files) g.instances.push_back({std::nullopt, f});
      return report(run_grid(g));
    }
    if (*solve) {
      const NFoldInstance inst = read_instance(solve_file);
      SolverConfig cfg = config_for_gamma(solve_gamma, solve_gc);
      if (solve_timelimit) cfg.inner_time_budget_ms = *solve_timelimit * 1000;
      const AugmentResult res = solve_instance(cfg, inst);
      const RunSummary& s = res.log.summary;
      std::cout << "objective " << s.start_objective << " -> " << s.final_objective
                << " in " << s.outer_iters << " outer / " << s.inner_iters
                << " inner iterations (" << to_string(s.stop) << ")\n";
      if (!solve_out.empty()) {
        std::ofstream out(solve_out);
        out << nlohmann::json(res.x).dump() << "\n";
      }
      return 0;
    }
    if (*lp) {
      const NFoldInstance inst = read_instance(lp_file);
      AugQuery q;
      q.inst = &inst;
      if (!lp_x.empty()) {
        q.x = read_vector_file(lp_x);
      } else if (inst.start) {
        q.x = *inst.start;
      } else {
        throw NFoldError("instance has no x0; pass --x");
      }
      q.lambda = lp_lambda;
      q.gc = lp_gc;
      const fs::path path = lp_out.empty() ? fs::path(augip_lp_filename(q)) : fs::path(lp_out);
      export_augip_lp(q, path);
      std::cout << "wrote " << path.string() << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
