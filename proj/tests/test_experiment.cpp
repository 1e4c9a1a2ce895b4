#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <regex>
#include <sstream>

#include "nfold/experiment.hpp"
#include "nfold/instance_io.hpp"
#include "nfold/scheduling.hpp"

using namespace nfold;
namespace fs = std::filesystem;

namespace {

// A log whose outer iteration i used inner[i] queries and ended at
// objectives[i]; `tail` queries of a final outer iteration found nothing.
RunLog synthetic_log(Int start, const std::vector<Int>& objectives,
                     const std::vector<std::size_t>& inner, std::size_t tail) {
  RunLog log;
  log.summary.start_objective = start;
  std::size_t count = 0;
  Int value = start;
  for (std::size_t o = 0; o <= objectives.size(); ++o) {
    const std::size_t n = o < objectives.size() ? inner[o] : tail;
    for (std::size_t q = 0; q < n; ++q) {
      InnerRecord rec;
      rec.outer_iter = o + 1;
      rec.inner_iter = ++count;
      rec.lambda = static_cast<Int>(q + 1);
      if (o < objectives.size() && q == 0) {
        rec.chosen = true;
        rec.lambda_exhausted = 1;
        rec.step_cost = objectives[o] - value;
      }
      rec.objective = value + rec.step_cost;
      log.inner.push_back(rec);
    }
    if (o < objectives.size()) {
      value = objectives[o];
      log.outer.push_back({o + 1, value});
    }
  }
  log.summary.final_objective = value;
  log.summary.outer_iters = log.outer.size();
  log.summary.inner_iters = log.inner.size();
  return log;
}

RunKey key(const std::string& gamma, Int gc) {
  return {"toy_" + gamma + "_gc" + std::to_string(gc), "toy", 4, 3, gc, gamma};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string mask_times(const std::string& text) {
  static const std::regex ms(R"(\d+\.\d{3}(?!\d))");
  return std::regex_replace(text, ms, "T");
}

NFoldInstance small_schedule(std::uint64_t seed) {
  SchedulingParams p;
  p.m = 3;
  p.sizes = {2, 3, 5};
  p.weights = {5, 3, 2};
  p.min_capacity = 10;
  p.max_capacity = 20;
  p.seed = seed;
  return gen_sched_instance(p).inst;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("nfold_test_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("iterations to the reference") {
  const RunLog log = synthetic_log(10, {7, 5, 2}, {3, 2, 4}, 2);
  CHECK(iterations_to_reach(log, 2) == 9u);
  CHECK(iterations_to_reach(log, 5) == 5u);
  CHECK(iterations_to_reach(log, 10) == 0u);
  CHECK_FALSE(iterations_to_reach(log, 1).has_value());
}

TEST_CASE("convergence rates") {
  SUBCASE("a single run at the reference") {
    const auto m = compute_metrics({{key("best", 4), synthetic_log(5, {3}, {2}, 1)}}, 3);
    REQUIRE(m.size() == 1);
    CHECK(m[0].gap == 0);
    CHECK(m[0].gap_kind == GapKind::exact);
    CHECK(m[0].convergence_rate == doctest::Approx(1.0));
  }
  SUBCASE("a run that misses the reference") {
    const auto m = compute_metrics({{key("best", 4), synthetic_log(5, {4}, {2}, 1)}}, 3);
    CHECK(m[0].gap == 1);
    CHECK_FALSE(m[0].iters_to_reference.has_value());
    CHECK(m[0].convergence_rate == doctest::Approx(0.0));
  }
  SUBCASE("rates are relative to the fastest run of the same gamma") {
    const auto m = compute_metrics(
        {{key("log2", 4), synthetic_log(5, {0}, {10}, 1)},
         {key("log2", 8), synthetic_log(5, {2, 0}, {10, 10}, 1)},
         {key("best", 4), synthetic_log(5, {0}, {40}, 1)}},
        std::nullopt);
    REQUIRE(m.size() == 3);
    CHECK(m[0].convergence_rate == doctest::Approx(1.0));
    CHECK(m[1].convergence_rate == doctest::Approx(0.5));
    CHECK(m[2].convergence_rate == doctest::Approx(1.0));
    CHECK(m[0].gap_kind == GapKind::relative);
    CHECK(m[0].reference == 0);
  }
  SUBCASE("a start at the reference") {
    const auto m = compute_metrics({{key("unit", 2), synthetic_log(0, {}, {}, 1)}}, 0);
    CHECK(m[0].iters_to_reference == 0u);
    CHECK(m[0].convergence_rate == doctest::Approx(1.0));
  }
  CHECK(compute_metrics({}, 0).empty());
}

TEST_CASE("trace and summary CSV round trip") {
  const RunLog log = synthetic_log(10, {7, 5}, {3, 2}, 2);
  std::ostringstream out;
  write_trace_csv(out, key("log2", 6), log);
  CHECK(out.str().rfind(kTraceHeader, 0) == 0);
  std::istringstream in(out.str());
  const ParsedTrace parsed = read_trace_csv(in);
  CHECK(parsed.key == key("log2", 6));
  CHECK(parsed.inner == log.inner);
  CHECK(outer_records_from_trace(parsed.inner) == log.outer);

  SummaryRow row;
  row.key = key("best", 3);
  row.final_objective = 4;
  row.reference_optimum = 2;
  row.gap = 2;
  row.gap_kind = GapKind::exact;
  row.outer_iters = 3;
  row.inner_iters = 9;
  row.total_ms = 1.5;
  std::ostringstream sum;
  write_summary_header(sum);
  write_summary_row(sum, row);
  std::istringstream sin(sum.str());
  const auto rows = read_summary_csv(sin);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].key == row.key);
  CHECK(rows[0].gap == 2);
  CHECK(rows[0].gap_kind == GapKind::exact);
  CHECK(rows[0].inner_iters == 9);
  CHECK(rows[0].total_ms == doctest::Approx(1.5));

  std::ostringstream bad;
  CHECK_THROWS(write_trace_csv(bad, RunKey{"a,b", "x", 1, 2, 3, "best"}, log));
}

TEST_CASE("an empty grid writes nothing") {
  ExperimentGrid grid;
  grid.logdir = fresh_dir("empty");
  const GridResult r = run_grid(grid);
  CHECK(r.exit_code == 0);
  CHECK(r.cells.empty());
  CHECK_FALSE(fs::exists(grid.logdir / "summary.csv"));
}

TEST_CASE("one instance, two gc values, one gamma") {
  ExperimentGrid grid;
  grid.logdir = fresh_dir("grid");
  const NFoldInstance inst = small_schedule(3);
  grid.instances.push_back({inst, {}});
  grid.gc_values = {4, 12};
  grid.gammas = {"log2"};
  const GridResult r = run_grid(grid);
  CHECK(r.exit_code == 0);
  REQUIRE(r.cells.size() == 2);
  CHECK(r.summary.size() == 2);
  CHECK(r.metrics.size() == 2);
  for (const CellResult& cell : r.cells) {
    CHECK(cell.ok);
    CHECK(fs::exists(cell.trace_path));
    CHECK(fs::exists(cell.log_path));
    std::ifstream in(cell.trace_path);
    const ParsedTrace t = read_trace_csv(in);
    CHECK(t.inner.size() == cell.log.inner.size());
  }
  const fs::path dir = instance_dir(grid.logdir, inst);
  CHECK(fs::exists(dir / "log2_4.csv"));
  CHECK(fs::exists(dir / "log2_12.csv"));
  std::ifstream sin(grid.logdir / "summary.csv");
  const auto rows = read_summary_csv(sin);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].gap_kind == GapKind::exact);
  CHECK(rows[0].reference_optimum == *exact_reference(inst));
  CHECK(fs::exists(grid.logdir / "metrics.csv"));
}

TEST_CASE("grid output is deterministic apart from timings") {
  std::vector<std::string> texts[2];
  for (int rep = 0; rep < 2; ++rep) {
    ExperimentGrid grid;
    grid.logdir = fresh_dir("det" + std::to_string(rep));
    grid.instances.push_back({small_schedule(1), {}});
    grid.instances.push_back({small_schedule(2), {}});
    grid.gc_values = {4, 8};
    grid.gammas = {"unit", "log2", "best"};
    grid.jobs = rep == 0 ? 1 : 3;
    const GridResult r = run_grid(grid);
    REQUIRE(r.exit_code == 0);
    texts[rep].push_back(mask_times(slurp(grid.logdir / "summary.csv")));
    texts[rep].push_back(mask_times(slurp(grid.logdir / "metrics.csv")));
    for (const CellResult& cell : r.cells) {
      texts[rep].push_back(mask_times(slurp(cell.trace_path)));
      texts[rep].push_back(mask_times(slurp(cell.log_path)));
    }
  }
  REQUIRE(texts[0].size() == texts[1].size());
  for (std::size_t i = 0; i < texts[0].size(); ++i) CHECK(texts[0][i] == texts[1][i]);
}

TEST_CASE("a broken instance file fails only its own cells") {
  ExperimentGrid grid;
  grid.logdir = fresh_dir("broken");
  fs::create_directories(grid.logdir);
  const fs::path bad = grid.logdir / "bad.json";
  std::ofstream(bad) << "{\"e1\": 3}";
  grid.instances.push_back({std::nullopt, bad});
  grid.instances.push_back({small_schedule(4), {}});
  grid.gc_values = {6};
  grid.gammas = {"log2"};
  const GridResult r = run_grid(grid);
  CHECK(r.exit_code == 1);
  CHECK(r.failures.size() == 1);
  CHECK(r.summary.size() == 1);
}

TEST_CASE("instances without a start go through phase 1") {
  NFoldInstance inst = small_schedule(5);
  inst.start.reset();
  const auto run = solve_instance(config_for_gamma("log2", 12), inst);
  CHECK(is_feasible(inst, run.x));
}

TEST_CASE("disabled mode writes the oracle report and LP files") {
  ExperimentGrid grid;
  grid.logdir = fresh_dir("disabled");
  const NFoldInstance inst = small_schedule(6);
  grid.instances.push_back({inst, {}});
  grid.gc_values = {3, 5};
  grid.gammas = {"log2"};
  grid.disable_nfold = true;
  const GridResult r = run_grid(grid);
  CHECK(r.exit_code == 0);
  const fs::path dir = instance_dir(grid.logdir, inst);
  CHECK(fs::exists(dir / "oracle.json"));
  const auto report = nlohmann::json::parse(slurp(dir / "oracle.json"));
  CHECK(report.at("exact_optimum") == *exact_reference(inst));
  CHECK(fs::exists(dir / (inst.id + "_aug_l1_gc3.lp")));
  CHECK(fs::exists(dir / (inst.id + "_aug_l1_gc5.lp")));
  CHECK_FALSE(fs::exists(grid.logdir / "summary.csv"));
}
