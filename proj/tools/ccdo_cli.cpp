// Command-line driver: run, ablate-fixed-env, calibrate, report.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "ccdo/calibration.hpp"
#include "ccdo/experiment.hpp"
#include "ccdo/g24.hpp"

namespace fs = std::filesystem;
using namespace ccdo;

namespace {

fs::path output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("CCDO_OUTPUT_DIR"); env && *env) return env;
  return "ccdo_out";
}

void load_cache(CalibrationCache& cache, const fs::path& path) {
  if (!path.empty() && fs::exists(path)) cache.load(path);
}

struct Common {
  std::string spec_path;
  std::string out;
  std::string cache_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> reps;
  int threads = 1;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("spec", c.spec_path, "experiment spec (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", c.out, "output directory (default: $CCDO_OUTPUT_DIR or ./ccdo_out)");
  cmd->add_option("--cache", c.cache_path, "calibration cache file to load and update");
  cmd->add_option("--seed", c.seed, "override the spec's base seed");
  cmd->add_option("--reps", c.reps, "override the spec's repetitions")->check(CLI::PositiveNumber);
  cmd->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
}

ExperimentSpec resolve(const Common& c) {
  ExperimentSpec spec = load_spec(c.spec_path);
  if (c.seed) spec.seed = *c.seed;
  if (c.reps) spec.repetitions = *c.reps;
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Competitive-coevolution set search for dynamic constrained optimisation"};
  app.require_subcommand(1);

  Common run_opts;
  auto* run = app.add_subcommand("run", "offline set search + online optimisation per spec");
  add_common(run, run_opts);

  Common abl_opts;
  auto* ablate = app.add_subcommand("ablate-fixed-env", "evolving vs frozen environment population");
  add_common(ablate, abl_opts);

  Common cal_opts;
  auto* calibrate_cmd = app.add_subcommand("calibrate", "pre-build the calibration cache for a spec");
  add_common(calibrate_cmd, cal_opts);

  std::vector<std::string> report_inputs;
  std::string baseline = "CCDO";
  auto* report = app.add_subcommand("report", "compare algorithms from runs.csv files");
  report->add_option("runs", report_inputs, "runs.csv files")->required()->check(CLI::ExistingFile);
  report->add_option("--baseline", baseline, "algorithm the others are compared against");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed() || ablate->parsed() || calibrate_cmd->parsed()) {
      const Common& c = run->parsed() ? run_opts : ablate->parsed() ? abl_opts : cal_opts;
      const ExperimentSpec spec = resolve(c);
      const fs::path dir = output_dir(c.out);
      const fs::path cache_path = c.cache_path.empty() ? dir / "calibration.tsv" : fs::path(c.cache_path);
      CalibrationCache cache;
      load_cache(cache, cache_path);
      fs::create_directories(dir);

      if (run->parsed()) {
        const ExperimentResult result = run_experiment(spec, cache, c.threads);
        write_experiment(dir, spec, result, cache);
        std::ifstream agg(dir / "aggregate.csv");
        std::cout << agg.rdbuf();
      } else if (ablate->parsed()) {
        const auto rows = run_fixed_env_ablation(spec, cache, c.threads);
        write_ablation(dir, spec, rows);
        std::ifstream agg(dir / "ablation.csv");
        std::cout << agg.rdbuf();
      } else {
        for (G24Id v : spec.variants) {
          const DcopProblem problem = make_variant(v);
          for (const EnvVector& env : make_schedule(v, spec.num_changes).envs) cache.get(problem, env);
        }
        std::cout << cache.size() << " calibrations\n";
      }
      if (cache_path.has_parent_path()) fs::create_directories(cache_path.parent_path());
      cache.save(cache_path);
    } else if (report->parsed()) {
      std::vector<RunSummary> all;
      for (const auto& p : report_inputs) {
        auto rows = read_runs_csv(p);
        all.insert(all.end(), rows.begin(), rows.end());
      }
      std::cout << comparison_table(all, baseline);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
