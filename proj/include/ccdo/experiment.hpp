#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ccdo/calibration.hpp"
#include "ccdo/coevolution.hpp"
#include "ccdo/g24.hpp"
#include "ccdo/online.hpp"

namespace ccdo {

enum class Algorithm {
  kCcdo,         // offline coevolution, then online
  kCcdoS,        // uniform-random set instead of the offline set
  kCcdoL,        // CCDO with the mutation-only local search
  kFixedEnvSet,  // offline search against a frozen random EP, then online
};

Algorithm parse_algorithm(std::string_view name);
std::string_view name_of(Algorithm a);

struct ExperimentSpec {
  std::string name = "experiment";
  std::vector<G24Id> variants;
  std::vector<std::int64_t> frequencies;
  int num_changes = 12;
  int repetitions = 10;
  Algorithm algorithm = Algorithm::kCcdo;
  std::uint64_t seed = 1;
  CoevoConfig coevo;
  OnlineConfig online;
  int ablation_samples = 50;  // random environments per seed for set_quality
};

/// Parses and validates a spec; unknown keys, unknown variants and
/// non-positive frequencies are configuration errors (std::invalid_argument).
ExperimentSpec parse_spec(const nlohmann::json& j);
ExperimentSpec load_spec(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentSpec& spec);

/// Seed of the offline search for (variant, repetition); shared by every
/// frequency and algorithm so comparisons are paired.
std::uint64_t offline_seed(std::uint64_t base, G24Id variant, int repetition);
/// Seed of one online run.
std::uint64_t online_seed(std::uint64_t base, G24Id variant, std::int64_t frequency,
                          int repetition);

struct RunResult {
  G24Id variant;
  std::int64_t frequency = 0;
  Algorithm algorithm = Algorithm::kCcdo;
  int repetition = 0;
  std::uint64_t seed = 0;
  double e_mo = 0.0;       // per-FE
  double e_mo_gen = 0.0;   // per-generation
  std::int64_t offline_fes = 0;
  RunRecord record;
};

struct OfflineArtifact {
  G24Id variant;
  int repetition = 0;
  std::uint64_t seed = 0;
  SolutionSet set;
  std::int64_t fes = 0;
};

struct ExperimentResult {
  std::vector<RunResult> runs;          // ordered by variant, frequency, repetition
  std::vector<OfflineArtifact> offline;  // ordered by variant, repetition
};

/// Runs every (variant, frequency, repetition) cell on up to `threads`
/// worker threads. Results do not depend on the thread count.
ExperimentResult run_experiment(const ExperimentSpec& spec, CalibrationCache& cache,
                                int threads = 1);

struct AblationRow {
  G24Id variant;
  int repetition = 0;
  std::uint64_t seed = 0;
  double fixed = 0.0;           // set_quality, frozen EP
  double coevolutionary = 0.0;  // set_quality, evolving EP
};

/// Per seed: offline search with evolving EP and with the EP frozen at its
/// random start (same seed), both scored by set_quality on the same sample of
/// random environments.
std::vector<AblationRow> run_fixed_env_ablation(const ExperimentSpec& spec,
                                                CalibrationCache& cache, int threads = 1);

struct Curve {
  std::vector<double> mean;
  std::vector<double> std_dev;
};

/// Pointwise mean and sample standard deviation of equally long per-FE traces.
Curve emit_curves(const std::vector<const RunRecord*>& records);

// Output. Files are written to a temporary name and renamed into place.
void write_run_record_csv(const std::filesystem::path& path, const RunRecord& record);
void write_runs_csv(const std::filesystem::path& path, const std::vector<RunResult>& runs);
void write_aggregate_csv(const std::filesystem::path& path, const std::vector<RunResult>& runs);
void write_curve_csv(const std::filesystem::path& path, const Curve& curve);
void write_solution_set(const std::filesystem::path& path, const SolutionSet& set);
void write_ablation_csv(const std::filesystem::path& path, const std::vector<AblationRow>& rows);
void write_ablation_aggregate_csv(const std::filesystem::path& path,
                                  const std::vector<AblationRow>& rows);

/// Writes runs.csv, aggregate.csv, curves/, records/, sets/ and
/// metadata.json under `dir`.
void write_experiment(const std::filesystem::path& dir, const ExperimentSpec& spec,
                      const ExperimentResult& result, const CalibrationCache& cache);
void write_ablation(const std::filesystem::path& dir, const ExperimentSpec& spec,
                    const std::vector<AblationRow>& rows);

/// One row of runs.csv as read back by `report`.
struct RunSummary {
  std::string variant;
  std::int64_t frequency = 0;
  std::string algorithm;
  double e_mo = 0.0;
};

std::vector<RunSummary> read_runs_csv(const std::filesystem::path& path);

/// Comparison of every algorithm against `baseline` per (variant, frequency)
/// with the rank-sum test: columns variant, frequency, algorithm, mean, std,
/// baseline, baseline_mean, baseline_std, p_value, verdict (+ better,
/// - worse, = no significant difference).
std::string comparison_table(const std::vector<RunSummary>& runs, const std::string& baseline);

double mean_of(const std::vector<double>& v);
/// Sample standard deviation; 0 for fewer than two values.
double std_of(const std::vector<double>& v);

}  // namespace ccdo
