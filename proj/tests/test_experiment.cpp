#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ccdo/experiment.hpp"

using namespace ccdo;
namespace fs = std::filesystem;

namespace {

ExperimentSpec small_spec() {
  return parse_spec(nlohmann::json::parse(R"({
    "name": "small",
    "variants": ["g24_3"],
    "frequencies": [50],
    "num_changes": 3,
    "repetitions": 2,
    "seed": 5,
    "coevo": {"generations": 3},
    "ablation_samples": 4
  })"));
}

CalibrationCache& shared_cache() {
  static CalibrationCache cache;
  return cache;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ccdo_test_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("spec parsing") {
  const ExperimentSpec s = small_spec();
  CHECK(s.variants == std::vector<G24Id>{G24Id::k3});
  CHECK(s.coevo.generations == 3);
  CHECK(s.coevo.sp_size == 10);
  CHECK(s.online.detect_k == 4);
  CHECK(parse_spec(to_json(s)).coevo.generations == 3);

  using nlohmann::json;
  CHECK_THROWS_AS(parse_spec(json::parse(R"({"variants": ["g24_1"], "bogus": 1})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_spec(json::parse(R"({"variants": ["g24_9"]})")), std::invalid_argument);
  CHECK_THROWS_AS(parse_spec(json::parse(R"({"variants": ["g24_1"], "frequencies": [0]})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_spec(json::parse(R"({"variants": []})")), std::invalid_argument);
  CHECK(parse_algorithm("CCDO-S") == Algorithm::kCcdoS);
  CHECK(name_of(Algorithm::kFixedEnvSet) == "FIXED-ENV-SET");
}

TEST_CASE("one cell per repetition") {
  const ExperimentResult r = run_experiment(small_spec(), shared_cache());
  REQUIRE(r.runs.size() == 2);
  REQUIRE(r.offline.size() == 2);
  for (const auto& run : r.runs) {
    CHECK(run.record.per_fe_error.size() == 150);
    CHECK(run.offline_fes == predicted_offline_fes(small_spec().coevo));
    CHECK(std::isfinite(run.e_mo));
  }
  CHECK(r.runs[0].seed != r.runs[1].seed);
}

TEST_CASE("random-start variant has no offline phase") {
  ExperimentSpec s = small_spec();
  s.algorithm = Algorithm::kCcdoS;
  for (const auto& run : run_experiment(s, shared_cache()).runs) CHECK(run.offline_fes == 0);
}

TEST_CASE("output is byte-identical across runs and thread counts") {
  const ExperimentSpec s = small_spec();
  const fs::path a = scratch("a"), b = scratch("b");
  write_experiment(a, s, run_experiment(s, shared_cache(), 1), shared_cache());
  write_experiment(b, s, run_experiment(s, shared_cache(), 2), shared_cache());
  CHECK(slurp(a / "aggregate.csv") == slurp(b / "aggregate.csv"));
  CHECK(slurp(a / "runs.csv") == slurp(b / "runs.csv"));
  CHECK(fs::exists(a / "metadata.json"));

  const auto rows = read_runs_csv(a / "runs.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].variant == "g24_3");
  CHECK(rows[0].algorithm == "CCDO");
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("fixed-environment ablation smoke run") {
  ExperimentSpec s = small_spec();
  s.repetitions = 1;
  const auto rows = run_fixed_env_ablation(s, shared_cache());
  REQUIRE(rows.size() == 1);
  CHECK(std::isfinite(rows[0].fixed));
  CHECK(std::isfinite(rows[0].coevolutionary));

  const fs::path dir = scratch("ablation");
  fs::create_directories(dir);
  write_ablation_aggregate_csv(dir / "agg.csv", rows);
  const std::string text = slurp(dir / "agg.csv");
  CHECK(text.rfind("variant,solution_size_group,fixed,fixed_std,coevolutionary,"
                   "coevolutionary_std,p_value\n", 0) == 0);
  CHECK(text.find("g24_3,many,") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("curves") {
  RunRecord a, b;
  a.per_fe_error = {1.0, 2.0, 3.0};
  b.per_fe_error = {3.0, 2.0, 1.0};
  SUBCASE("single record") {
    const Curve c = emit_curves({&a});
    CHECK(c.mean == a.per_fe_error);
    CHECK(c.std_dev == std::vector<double>{0, 0, 0});
  }
  SUBCASE("identical records") {
    const Curve c = emit_curves({&a, &a});
    CHECK(c.std_dev == std::vector<double>{0, 0, 0});
  }
  SUBCASE("mean between the inputs") {
    const Curve c = emit_curves({&a, &b});
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(c.mean[j] >= std::min(a.per_fe_error[j], b.per_fe_error[j]));
      CHECK(c.mean[j] <= std::max(a.per_fe_error[j], b.per_fe_error[j]));
    }
  }
  SUBCASE("length mismatch") {
    RunRecord c;
    c.per_fe_error = {1.0};
    CHECK_THROWS(emit_curves({&a, &c}));
  }
}

TEST_CASE("comparison table") {
  std::vector<RunSummary> runs;
  for (int i = 0; i < 6; ++i) {
    runs.push_back({"g24_1", 100, "CCDO", 0.1 + 0.01 * i});
    runs.push_back({"g24_1", 100, "CCDO-S", 1.0 + 0.01 * i});
  }
  const std::string t = comparison_table(runs, "CCDO");
  CHECK(t.find("g24_1,100,CCDO-S,") != std::string::npos);
  CHECK(t.substr(t.size() - 3) == ",-\n");
}

TEST_CASE("summary statistics") {
  CHECK(mean_of({1.0, 2.0, 3.0}) == 2.0);
  CHECK(std_of({1.0, 2.0, 3.0}) == 1.0);
  CHECK(std_of({4.0}) == 0.0);
}
