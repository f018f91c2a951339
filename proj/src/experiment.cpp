#include "ccdo/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "ccdo/metrics.hpp"
#include "ccdo/rng.hpp"
#include "ccdo/wilcoxon.hpp"

namespace ccdo {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double v, int digits = 10) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument(where + ": expected an object");
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) throw std::invalid_argument(where + ": unknown key '" + k + "'");
  }
}

template <class T>
void read_opt(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

// Runs fn(i) for i in [0, n) on up to `threads` workers.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

void write_atomically(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, path);
}

SolutionSet random_set(const Box& box, int size, Rng& rng) {
  SolutionSet s;
  for (int i = 0; i < size; ++i) s.push_back(random_point<SolutionTag>(box, rng));
  return s;
}

std::string cell_name(G24Id v, std::int64_t freq, Algorithm a) {
  return std::string(name_of(v)) + "_f" + std::to_string(freq) + "_" + std::string(name_of(a));
}

std::string group_of(G24Id v) {
  return traits(v).solution_size ? "limited" : "many";
}

}  // namespace

Algorithm parse_algorithm(std::string_view name) {
  if (name == "CCDO") return Algorithm::kCcdo;
  if (name == "CCDO-S") return Algorithm::kCcdoS;
  if (name == "CCDO-L") return Algorithm::kCcdoL;
  if (name == "FIXED-ENV-SET") return Algorithm::kFixedEnvSet;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

std::string_view name_of(Algorithm a) {
  switch (a) {
    case Algorithm::kCcdo: return "CCDO";
    case Algorithm::kCcdoS: return "CCDO-S";
    case Algorithm::kCcdoL: return "CCDO-L";
    case Algorithm::kFixedEnvSet: return "FIXED-ENV-SET";
  }
  return "?";
}

ExperimentSpec parse_spec(const json& j) {
  check_keys(j, {"name", "variants", "frequencies", "num_changes", "repetitions", "algorithm",
                 "seed", "coevo", "ls", "online", "ablation_samples"},
             "spec");
  ExperimentSpec s;
  read_opt(j, "name", s.name);
  if (!j.contains("variants") || !j.at("variants").is_array() || j.at("variants").empty()) {
    throw std::invalid_argument("spec: 'variants' must be a non-empty list");
  }
  for (const auto& v : j.at("variants")) s.variants.push_back(parse_g24(v.get<std::string>()));
  if (j.contains("frequencies")) {
    for (const auto& f : j.at("frequencies")) {
      const auto freq = f.get<std::int64_t>();
      if (freq <= 0) throw std::invalid_argument("spec: frequencies must be positive");
      s.frequencies.push_back(freq);
    }
  }
  read_opt(j, "num_changes", s.num_changes);
  read_opt(j, "repetitions", s.repetitions);
  read_opt(j, "seed", s.seed);
  read_opt(j, "ablation_samples", s.ablation_samples);
  if (j.contains("algorithm")) s.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
  if (s.num_changes < 1) throw std::invalid_argument("spec: num_changes must be >= 1");
  if (s.repetitions < 1) throw std::invalid_argument("spec: repetitions must be >= 1");
  if (s.ablation_samples < 1) throw std::invalid_argument("spec: ablation_samples must be >= 1");

  if (j.contains("coevo")) {
    const json& c = j.at("coevo");
    check_keys(c, {"generations", "sp_size", "ep_size", "i_size", "sp_mutation_scale",
                   "sp_mutation_rate", "sp_crossover_rate", "ep_mutation_scale",
                   "ep_mutation_rate", "ep_crossover_rate"},
               "spec.coevo");
    read_opt(c, "generations", s.coevo.generations);
    read_opt(c, "sp_size", s.coevo.sp_size);
    read_opt(c, "ep_size", s.coevo.ep_size);
    read_opt(c, "i_size", s.coevo.i_size);
    read_opt(c, "sp_mutation_scale", s.coevo.sp_mutation.scale);
    read_opt(c, "sp_mutation_rate", s.coevo.sp_mutation.rate);
    read_opt(c, "sp_crossover_rate", s.coevo.sp_crossover_rate);
    read_opt(c, "ep_mutation_scale", s.coevo.ep_mutation.scale);
    read_opt(c, "ep_mutation_rate", s.coevo.ep_mutation.rate);
    read_opt(c, "ep_crossover_rate", s.coevo.ep_crossover_rate);
    if (s.coevo.sp_size < 2 || s.coevo.ep_size < 1 || s.coevo.i_size < 1 ||
        s.coevo.generations < 0) {
      throw std::invalid_argument("spec.coevo: invalid population sizes");
    }
  }
  if (j.contains("ls")) {
    const json& l = j.at("ls");
    check_keys(l, {"max_fes", "strategy", "mutation_scale", "penalty", "fd_step", "min_step",
                   "constraint_tolerance"},
               "spec.ls");
    read_opt(l, "max_fes", s.online.ls.max_fes);
    read_opt(l, "mutation_scale", s.online.ls.mutation_scale);
    read_opt(l, "penalty", s.online.ls.penalty);
    read_opt(l, "fd_step", s.online.ls.fd_step);
    read_opt(l, "min_step", s.online.ls.min_step);
    read_opt(l, "constraint_tolerance", s.online.ls.constraint_tolerance);
    if (l.contains("strategy")) s.online.ls.strategy = parse_strategy(l.at("strategy").get<std::string>());
    if (s.online.ls.max_fes < 1) throw std::invalid_argument("spec.ls: max_fes must be >= 1");
  }
  if (j.contains("online")) {
    const json& o = j.at("online");
    check_keys(o, {"detect_k", "dedup_radius", "detection_tolerance"}, "spec.online");
    read_opt(o, "detect_k", s.online.detect_k);
    read_opt(o, "dedup_radius", s.online.dedup_radius);
    read_opt(o, "detection_tolerance", s.online.detection_tolerance);
    if (s.online.detect_k < 0) throw std::invalid_argument("spec.online: detect_k must be >= 0");
  }
  return s;
}

ExperimentSpec load_spec(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open spec " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
  return parse_spec(j);
}

json to_json(const ExperimentSpec& s) {
  json j;
  j["name"] = s.name;
  j["variants"] = json::array();
  for (G24Id v : s.variants) j["variants"].push_back(std::string(name_of(v)));
  j["frequencies"] = s.frequencies;
  j["num_changes"] = s.num_changes;
  j["repetitions"] = s.repetitions;
  j["algorithm"] = std::string(name_of(s.algorithm));
  j["seed"] = s.seed;
  j["ablation_samples"] = s.ablation_samples;
  j["coevo"] = {{"generations", s.coevo.generations},
                {"sp_size", s.coevo.sp_size},
                {"ep_size", s.coevo.ep_size},
                {"i_size", s.coevo.i_size},
                {"sp_mutation_scale", s.coevo.sp_mutation.scale},
                {"sp_mutation_rate", s.coevo.sp_mutation.rate},
                {"sp_crossover_rate", s.coevo.sp_crossover_rate},
                {"ep_mutation_scale", s.coevo.ep_mutation.scale},
                {"ep_mutation_rate", s.coevo.ep_mutation.rate},
                {"ep_crossover_rate", s.coevo.ep_crossover_rate}};
  j["ls"] = {{"max_fes", s.online.ls.max_fes},
             {"strategy", std::string(name_of(s.online.ls.strategy))},
             {"mutation_scale", s.online.ls.mutation_scale},
             {"penalty", s.online.ls.penalty},
             {"fd_step", s.online.ls.fd_step},
             {"min_step", s.online.ls.min_step},
             {"constraint_tolerance", s.online.ls.constraint_tolerance}};
  j["online"] = {{"detect_k", s.online.detect_k},
                 {"dedup_radius", s.online.dedup_radius},
                 {"detection_tolerance", s.online.detection_tolerance}};
  return j;
}

std::uint64_t offline_seed(std::uint64_t base, G24Id variant, int repetition) {
  Rng r = make_stream(base, {10, static_cast<std::uint64_t>(variant),
                             static_cast<std::uint64_t>(repetition)});
  return r();
}

std::uint64_t online_seed(std::uint64_t base, G24Id variant, std::int64_t frequency,
                          int repetition) {
  Rng r = make_stream(base, {11, static_cast<std::uint64_t>(variant),
                             static_cast<std::uint64_t>(frequency),
                             static_cast<std::uint64_t>(repetition)});
  return r();
}

ExperimentResult run_experiment(const ExperimentSpec& spec, CalibrationCache& cache,
                                int threads) {
  if (spec.frequencies.empty()) throw std::invalid_argument("run_experiment: no frequencies");
  const std::size_t nv = spec.variants.size();
  const std::size_t nf = spec.frequencies.size();
  const std::size_t nr = static_cast<std::size_t>(spec.repetitions);

  std::vector<DcopProblem> problems;
  std::vector<ChangeSchedule> schedules;
  for (G24Id v : spec.variants) {
    problems.push_back(make_variant(v));
    schedules.push_back(make_schedule(v, spec.num_changes));
  }

  // Offline sets, one per (variant, repetition).
  ExperimentResult result;
  result.offline.resize(nv * nr);
  parallel_for(nv * nr, threads, [&](std::size_t k) {
    const std::size_t vi = k / nr;
    const int rep = static_cast<int>(k % nr);
    OfflineArtifact& art = result.offline[k];
    art.variant = spec.variants[vi];
    art.repetition = rep;
    art.seed = offline_seed(spec.seed, art.variant, rep);
    if (spec.algorithm == Algorithm::kCcdoS) {
      Rng rng = make_stream(art.seed, {6});
      art.set = random_set(problems[vi].x_bounds(), spec.coevo.sp_size, rng);
      return;
    }
    CoevoConfig cfg = spec.coevo;
    cfg.evolve_environments = spec.algorithm != Algorithm::kFixedEnvSet;
    OfflineResult off = run_offline_search(problems[vi], cfg, art.seed);
    art.set = std::move(off.set);
    art.fes = off.fes;
  });

  OnlineConfig online = spec.online;
  online.random_restarts = spec.algorithm == Algorithm::kCcdoS;
  if (spec.algorithm == Algorithm::kCcdoL) online.ls.strategy = LocalSearchStrategy::kMutationOnly;

  result.runs.resize(nv * nf * nr);
  parallel_for(nv * nf * nr, threads, [&](std::size_t k) {
    const std::size_t vi = k / (nf * nr);
    const std::size_t fi = (k / nr) % nf;
    const int rep = static_cast<int>(k % nr);
    const OfflineArtifact& art = result.offline[vi * nr + static_cast<std::size_t>(rep)];
    RunResult& run = result.runs[k];
    run.variant = spec.variants[vi];
    run.frequency = spec.frequencies[fi];
    run.algorithm = spec.algorithm;
    run.repetition = rep;
    run.seed = online_seed(spec.seed, run.variant, run.frequency, rep);
    run.offline_fes = art.fes;
    run.record = run_online(problems[vi], schedules[vi], run.frequency, art.set, online, run.seed,
                            cache);
    run.e_mo = e_mo(run.record.per_fe_error);
    run.e_mo_gen = e_mo(run.record.per_gen_error);
  });
  return result;
}

std::vector<AblationRow> run_fixed_env_ablation(const ExperimentSpec& spec,
                                                CalibrationCache& cache, int threads) {
  const std::size_t nv = spec.variants.size();
  const std::size_t nr = static_cast<std::size_t>(spec.repetitions);
  std::vector<DcopProblem> problems;
  for (G24Id v : spec.variants) problems.push_back(make_variant(v));

  std::vector<AblationRow> rows(nv * nr);
  parallel_for(nv * nr, threads, [&](std::size_t k) {
    const std::size_t vi = k / nr;
    AblationRow& row = rows[k];
    row.variant = spec.variants[vi];
    row.repetition = static_cast<int>(k % nr);
    row.seed = offline_seed(spec.seed, row.variant, row.repetition);
    const DcopProblem& problem = problems[vi];

    Rng sample_rng = make_stream(row.seed, {5});
    std::vector<EnvVector> sample;
    for (int i = 0; i < spec.ablation_samples; ++i) {
      sample.push_back(random_point<EnvTag>(problem.env_ranges(), sample_rng));
    }
    CoevoConfig cfg = spec.coevo;
    cfg.evolve_environments = true;
    row.coevolutionary = set_quality(run_offline_search(problem, cfg, row.seed).set, sample,
                                     problem, cache);
    cfg.evolve_environments = false;
    row.fixed = set_quality(run_offline_search(problem, cfg, row.seed).set, sample, problem,
                            cache);
  });
  return rows;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

Curve emit_curves(const std::vector<const RunRecord*>& records) {
  Curve c;
  if (records.empty()) return c;
  const std::size_t len = records.front()->per_fe_error.size();
  for (const RunRecord* r : records) {
    if (r->per_fe_error.size() != len) throw std::invalid_argument("emit_curves: trace lengths differ");
  }
  c.mean.resize(len);
  c.std_dev.resize(len);
  std::vector<double> column(records.size());
  for (std::size_t j = 0; j < len; ++j) {
    for (std::size_t i = 0; i < records.size(); ++i) column[i] = records[i]->per_fe_error[j];
    c.mean[j] = mean_of(column);
    c.std_dev[j] = std_of(column);
  }
  return c;
}

void write_run_record_csv(const fs::path& path, const RunRecord& record) {
  std::ostringstream out;
  out << "fe_index,env_index,best_feasible_error,change_detected_flag\n";
  for (std::size_t j = 0; j < record.per_fe_error.size(); ++j) {
    out << j << ',' << record.env_index[j] << ',' << fmt(record.per_fe_error[j], 12) << ','
        << (record.change_detected[j] ? 1 : 0) << '\n';
  }
  write_atomically(path, out.str());
}

void write_runs_csv(const fs::path& path, const std::vector<RunResult>& runs) {
  std::ostringstream out;
  out << "variant,frequency,algorithm,repetition,seed,e_mo,e_mo_gen,offline_fes,online_fes,"
         "detections,calibration_defects\n";
  for (const RunResult& r : runs) {
    out << name_of(r.variant) << ',' << r.frequency << ',' << name_of(r.algorithm) << ','
        << r.repetition << ',' << r.seed << ',' << fmt(r.e_mo, 12) << ',' << fmt(r.e_mo_gen, 12)
        << ',' << r.offline_fes << ',' << r.record.fes.total() << ','
        << r.record.detections.size() << ',' << r.record.calibration_defects << '\n';
  }
  write_atomically(path, out.str());
}

void write_aggregate_csv(const fs::path& path, const std::vector<RunResult>& runs) {
  struct Group {
    std::vector<double> e_mo, e_mo_gen;
  };
  std::vector<std::tuple<G24Id, std::int64_t, Algorithm>> order;
  std::map<std::tuple<G24Id, std::int64_t, Algorithm>, Group> groups;
  for (const RunResult& r : runs) {
    auto key = std::make_tuple(r.variant, r.frequency, r.algorithm);
    if (!groups.count(key)) order.push_back(key);
    groups[key].e_mo.push_back(r.e_mo);
    groups[key].e_mo_gen.push_back(r.e_mo_gen);
  }
  std::ostringstream out;
  out << "variant,label,frequency,algorithm,runs,e_mo_mean,e_mo_std,e_mo_gen_mean,e_mo_gen_std,"
         "table_entry\n";
  for (const auto& key : order) {
    const auto& [v, f, a] = key;
    const Group& g = groups.at(key);
    char entry[64];
    std::snprintf(entry, sizeof(entry), "%.3f±%.3f", mean_of(g.e_mo), std_of(g.e_mo));
    out << name_of(v) << ",\"" << traits(v).label << "\"," << f << ',' << name_of(a) << ','
        << g.e_mo.size() << ',' << fmt(mean_of(g.e_mo)) << ',' << fmt(std_of(g.e_mo)) << ','
        << fmt(mean_of(g.e_mo_gen)) << ',' << fmt(std_of(g.e_mo_gen)) << ',' << entry << '\n';
  }
  write_atomically(path, out.str());
}

void write_curve_csv(const fs::path& path, const Curve& curve) {
  std::ostringstream out;
  out << "fe_index,mean_error,std_error\n";
  for (std::size_t j = 0; j < curve.mean.size(); ++j) {
    out << j << ',' << fmt(curve.mean[j], 12) << ',' << fmt(curve.std_dev[j], 12) << '\n';
  }
  write_atomically(path, out.str());
}

void write_solution_set(const fs::path& path, const SolutionSet& set) {
  std::ostringstream out;
  for (const auto& x : set) {
    for (std::size_t i = 0; i < x.size(); ++i) out << (i ? " " : "") << fmt(x[i], 17);
    out << '\n';
  }
  write_atomically(path, out.str());
}

void write_ablation_csv(const fs::path& path, const std::vector<AblationRow>& rows) {
  std::ostringstream out;
  out << "variant,repetition,seed,fixed,coevolutionary\n";
  for (const AblationRow& r : rows) {
    out << name_of(r.variant) << ',' << r.repetition << ',' << r.seed << ',' << fmt(r.fixed, 12)
        << ',' << fmt(r.coevolutionary, 12) << '\n';
  }
  write_atomically(path, out.str());
}

void write_ablation_aggregate_csv(const fs::path& path, const std::vector<AblationRow>& rows) {
  std::vector<G24Id> order;
  std::map<G24Id, std::pair<std::vector<double>, std::vector<double>>> groups;
  for (const AblationRow& r : rows) {
    if (!groups.count(r.variant)) order.push_back(r.variant);
    groups[r.variant].first.push_back(r.fixed);
    groups[r.variant].second.push_back(r.coevolutionary);
  }
  std::ostringstream out;
  out << "variant,solution_size_group,fixed,fixed_std,coevolutionary,coevolutionary_std,p_value\n";
  for (G24Id v : order) {
    const auto& [fixed, coevo] = groups.at(v);
    const RankSumResult w = wilcoxon_rank_sum(fixed, coevo);
    out << name_of(v) << ',' << group_of(v) << ',' << fmt(mean_of(fixed)) << ','
        << fmt(std_of(fixed)) << ',' << fmt(mean_of(coevo)) << ',' << fmt(std_of(coevo)) << ','
        << fmt(w.p_value, 6) << '\n';
  }
  write_atomically(path, out.str());
}

void write_experiment(const fs::path& dir, const ExperimentSpec& spec,
                      const ExperimentResult& result, const CalibrationCache& cache) {
  fs::create_directories(dir);
  write_runs_csv(dir / "runs.csv", result.runs);
  write_aggregate_csv(dir / "aggregate.csv", result.runs);

  std::map<std::pair<G24Id, std::int64_t>, std::vector<const RunRecord*>> cells;
  std::vector<std::pair<G24Id, std::int64_t>> order;
  for (const RunResult& r : result.runs) {
    const auto key = std::make_pair(r.variant, r.frequency);
    if (!cells.count(key)) order.push_back(key);
    cells[key].push_back(&r.record);
    write_run_record_csv(dir / "records" /
                             (cell_name(r.variant, r.frequency, r.algorithm) + "_r" +
                              std::to_string(r.repetition) + ".csv"),
                         r.record);
  }
  for (const auto& key : order) {
    write_curve_csv(dir / "curves" / (cell_name(key.first, key.second, spec.algorithm) + ".csv"),
                    emit_curves(cells.at(key)));
  }
  for (const OfflineArtifact& a : result.offline) {
    const std::string stem = std::string(name_of(a.variant)) + "_r" + std::to_string(a.repetition);
    write_solution_set(dir / "sets" / (stem + ".txt"), a.set);
    json meta = {{"variant", std::string(name_of(a.variant))},
                 {"repetition", a.repetition},
                 {"seed", a.seed},
                 {"offline_fes", a.fes},
                 {"algorithm", std::string(name_of(spec.algorithm))},
                 {"coevo", to_json(spec)["coevo"]}};
    write_atomically(dir / "sets" / (stem + ".json"), meta.dump(2) + "\n");
  }

  const CalibrationSettings& cs = cache.settings();
  json meta = {{"spec", to_json(spec)},
               {"predicted_offline_fes", predicted_offline_fes(spec.coevo)},
               {"calibration",
                {{"resolution", cs.resolution},
                 {"refine_starts", cs.refine_starts},
                 {"zoom_half_width", cs.zoom_half_width},
                 {"zoom_points", cs.zoom_points},
                 {"min_cell", cs.min_cell}}}};
  write_atomically(dir / "metadata.json", meta.dump(2) + "\n");
}

void write_ablation(const fs::path& dir, const ExperimentSpec& spec,
                    const std::vector<AblationRow>& rows) {
  fs::create_directories(dir);
  write_ablation_csv(dir / "ablation_runs.csv", rows);
  write_ablation_aggregate_csv(dir / "ablation.csv", rows);
  json meta = {{"spec", to_json(spec)}};
  write_atomically(dir / "ablation_metadata.json", meta.dump(2) + "\n");
}

std::vector<RunSummary> read_runs_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty file");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) header.push_back(f);
  }
  auto col = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw std::runtime_error(path.string() + ": missing column '" + name + "'");
  };
  const std::size_t cv = col("variant"), cf = col("frequency"), ca = col("algorithm"),
                    ce = col("e_mo");
  std::vector<RunSummary> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string x; std::getline(ss, x, ',');) f.push_back(x);
    if (f.size() != header.size()) throw std::runtime_error(path.string() + ": ragged row");
    out.push_back({f[cv], std::stoll(f[cf]), f[ca], std::stod(f[ce])});
  }
  return out;
}

std::string comparison_table(const std::vector<RunSummary>& runs, const std::string& baseline) {
  using Key = std::pair<std::string, std::int64_t>;
  std::vector<Key> order;
  std::map<Key, std::map<std::string, std::vector<double>>> cells;
  std::vector<std::string> algorithms;
  for (const RunSummary& r : runs) {
    const Key key{r.variant, r.frequency};
    if (!cells.count(key)) order.push_back(key);
    cells[key][r.algorithm].push_back(r.e_mo);
    if (std::find(algorithms.begin(), algorithms.end(), r.algorithm) == algorithms.end()) {
      algorithms.push_back(r.algorithm);
    }
  }
  std::ostringstream out;
  out << "variant,frequency,algorithm,mean,std,baseline,baseline_mean,baseline_std,p_value,verdict\n";
  for (const Key& key : order) {
    const auto& per_alg = cells.at(key);
    const auto base = per_alg.find(baseline);
    for (const std::string& alg : algorithms) {
      const auto it = per_alg.find(alg);
      if (it == per_alg.end() || alg == baseline) continue;
      out << key.first << ',' << key.second << ',' << alg << ',' << fmt(mean_of(it->second), 6)
          << ',' << fmt(std_of(it->second), 6) << ',' << baseline << ',';
      if (base == per_alg.end()) {
        out << ",,,\n";
        continue;
      }
      const RankSumResult w = wilcoxon_rank_sum(it->second, base->second);
      const char* verdict = !w.significant                             ? "="
                            : mean_of(it->second) < mean_of(base->second) ? "+"
                                                                         : "-";
      out << fmt(mean_of(base->second), 6) << ',' << fmt(std_of(base->second), 6) << ','
          << fmt(w.p_value, 6) << ',' << verdict << '\n';
    }
  }
  return out.str();
}

}  // namespace ccdo
