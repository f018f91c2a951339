#include "ccdo/online.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ccdo/metrics.hpp"
#include "ccdo/rng.hpp"

namespace ccdo {

ScheduledContext::ScheduledContext(const DcopProblem& problem, const ChangeSchedule& schedule,
                                   std::int64_t change_frequency,
                                   std::vector<Calibration> calibrations, RunRecord& record)
    : problem_(problem),
      schedule_(schedule),
      calibrations_(std::move(calibrations)),
      clock_(change_frequency, static_cast<std::int64_t>(schedule.num_changes())),
      record_(record) {
  if (calibrations_.size() != schedule.num_changes()) {
    throw std::invalid_argument("ScheduledContext: one calibration per schedule entry required");
  }
}

Evaluation ScheduledContext::evaluate(const SolutionVector& x) {
  if (clock_.exhausted()) throw std::logic_error("ScheduledContext: FE budget exhausted");
  const std::size_t env = clock_.environment_index();
  if (env != period_) {
    period_ = env;
    period_best_.reset();
  }
  Evaluation e = problem_.evaluate(x, schedule_.envs[env]);
  clock_.tick();
  if (e.feasible && (!period_best_ || e.objective < period_best_->objective)) period_best_ = e;

  double err = error_at(period_best_, calibrations_[env]);
  if (err < 0.0) {
    ++record_.calibration_defects;
    err = 0.0;
  }
  last_error_ = err;
  record_.per_fe_error.push_back(err);
  record_.env_index.push_back(env);
  record_.change_detected.push_back(false);
  switch (kind_) {
    case FeKind::kInitial: ++record_.fes.initial; break;
    case FeKind::kDetection: ++record_.fes.detection; break;
    case FeKind::kSentinel: ++record_.fes.sentinel; break;
    case FeKind::kLocalSearch: ++record_.fes.local_search; break;
    case FeKind::kMutation: ++record_.fes.mutation; break;
  }
  return e;
}

void ScheduledContext::mark_detection() {
  if (record_.change_detected.empty()) return;
  record_.change_detected.back() = true;
  record_.detections.push_back(static_cast<std::int64_t>(record_.change_detected.size()) - 1);
}

bool detect_change(const SolutionVector& x, const Evaluation& stored, EvaluationContext& ctx,
                   Evaluation& fresh, double tolerance) {
  fresh = ctx.evaluate(x);
  auto differs = [tolerance](double a, double b) {
    return tolerance == 0.0 ? a != b : std::abs(a - b) > tolerance;
  };
  if (differs(fresh.objective, stored.objective)) return true;
  if (fresh.constraint_values.size() != stored.constraint_values.size()) return true;
  for (std::size_t i = 0; i < fresh.constraint_values.size(); ++i) {
    if (differs(fresh.constraint_values[i], stored.constraint_values[i])) return true;
  }
  return false;
}

std::vector<SolutionVector> dedup(const std::vector<SolutionVector>& points, double radius) {
  std::vector<SolutionVector> kept;
  for (const auto& p : points) {
    bool near = false;
    for (const auto& k : kept) {
      if (distance(p, k) < radius) {
        near = true;
        break;
      }
    }
    if (!near) kept.push_back(p);
  }
  return kept;
}

namespace {

struct Tracked {
  SolutionVector x;
  std::optional<Evaluation> eval;
};

class OnlineOptimizer {
 public:
  OnlineOptimizer(const DcopProblem& problem, const SolutionSet& archive0,
                  const OnlineConfig& config, std::uint64_t seed, ScheduledContext& ctx,
                  RunRecord& record)
      : box_(problem.x_bounds()),
        config_(config),
        ctx_(ctx),
        record_(record),
        rng_(make_stream(seed, {4})),
        archive_(archive0),
        initial_size_(archive0.size()),
        mem_ls_(config.dedup_radius) {
    if (archive0.empty()) throw std::invalid_argument("run_online: empty archive");
    start_population(archive_);
  }

  void run() {
    while (ctx_.can_evaluate()) {
      ++record_.generations;
      if (run_generation()) end_generation();
      record_.per_gen_error.push_back(ctx_.current_error());
    }
    record_.final_archive_size = archive_.size();
  }

 private:
  // False when the generation was cut short by a change or the budget.
  bool run_generation() {
    ctx_.set_kind(FeKind::kInitial);
    for (auto& ind : pop_) {
      if (ind.eval) continue;
      if (!ctx_.can_evaluate()) return false;
      ind.eval = ctx_.evaluate(ind.x);
      note(ind);
    }
    // Refine the most promising individuals first: with fast changes only a
    // few local searches fit into one period.
    std::stable_sort(pop_.begin(), pop_.end(), [](const Tracked& a, const Tracked& b) {
      return better(*a.eval, *b.eval);
    });

    for (auto& ind : pop_) {
      if (!ctx_.can_evaluate()) return false;
      ctx_.set_kind(FeKind::kDetection);
      Evaluation fresh;
      if (detect_change(ind.x, *ind.eval, ctx_, fresh, config_.detection_tolerance)) {
        on_change();
        return false;
      }

      if (!ctx_.can_evaluate()) return false;
      if (!mem_ls_.should_skip(ind.x)) {
        ctx_.set_kind(FeKind::kLocalSearch);
        const LocalSearchResult r =
            run_local_search({ind.x, *ind.eval}, box_, ctx_, config_.ls, rng_);
        mem_ls_.add(ind.x);
        ls_best_.push_back(r.best.x);
        ind = {r.best.x, r.best.eval};
        note(ind);
      }

      if (!ctx_.can_evaluate()) return false;
      ctx_.set_kind(FeKind::kMutation);
      Candidate c{ind.x, *ind.eval};
      mutation_step(c, box_, ctx_, config_.ls.mutation_scale, rng_);
      ind = {std::move(c.x), std::move(c.eval)};
      note(ind);
    }

    ctx_.set_kind(FeKind::kSentinel);
    for (auto& s : sentinels_) {
      if (!ctx_.can_evaluate()) return false;
      if (!s.eval) {
        s.eval = ctx_.evaluate(s.x);
        continue;
      }
      Evaluation fresh;
      if (detect_change(s.x, *s.eval, ctx_, fresh, config_.detection_tolerance)) {
        on_change();
        return false;
      }
    }
    return true;
  }

  // Individuals sitting on already refined ground make way for random ones.
  void end_generation() {
    for (auto& ind : pop_) {
      if (mem_ls_.should_skip(ind.x)) ind = {random_point<SolutionTag>(box_, rng_), std::nullopt};
    }
  }

  void on_change() {
    ctx_.mark_detection();
    if (period_best_ && !config_.random_restarts) {
      bool known = false;
      for (const auto& a : archive_) {
        if (distance(a, period_best_->x) < config_.dedup_radius) {
          known = true;
          break;
        }
      }
      if (!known) archive_.push_back(period_best_->x);
    }
    SolutionSet base = archive_;
    if (config_.random_restarts) {
      base.clear();
      for (std::size_t i = 0; i < initial_size_; ++i) {
        base.push_back(random_point<SolutionTag>(box_, rng_));
      }
    }
    base.insert(base.end(), ls_best_.begin(), ls_best_.end());
    start_population(base);
  }

  void start_population(const SolutionSet& points) {
    pop_.clear();
    for (auto& p : dedup(points, config_.dedup_radius)) pop_.push_back({std::move(p), std::nullopt});
    mem_ls_.clear();
    ls_best_.clear();
    period_best_.reset();
    sentinels_.clear();
    for (int i = 0; i < config_.detect_k; ++i) {
      sentinels_.push_back({random_point<SolutionTag>(box_, rng_), std::nullopt});
    }
  }

  void note(const Tracked& ind) {
    if (!period_best_ || better(*ind.eval, period_best_->eval)) period_best_ = {ind.x, *ind.eval};
  }

  const Box& box_;
  const OnlineConfig& config_;
  ScheduledContext& ctx_;
  RunRecord& record_;
  Rng rng_;
  SolutionSet archive_;
  std::size_t initial_size_;
  std::vector<Tracked> pop_;
  std::vector<Tracked> sentinels_;
  LsMemory mem_ls_;
  std::vector<SolutionVector> ls_best_;
  std::optional<Candidate> period_best_;
};

}  // namespace

RunRecord run_online(const DcopProblem& problem, const ChangeSchedule& schedule,
                     std::int64_t change_frequency, const SolutionSet& archive0,
                     const OnlineConfig& config, std::uint64_t seed, CalibrationCache& cache) {
  std::vector<Calibration> calibrations;
  calibrations.reserve(schedule.num_changes());
  for (const auto& env : schedule.envs) calibrations.push_back(cache.get(problem, env));

  RunRecord record;
  ScheduledContext ctx(problem, schedule, change_frequency, std::move(calibrations), record);
  OnlineOptimizer(problem, archive0, config, seed, ctx, record).run();
  return record;
}

}  // namespace ccdo
