#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ccdo/calibration.hpp"
#include "ccdo/coevolution.hpp"
#include "ccdo/g24.hpp"
#include "ccdo/local_search.hpp"
#include "ccdo/problem.hpp"

namespace ccdo {

struct OnlineConfig {
  int detect_k = 4;                    // sentinels per perceived period
  double dedup_radius = 1e-2;          // population dedup and archive update
  double detection_tolerance = 0.0;    // 0: exact comparison
  LocalSearchConfig ls;
  /// Re-initialise from a fresh uniform-random set of the archive's initial
  /// size instead of the archive (the random-start ablation).
  bool random_restarts = false;
};

enum class FeKind { kInitial, kDetection, kSentinel, kLocalSearch, kMutation };

struct FeBreakdown {
  std::int64_t initial = 0;
  std::int64_t detection = 0;
  std::int64_t sentinel = 0;
  std::int64_t local_search = 0;
  std::int64_t mutation = 0;

  std::int64_t total() const { return initial + detection + sentinel + local_search + mutation; }
};

struct RunRecord {
  std::vector<double> per_fe_error;
  std::vector<double> per_gen_error;   // best-so-far error at each generation end
  std::vector<std::size_t> env_index;  // per FE
  std::vector<bool> change_detected;   // per FE: this evaluation revealed a change
  std::vector<std::int64_t> detections;  // FE indices of detecting evaluations
  FeBreakdown fes;
  std::int64_t calibration_defects = 0;  // negative raw errors clamped to 0
  std::size_t final_archive_size = 0;
  std::int64_t generations = 0;
};

/// Evaluates against a change schedule: the environment is selected by the
/// FE clock, and every evaluation appends the best-feasible error since the
/// last true environment boundary to the record.
class ScheduledContext : public EvaluationContext {
 public:
  ScheduledContext(const DcopProblem& problem, const ChangeSchedule& schedule,
                   std::int64_t change_frequency, std::vector<Calibration> calibrations,
                   RunRecord& record);

  Evaluation evaluate(const SolutionVector& x) override;
  std::int64_t remaining() const override { return clock_.remaining(); }

  void set_kind(FeKind kind) { kind_ = kind; }
  /// Marks the most recent evaluation as the one that revealed a change.
  void mark_detection();
  double current_error() const { return last_error_; }
  const FeBudgetClock& clock() const { return clock_; }

 private:
  const DcopProblem& problem_;
  const ChangeSchedule& schedule_;
  std::vector<Calibration> calibrations_;
  FeBudgetClock clock_;
  RunRecord& record_;
  FeKind kind_ = FeKind::kInitial;
  std::size_t period_ = 0;
  std::optional<Evaluation> period_best_;
  double last_error_ = 0.0;
};

/// Re-evaluates `x` (1 FE) and reports whether the result departs from
/// `stored` in the objective or any constraint value by more than `tolerance`.
/// `fresh` receives the new evaluation.
bool detect_change(const SolutionVector& x, const Evaluation& stored, EvaluationContext& ctx,
                   Evaluation& fresh, double tolerance = 0.0);

/// Keeps each point unless it lies within `radius` of an earlier kept point.
std::vector<SolutionVector> dedup(const std::vector<SolutionVector>& points, double radius);

/// Online phase: the population starts from the deduplicated archive; each
/// generation re-evaluates every individual to detect changes, refines it by
/// local search (unless its start lies near an already refined point) and a
/// mutation step, then checks the sentinels. A detected change appends the
/// best solution of the ended period to the archive and restarts from
/// archive plus local-search results. Runs until the schedule's FE budget is
/// spent.
RunRecord run_online(const DcopProblem& problem, const ChangeSchedule& schedule,
                     std::int64_t change_frequency, const SolutionSet& archive0,
                     const OnlineConfig& config, std::uint64_t seed, CalibrationCache& cache);

}  // namespace ccdo
