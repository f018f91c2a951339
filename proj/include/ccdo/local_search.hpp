#pragma once

#include <string_view>
#include <vector>

#include "ccdo/problem.hpp"
#include "ccdo/rng.hpp"

namespace ccdo {

enum class LocalSearchStrategy {
  kSqpLike,       // "sqp_like": penalty-merit SQP with forward differences
  kMutationOnly,  // "mutation_only": elitist Gaussian hill-climber
};

LocalSearchStrategy parse_strategy(std::string_view name);
std::string_view name_of(LocalSearchStrategy s);

struct LocalSearchConfig {
  int max_fes = 20;
  double constraint_tolerance = 0.0;
  bool honor_bounds = true;
  double mutation_scale = 0.1;  // fraction of each coordinate's range
  double penalty = 1e6;         // merit = f + penalty * violation
  double fd_step = 1e-6;        // relative forward-difference step
  double min_step = 1e-10;
  LocalSearchStrategy strategy = LocalSearchStrategy::kSqpLike;
};

struct Candidate {
  SolutionVector x;
  Evaluation eval;
};

struct LocalSearchResult {
  Candidate best;
  int fes = 0;
};

/// Budgeted SQP-style descent from an already evaluated start point. Each
/// iteration estimates gradients of f and every g_i by forward differences,
/// solves the linearised QP inside the box and line-searches on the penalty
/// merit. Returns the best point evaluated, never worse than `start`.
LocalSearchResult local_descent(const Candidate& start, const Box& bounds, EvaluationContext& ctx,
                                const LocalSearchConfig& config);

/// One Gaussian perturbation of `current` (1 FE); replaces it only when
/// strictly better. Returns whether it was replaced.
bool mutation_step(Candidate& current, const Box& bounds, EvaluationContext& ctx, double scale,
                   Rng& rng);

/// Repeated mutation_step for up to max_fes evaluations.
LocalSearchResult mutation_hill_climb(const Candidate& start, const Box& bounds,
                                      EvaluationContext& ctx, const LocalSearchConfig& config,
                                      Rng& rng);

/// Dispatch on config.strategy.
LocalSearchResult run_local_search(const Candidate& start, const Box& bounds,
                                   EvaluationContext& ctx, const LocalSearchConfig& config,
                                   Rng& rng);

/// Start points that have already been refined in the current environment.
class LsMemory {
 public:
  explicit LsMemory(double radius = 1e-2) : radius_(radius) {}

  /// True iff some entry lies strictly closer than the radius.
  bool should_skip(const SolutionVector& x) const;
  double nearest_distance(const SolutionVector& x) const;
  void add(SolutionVector x) { entries_.push_back(std::move(x)); }
  void clear() { entries_.clear(); }
  const std::vector<SolutionVector>& entries() const { return entries_; }
  double radius() const { return radius_; }

 private:
  double radius_;
  std::vector<SolutionVector> entries_;
};

}  // namespace ccdo
