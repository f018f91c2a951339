#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "ccdo/problem.hpp"
#include "ccdo/rng.hpp"

namespace ccdo {

// Offline set search: a solution population (SP) co-evolves against an
// environment population (EP) that tries to find environments the set
// handles badly.

using SolutionSet = std::vector<SolutionVector>;
using EnvPopulation = std::vector<EnvVector>;

struct CoevoConfig {
  int generations = 50;
  int sp_size = 10;
  int ep_size = 10;
  int i_size = 5;  // random comparison set drawn per EP individual
  GaussianMutation sp_mutation{0.1, 0.5};
  double sp_crossover_rate = 0.5;
  GaussianMutation ep_mutation{0.05, 0.5};
  double ep_crossover_rate = 0.5;
  bool evolve_environments = true;  // false freezes EP at its random start
};

/// Performance of a set in one environment: the best member's evaluation.
Evaluation set_performance(std::span<const Evaluation> member_evals);
Evaluation set_performance(const SolutionSet& set, const EnvVector& env, const DcopProblem& problem,
                           FeBudgetClock* clock = nullptr);

/// Evaluations of every member (rows) in every environment (columns).
class EvaluationMatrix {
 public:
  EvaluationMatrix() = default;
  EvaluationMatrix(const SolutionSet& set, const EnvPopulation& envs, const DcopProblem& problem,
                   FeBudgetClock* clock);

  std::size_t members() const { return members_; }
  std::size_t envs() const { return envs_; }
  const Evaluation& at(std::size_t member, std::size_t env) const {
    return cells_[member * envs_ + env];
  }
  std::vector<Evaluation> column(std::size_t env) const;
  /// Copy with one member row dropped.
  EvaluationMatrix without_member(std::size_t member) const;

 private:
  std::size_t members_ = 0;
  std::size_t envs_ = 0;
  std::vector<Evaluation> cells_;
};

/// Number of environments whose set performance (feasibility class and
/// score, compared exactly) changes when `member` is removed.
int sp_fitness(const EvaluationMatrix& matrix, std::size_t member);
std::vector<int> sp_fitness_all(const EvaluationMatrix& matrix);

struct SpGenerationResult {
  SolutionSet next;
  SolutionVector offspring;
  std::vector<int> fitness;  // over the enlarged set, offspring last
  std::size_t removed = 0;   // index into the enlarged set
  EvaluationMatrix next_matrix;  // `next` against the EP it was judged on
};

/// One steady-state SP generation: one offspring in, the lowest-fitness
/// member out (ties broken uniformly).
SpGenerationResult sp_evolve_one_generation(const SolutionSet& sp, const EnvPopulation& ep,
                                            const DcopProblem& problem, const CoevoConfig& config,
                                            Rng& rng, FeBudgetClock* clock = nullptr);

/// Challenge of an environment against a set, classified into four cases:
///   1: best set member infeasible, value = its violation
///   2: set feasible but beaten by the random baseline, value = relative gap > 0
///   3: set feasible, baseline infeasible, value = set objective
///   4: both feasible and the set at least as good, value = relative gap <= 0
struct EpFitness {
  int case_id = 4;
  double value = 0.0;
};

EpFitness ep_fitness(const Evaluation& set_best, const Evaluation& baseline_best);
EpFitness ep_fitness(std::span<const Evaluation> set_evals,
                     std::span<const Evaluation> baseline_evals);

/// greater: `a` is more challenging; less: `b` is; equivalent: same case
/// and value; unordered: case 3 against case 4, to be settled by a coin.
std::partial_ordering compare_challenge(const EpFitness& a, const EpFitness& b);

struct EpGenerationResult {
  EnvPopulation next;
  std::vector<EpFitness> parent_fitness;
  std::vector<EpFitness> child_fitness;
  std::vector<bool> parent_survived;
};

/// EP_new[i] is bred from EP[i] and a random mate; slot i keeps whichever of
/// the two is more challenging against `sp`. `known` may carry the
/// evaluations of `sp` against the current `ep` so they are not repeated.
EpGenerationResult ep_evolve_one_generation(const EnvPopulation& ep, const SolutionSet& sp,
                                            const DcopProblem& problem, const CoevoConfig& config,
                                            Rng& rng, FeBudgetClock* clock = nullptr,
                                            const EvaluationMatrix* known = nullptr);

struct OfflineResult {
  SolutionSet set;
  EnvPopulation final_envs;
  std::int64_t fes = 0;
};

/// Objective evaluations one run costs under per-generation memoisation.
std::int64_t predicted_offline_fes(const CoevoConfig& config);

OfflineResult run_offline_search(const DcopProblem& problem, const CoevoConfig& config,
                                 std::uint64_t seed);

}  // namespace ccdo
