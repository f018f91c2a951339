#include "ccdo/coevolution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ccdo {
namespace {

// Exact equality of set performance: same feasibility class and same score.
bool same_performance(const Evaluation& a, const Evaluation& b) {
  return a.feasible == b.feasible && a.score() == b.score();
}

std::vector<Evaluation> evaluate_at(const SolutionSet& set, const EnvVector& env,
                                    const DcopProblem& problem, FeBudgetClock* clock) {
  std::vector<Evaluation> out;
  out.reserve(set.size());
  for (const auto& x : set) out.push_back(evaluate(problem, x, env, clock));
  return out;
}

SolutionSet random_set(const Box& box, int size, Rng& rng) {
  SolutionSet s;
  s.reserve(size);
  for (int i = 0; i < size; ++i) s.push_back(random_point<SolutionTag>(box, rng));
  return s;
}

}  // namespace

Evaluation set_performance(std::span<const Evaluation> member_evals) {
  if (member_evals.empty()) throw std::invalid_argument("set_performance: empty set");
  const Evaluation* best = &member_evals[0];
  for (const auto& e : member_evals) {
    if (better(e, *best)) best = &e;
  }
  return *best;
}

Evaluation set_performance(const SolutionSet& set, const EnvVector& env, const DcopProblem& problem,
                           FeBudgetClock* clock) {
  return set_performance(evaluate_at(set, env, problem, clock));
}

EvaluationMatrix::EvaluationMatrix(const SolutionSet& set, const EnvPopulation& envs,
                                   const DcopProblem& problem, FeBudgetClock* clock)
    : members_(set.size()), envs_(envs.size()) {
  cells_.reserve(members_ * envs_);
  for (const auto& x : set) {
    for (const auto& env : envs) cells_.push_back(evaluate(problem, x, env, clock));
  }
}

std::vector<Evaluation> EvaluationMatrix::column(std::size_t env) const {
  std::vector<Evaluation> col;
  col.reserve(members_);
  for (std::size_t i = 0; i < members_; ++i) col.push_back(at(i, env));
  return col;
}

EvaluationMatrix EvaluationMatrix::without_member(std::size_t member) const {
  EvaluationMatrix m;
  m.members_ = members_ - 1;
  m.envs_ = envs_;
  m.cells_.reserve(m.members_ * envs_);
  for (std::size_t i = 0; i < members_; ++i) {
    if (i == member) continue;
    for (std::size_t j = 0; j < envs_; ++j) m.cells_.push_back(at(i, j));
  }
  return m;
}

std::vector<int> sp_fitness_all(const EvaluationMatrix& matrix) {
  // Removing a member changes an environment's performance only when that
  // member is the unique holder of the best performance there.
  std::vector<int> fit(matrix.members(), 0);
  for (std::size_t j = 0; j < matrix.envs(); ++j) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < matrix.members(); ++i) {
      if (better(matrix.at(i, j), matrix.at(best, j))) best = i;
    }
    int holders = 0;
    for (std::size_t i = 0; i < matrix.members(); ++i) {
      if (same_performance(matrix.at(i, j), matrix.at(best, j))) ++holders;
    }
    if (holders == 1) ++fit[best];
  }
  return fit;
}

int sp_fitness(const EvaluationMatrix& matrix, std::size_t member) {
  if (member >= matrix.members()) throw std::out_of_range("sp_fitness: member index");
  return sp_fitness_all(matrix)[member];
}

SpGenerationResult sp_evolve_one_generation(const SolutionSet& sp, const EnvPopulation& ep,
                                            const DcopProblem& problem, const CoevoConfig& config,
                                            Rng& rng, FeBudgetClock* clock) {
  if (sp.size() < 2) throw std::invalid_argument("sp_evolve_one_generation: need >= 2 members");
  const Box& box = problem.x_bounds();

  const std::size_t a = uniform_index(rng, sp.size());
  std::size_t b = uniform_index(rng, sp.size() - 1);
  if (b >= a) ++b;
  SolutionVector child(intermediate_crossover(sp[a].span(), sp[b].span(),
                                              config.sp_crossover_rate, rng));
  gaussian_mutation(child.span(), box, config.sp_mutation, rng);

  SolutionSet enlarged = sp;
  enlarged.push_back(child);
  EvaluationMatrix matrix(enlarged, ep, problem, clock);

  SpGenerationResult out;
  out.offspring = child;
  out.fitness = sp_fitness_all(matrix);
  const int worst = *std::min_element(out.fitness.begin(), out.fitness.end());
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < out.fitness.size(); ++i) {
    if (out.fitness[i] == worst) candidates.push_back(i);
  }
  out.removed = candidates[uniform_index(rng, candidates.size())];
  enlarged.erase(enlarged.begin() + static_cast<std::ptrdiff_t>(out.removed));
  out.next = std::move(enlarged);
  out.next_matrix = matrix.without_member(out.removed);
  return out;
}

EpFitness ep_fitness(const Evaluation& set_best, const Evaluation& baseline_best) {
  if (!set_best.feasible) return {1, set_best.violation};
  if (!baseline_best.feasible) return {3, set_best.objective};
  const double f_set = set_best.objective;
  const double f_base = baseline_best.objective;
  const double denom = std::max(std::abs(f_base), std::abs(f_set));
  const double gap = denom == 0.0 ? 0.0 : (f_set - f_base) / denom;
  return {f_base < f_set ? 2 : 4, gap};
}

EpFitness ep_fitness(std::span<const Evaluation> set_evals,
                     std::span<const Evaluation> baseline_evals) {
  return ep_fitness(set_performance(set_evals), set_performance(baseline_evals));
}

std::partial_ordering compare_challenge(const EpFitness& a, const EpFitness& b) {
  // Rank: case 1 > case 2 > {case 3, case 4}.
  auto rank = [](int c) { return c == 1 ? 2 : c == 2 ? 1 : 0; };
  if (a.case_id != b.case_id) {
    if (rank(a.case_id) != rank(b.case_id)) {
      return rank(a.case_id) > rank(b.case_id) ? std::partial_ordering::greater
                                               : std::partial_ordering::less;
    }
    return std::partial_ordering::unordered;
  }
  if (a.value > b.value) return std::partial_ordering::greater;
  if (a.value < b.value) return std::partial_ordering::less;
  return std::partial_ordering::equivalent;
}

EpGenerationResult ep_evolve_one_generation(const EnvPopulation& ep, const SolutionSet& sp,
                                            const DcopProblem& problem, const CoevoConfig& config,
                                            Rng& rng, FeBudgetClock* clock,
                                            const EvaluationMatrix* known) {
  if (known != nullptr && (known->members() != sp.size() || known->envs() != ep.size())) {
    throw std::invalid_argument("ep_evolve_one_generation: known matrix has wrong shape");
  }
  const Box& env_box = problem.env_ranges();
  const Box& x_box = problem.x_bounds();
  const std::size_t n = ep.size();

  EnvPopulation children;
  children.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t mate = i;
    if (n > 1) {
      mate = uniform_index(rng, n - 1);
      if (mate >= i) ++mate;
    }
    EnvVector child(intermediate_crossover(ep[i].span(), ep[mate].span(),
                                           config.ep_crossover_rate, rng));
    gaussian_mutation(child.span(), env_box, config.ep_mutation, rng);
    children.push_back(std::move(child));
  }

  auto challenge = [&](const EnvVector& env, std::vector<Evaluation> set_evals) {
    const SolutionSet baseline = random_set(x_box, config.i_size, rng);
    const auto base_evals = evaluate_at(baseline, env, problem, clock);
    return ep_fitness(set_evals, base_evals);
  };

  EpGenerationResult out;
  out.next.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto parent_set = known != nullptr ? known->column(i) : evaluate_at(sp, ep[i], problem, clock);
    const EpFitness pf = challenge(ep[i], std::move(parent_set));
    const EpFitness cf = challenge(children[i], evaluate_at(sp, children[i], problem, clock));
    const auto order = compare_challenge(pf, cf);
    bool keep_parent = order == std::partial_ordering::greater;
    if (order == std::partial_ordering::unordered) keep_parent = coin(rng);
    out.parent_fitness.push_back(pf);
    out.child_fitness.push_back(cf);
    out.parent_survived.push_back(keep_parent);
    out.next.push_back(keep_parent ? ep[i] : children[i]);
  }
  return out;
}

std::int64_t predicted_offline_fes(const CoevoConfig& c) {
  const std::int64_t m = c.sp_size, n = c.ep_size, i = c.i_size;
  std::int64_t per_gen = (m + 1) * n;  // enlarged SP against EP
  if (c.evolve_environments) per_gen += n * m + 2 * n * i;  // children vs SP, two baselines
  return c.generations * per_gen;
}

OfflineResult run_offline_search(const DcopProblem& problem, const CoevoConfig& config,
                                 std::uint64_t seed) {
  if (config.sp_size < 2 || config.ep_size < 1 || config.i_size < 1 || config.generations < 0) {
    throw std::invalid_argument("run_offline_search: invalid population sizes");
  }
  FeBudgetClock clock;
  Rng sp_init = make_stream(seed, {0});
  Rng ep_init = make_stream(seed, {1});
  SolutionSet sp = random_set(problem.x_bounds(), config.sp_size, sp_init);
  EnvPopulation ep;
  for (int j = 0; j < config.ep_size; ++j) {
    ep.push_back(random_point<EnvTag>(problem.env_ranges(), ep_init));
  }

  for (int g = 0; g < config.generations; ++g) {
    Rng sp_rng = make_stream(seed, {2, static_cast<std::uint64_t>(g)});
    SpGenerationResult s = sp_evolve_one_generation(sp, ep, problem, config, sp_rng, &clock);
    sp = std::move(s.next);
    if (config.evolve_environments) {
      Rng ep_rng = make_stream(seed, {3, static_cast<std::uint64_t>(g)});
      ep = ep_evolve_one_generation(ep, sp, problem, config, ep_rng, &clock, &s.next_matrix).next;
    }
  }
  return {std::move(sp), std::move(ep), clock.total_fes()};
}

}  // namespace ccdo
