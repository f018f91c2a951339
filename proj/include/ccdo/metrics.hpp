#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ccdo/calibration.hpp"
#include "ccdo/coevolution.hpp"
#include "ccdo/problem.hpp"

namespace ccdo {

/// Modified offline error: arithmetic mean of an error trace. Throws
/// std::invalid_argument on an empty trace.
double e_mo(std::span<const double> trace);

/// Error of the best feasible value found in an environment:
///   found -> objective - best_feasible
///   none  -> worst_feasible - best_feasible
/// `best_found` must be feasible when present. Environments whose
/// calibration has no feasible point score 0.
double error_at(const std::optional<Evaluation>& best_found, const Calibration& calibration);

/// True when a found feasible value beats the calibrated best, i.e. the raw
/// error would be negative.
bool calibration_defect(const std::optional<Evaluation>& best_found,
                        const Calibration& calibration);

/// Mean over `envs` of error_at(best member of `set` in that env); infeasible
/// best members count as "none found". Evaluations here are not FE-charged.
double set_quality(const SolutionSet& set, std::span<const EnvVector> envs,
                   const DcopProblem& problem, CalibrationCache& cache);

struct ReconvergenceCount {
  int periods = 0;       // periods with at least 4 recorded FEs
  int reconverged = 0;   // final-quarter mean error < first-quarter mean
};

/// Splits a per-FE error trace at changes of `env_index` and checks each
/// period for re-convergence.
ReconvergenceCount count_reconvergence(std::span<const double> per_fe_error,
                                       std::span<const std::size_t> env_index);

}  // namespace ccdo
