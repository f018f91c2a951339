#include "ccdo/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ccdo {

double e_mo(std::span<const double> trace) {
  if (trace.empty()) throw std::invalid_argument("e_mo: empty trace");
  return std::accumulate(trace.begin(), trace.end(), 0.0) / static_cast<double>(trace.size());
}

double error_at(const std::optional<Evaluation>& best_found, const Calibration& calibration) {
  if (!calibration.has_feasible) return 0.0;
  if (best_found && !best_found->feasible) {
    throw std::invalid_argument("error_at: best_found must be feasible");
  }
  if (!best_found) return calibration.worst_feasible - calibration.best_feasible;
  return best_found->objective - calibration.best_feasible;
}

bool calibration_defect(const std::optional<Evaluation>& best_found,
                        const Calibration& calibration) {
  return calibration.has_feasible && best_found && best_found->feasible &&
         best_found->objective < calibration.best_feasible;
}

double set_quality(const SolutionSet& set, std::span<const EnvVector> envs,
                   const DcopProblem& problem, CalibrationCache& cache) {
  if (envs.empty()) throw std::invalid_argument("set_quality: empty environment sample");
  double total = 0.0;
  for (const EnvVector& env : envs) {
    const Evaluation best = set_performance(set, env, problem);
    std::optional<Evaluation> found;
    if (best.feasible) found = best;
    // Calibration is accurate to ~1e-12; a set can graze past it.
    total += std::max(0.0, error_at(found, cache.get(problem, env)));
  }
  return total / static_cast<double>(envs.size());
}

ReconvergenceCount count_reconvergence(std::span<const double> per_fe_error,
                                       std::span<const std::size_t> env_index) {
  if (per_fe_error.size() != env_index.size()) {
    throw std::invalid_argument("count_reconvergence: trace and index lengths differ");
  }
  ReconvergenceCount out;
  for (std::size_t begin = 0; begin < per_fe_error.size();) {
    std::size_t end = begin;
    while (end < per_fe_error.size() && env_index[end] == env_index[begin]) ++end;
    const std::size_t quarter = (end - begin) / 4;
    if (quarter > 0) {
      ++out.periods;
      const double first = e_mo(per_fe_error.subspan(begin, quarter));
      const double last = e_mo(per_fe_error.subspan(end - quarter, quarter));
      if (last < first) ++out.reconverged;
    }
    begin = end;
  }
  return out;
}

}  // namespace ccdo
