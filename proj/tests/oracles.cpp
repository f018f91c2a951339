#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace oracle {

Raw evaluate(const ccdo::DcopProblem& problem, const ccdo::SolutionVector& x,
             const ccdo::EnvVector& env) {
  std::vector<double> g(problem.num_constraints());
  Raw r;
  r.objective = problem.evaluate_raw(x.span(), env.span(), g);
  for (double v : g) {
    if (v > 0.0) r.violation += v;
  }
  r.feasible = std::all_of(g.begin(), g.end(), [](double v) { return v <= 0.0; });
  return r;
}

Raw best_of(const std::vector<Raw>& members) {
  Raw best = members.front();
  for (const Raw& m : members) {
    if (m.feasible && !best.feasible) {
      best = m;
    } else if (m.feasible == best.feasible) {
      const double a = m.feasible ? m.objective : m.violation;
      const double b = best.feasible ? best.objective : best.violation;
      if (a < b) best = m;
    }
  }
  return best;
}

bool same_performance(const Raw& a, const Raw& b) {
  if (a.feasible != b.feasible) return false;
  return a.feasible ? a.objective == b.objective : a.violation == b.violation;
}

int deletion_impact(const ccdo::DcopProblem& problem, const ccdo::SolutionSet& sp,
                    const ccdo::EnvPopulation& ep, std::size_t i) {
  int changed = 0;
  for (const auto& env : ep) {
    std::vector<Raw> all, rest;
    for (std::size_t k = 0; k < sp.size(); ++k) {
      const Raw r = evaluate(problem, sp[k], env);
      all.push_back(r);
      if (k != i) rest.push_back(r);
    }
    if (!same_performance(best_of(all), best_of(rest))) ++changed;
  }
  return changed;
}

Challenge four_case(const std::vector<Raw>& set, const std::vector<Raw>& comparison) {
  const Raw s = best_of(set);
  const Raw c = best_of(comparison);
  if (!s.feasible) return {1, s.violation};
  if (!c.feasible) return {3, s.objective};
  const double denom = std::max(std::fabs(c.objective), std::fabs(s.objective));
  const double value = denom == 0.0 ? 0.0 : (s.objective - c.objective) / denom;
  if (c.objective < s.objective) return {2, value};
  return {4, value};
}

}  // namespace oracle
