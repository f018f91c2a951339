#include "ccdo/problem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ccdo {

double distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("distance: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

Box::Box(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size()) throw std::invalid_argument("Box: bound size mismatch");
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (!(lower_[i] <= upper_[i])) throw std::invalid_argument("Box: lower > upper");
  }
}

bool Box::contains(std::span<const double> p) const {
  if (p.size() != size()) return false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < lower_[i] || p[i] > upper_[i]) return false;
  }
  return true;
}

void Box::clamp(std::span<double> p) const {
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::clamp(p[i], lower_[i], upper_[i]);
}

double total_violation(std::span<const double> constraint_values) {
  double v = 0.0;
  for (double g : constraint_values) v += std::max(0.0, g);
  return v;
}

Evaluation Evaluation::make(double objective, std::vector<double> constraint_values) {
  Evaluation e;
  e.objective = objective;
  e.violation = total_violation(constraint_values);
  e.feasible = e.violation == 0.0;
  e.constraint_values = std::move(constraint_values);
  return e;
}

std::weak_ordering compare_solutions(const Evaluation& a, const Evaluation& b) {
  if (a.feasible != b.feasible) {
    return a.feasible ? std::weak_ordering::less : std::weak_ordering::greater;
  }
  const double sa = a.score();
  const double sb = b.score();
  if (sa < sb) return std::weak_ordering::less;
  if (sb < sa) return std::weak_ordering::greater;
  return std::weak_ordering::equivalent;
}

FeBudgetClock::FeBudgetClock(std::int64_t change_frequency, std::int64_t num_changes)
    : change_frequency_(change_frequency), num_changes_(num_changes) {
  if (change_frequency <= 0 || num_changes <= 0) {
    throw std::invalid_argument("FeBudgetClock: frequency and number of changes must be positive");
  }
}

std::int64_t FeBudgetClock::budget() const {
  return change_frequency_ > 0 ? change_frequency_ * num_changes_ : -1;
}

bool FeBudgetClock::exhausted() const { return remaining() == 0; }

std::int64_t FeBudgetClock::remaining() const {
  if (change_frequency_ == 0) return -1;
  return std::max<std::int64_t>(0, budget() - total_fes());
}

std::size_t FeBudgetClock::environment_index() const {
  if (change_frequency_ == 0) return 0;
  const std::int64_t idx = total_fes() / change_frequency_;
  return static_cast<std::size_t>(std::min(idx, num_changes_ - 1));
}

DcopProblem::DcopProblem(std::string name, Box x_bounds, Box env_ranges,
                         std::size_t num_constraints, Kernel kernel)
    : name_(std::move(name)),
      x_bounds_(std::move(x_bounds)),
      env_ranges_(std::move(env_ranges)),
      num_constraints_(num_constraints),
      kernel_(std::move(kernel)) {}

Evaluation DcopProblem::evaluate(std::span<const double> x, std::span<const double> env) const {
  if (x.size() != dim_x()) throw std::invalid_argument(name_ + ": decision vector has wrong size");
  if (env.size() != dim_env()) {
    throw std::invalid_argument(name_ + ": environment vector has wrong size");
  }
  std::vector<double> g(num_constraints_);
  const double f = kernel_(x, env, g);
  return Evaluation::make(f, std::move(g));
}

Evaluation evaluate(const DcopProblem& problem, const SolutionVector& x, const EnvVector& env,
                    FeBudgetClock* clock) {
  Evaluation e = problem.evaluate(x, env);
  if (clock != nullptr) clock->tick();
  return e;
}

FixedEnvironmentContext::FixedEnvironmentContext(const DcopProblem& problem, EnvVector env,
                                                 FeBudgetClock* clock, std::int64_t limit)
    : problem_(problem), env_(std::move(env)), clock_(clock), limit_(limit) {}

Evaluation FixedEnvironmentContext::evaluate(const SolutionVector& x) {
  if (remaining() == 0) throw std::logic_error("FixedEnvironmentContext: budget exhausted");
  ++used_;
  return ccdo::evaluate(problem_, x, env_, clock_);
}

std::int64_t FixedEnvironmentContext::remaining() const {
  std::int64_t r = limit_ < 0 ? -1 : std::max<std::int64_t>(0, limit_ - used_);
  if (clock_ != nullptr && clock_->budget() >= 0) {
    const std::int64_t c = clock_->remaining();
    r = r < 0 ? c : std::min(r, c);
  }
  return r;
}

}  // namespace ccdo
