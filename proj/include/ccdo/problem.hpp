#pragma once

#include <atomic>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace ccdo {

/// Dense real vector tagged with the space it lives in, so decision points
/// and environment parameters cannot be mixed up.
template <class Tag>
class Point {
 public:
  Point() = default;
  explicit Point(std::size_t n, double fill = 0.0) : v_(n, fill) {}
  explicit Point(std::vector<double> v) : v_(std::move(v)) {}
  Point(std::initializer_list<double> v) : v_(v) {}

  std::size_t size() const { return v_.size(); }
  double& operator[](std::size_t i) { return v_[i]; }
  double operator[](std::size_t i) const { return v_[i]; }
  std::span<double> span() { return v_; }
  std::span<const double> span() const { return v_; }
  const std::vector<double>& values() const { return v_; }
  auto begin() const { return v_.begin(); }
  auto end() const { return v_.end(); }

  friend bool operator==(const Point&, const Point&) = default;

 private:
  std::vector<double> v_;
};

struct SolutionTag;
struct EnvTag;
using SolutionVector = Point<SolutionTag>;
using EnvVector = Point<EnvTag>;

double distance(std::span<const double> a, std::span<const double> b);

template <class Tag>
double distance(const Point<Tag>& a, const Point<Tag>& b) {
  return distance(a.span(), b.span());
}

/// Axis-aligned box [lower_i, upper_i].
class Box {
 public:
  Box() = default;
  Box(std::vector<double> lower, std::vector<double> upper);

  std::size_t size() const { return lower_.size(); }
  double lower(std::size_t i) const { return lower_[i]; }
  double upper(std::size_t i) const { return upper_[i]; }
  double width(std::size_t i) const { return upper_[i] - lower_[i]; }
  bool contains(std::span<const double> p) const;
  void clamp(std::span<double> p) const;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

/// Objective value plus inequality constraints g_i <= 0.
struct Evaluation {
  double objective = 0.0;
  std::vector<double> constraint_values;
  double violation = 0.0;
  bool feasible = true;

  static Evaluation make(double objective, std::vector<double> constraint_values);

  /// Objective when feasible, summed violation otherwise.
  double score() const { return feasible ? objective : violation; }

  friend bool operator==(const Evaluation&, const Evaluation&) = default;
};

double total_violation(std::span<const double> constraint_values);

/// Feasibility first, then objective (feasible) or violation (infeasible),
/// smaller is better. `less` means `a` is the better of the two.
std::weak_ordering compare_solutions(const Evaluation& a, const Evaluation& b);

inline bool better(const Evaluation& a, const Evaluation& b) {
  return compare_solutions(a, b) == std::weak_ordering::less;
}

/// Counts objective evaluations and maps the count onto an environment index
/// for a schedule that changes every `change_frequency` evaluations.
class FeBudgetClock {
 public:
  /// Unbounded clock, environment index always 0.
  FeBudgetClock() = default;
  FeBudgetClock(std::int64_t change_frequency, std::int64_t num_changes);

  std::int64_t total_fes() const { return total_.load(std::memory_order_relaxed); }
  std::int64_t change_frequency() const { return change_frequency_; }
  std::int64_t num_changes() const { return num_changes_; }
  /// change_frequency * num_changes, or -1 when unbounded.
  std::int64_t budget() const;
  bool exhausted() const;
  std::int64_t remaining() const;
  std::size_t environment_index() const;
  /// Atomically increments and returns the count before the increment.
  std::int64_t tick() { return total_.fetch_add(1, std::memory_order_relaxed); }

 private:
  std::atomic<std::int64_t> total_{0};
  std::int64_t change_frequency_ = 0;
  std::int64_t num_changes_ = 0;
};

/// A dynamic constrained problem: min f(x, env) s.t. g_i(x, env) <= 0, with
/// the decision box and the environment-parameter box known up front.
class DcopProblem {
 public:
  /// Writes constraint values into `g` (size num_constraints) and returns f.
  using Kernel = std::function<double(std::span<const double> x, std::span<const double> env,
                                      std::span<double> g)>;

  DcopProblem(std::string name, Box x_bounds, Box env_ranges, std::size_t num_constraints,
              Kernel kernel);

  const std::string& name() const { return name_; }
  std::size_t dim_x() const { return x_bounds_.size(); }
  std::size_t dim_env() const { return env_ranges_.size(); }
  std::size_t num_constraints() const { return num_constraints_; }
  const Box& x_bounds() const { return x_bounds_; }
  const Box& env_ranges() const { return env_ranges_; }

  /// Throws std::invalid_argument on a dimension mismatch.
  Evaluation evaluate(std::span<const double> x, std::span<const double> env) const;
  Evaluation evaluate(const SolutionVector& x, const EnvVector& env) const {
    return evaluate(x.span(), env.span());
  }

  /// Unchecked, allocation-free path for dense sampling; `g` must hold
  /// num_constraints() values.
  double evaluate_raw(std::span<const double> x, std::span<const double> env,
                      std::span<double> g) const {
    return kernel_(x, env, g);
  }

 private:
  std::string name_;
  Box x_bounds_;
  Box env_ranges_;
  std::size_t num_constraints_;
  Kernel kernel_;
};

/// Evaluates and charges one FE to `clock` when given.
Evaluation evaluate(const DcopProblem& problem, const SolutionVector& x, const EnvVector& env,
                    FeBudgetClock* clock);

/// Source of evaluations for search routines that should not care whether the
/// environment is fixed or driven by a change schedule.
class EvaluationContext {
 public:
  virtual ~EvaluationContext() = default;
  virtual Evaluation evaluate(const SolutionVector& x) = 0;
  /// Number of further evaluations allowed; negative means unlimited.
  virtual std::int64_t remaining() const = 0;
  bool can_evaluate() const { return remaining() != 0; }
};

/// Fixed environment, optional counting clock.
class FixedEnvironmentContext : public EvaluationContext {
 public:
  FixedEnvironmentContext(const DcopProblem& problem, EnvVector env, FeBudgetClock* clock = nullptr,
                          std::int64_t limit = -1);

  Evaluation evaluate(const SolutionVector& x) override;
  std::int64_t remaining() const override;
  std::int64_t used() const { return used_; }

 private:
  const DcopProblem& problem_;
  EnvVector env_;
  FeBudgetClock* clock_;
  std::int64_t limit_;
  std::int64_t used_ = 0;
};

}  // namespace ccdo
