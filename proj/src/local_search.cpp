#include "ccdo/local_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include <Eigen/Dense>

namespace ccdo {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Tracks the evaluation budget and the best point seen.
class Probe {
 public:
  Probe(const Candidate& start, EvaluationContext& ctx, int max_fes)
      : ctx_(ctx), best_(start), max_fes_(max_fes) {}

  bool can_evaluate() const { return used_ < max_fes_ && ctx_.can_evaluate(); }

  Evaluation evaluate(const SolutionVector& x) {
    ++used_;
    Evaluation e = ctx_.evaluate(x);
    if (better(e, best_.eval)) best_ = {x, e};
    return e;
  }

  const Candidate& best() const { return best_; }
  int used() const { return used_; }

 private:
  EvaluationContext& ctx_;
  Candidate best_;
  int max_fes_;
  int used_ = 0;
};

constexpr double kActiveBand = 1e-6;
// Linearised constraints are targeted slightly inside the boundary so that
// curvature does not leave converged iterates marginally infeasible.
constexpr double kInteriorMargin = 1e-6;

struct Linearisation {
  VectorXd grad_f;
  MatrixXd jac_g;  // rows: constraints
};

double merit(const Evaluation& e, const LocalSearchConfig& c) {
  return e.objective + c.penalty * std::max(0.0, e.violation - c.constraint_tolerance);
}

// Forward differences around (x, ex). Steps that would leave the box are
// taken backwards instead. Empty when the budget runs out midway.
std::optional<Linearisation> linearise(const SolutionVector& x, const Evaluation& ex,
                                       const Box& box, Probe& probe, const LocalSearchConfig& c) {
  const std::size_t n = x.size();
  const std::size_t k = ex.constraint_values.size();
  Linearisation lin{VectorXd(n), MatrixXd(k, n)};
  for (std::size_t i = 0; i < n; ++i) {
    if (!probe.can_evaluate()) return std::nullopt;
    double h = c.fd_step * std::max(1.0, std::abs(x[i]));
    if (x[i] + h > box.upper(i)) h = -h;
    SolutionVector xp = x;
    xp[i] += h;
    const Evaluation e = probe.evaluate(xp);
    lin.grad_f(i) = (e.objective - ex.objective) / h;
    for (std::size_t j = 0; j < k; ++j) {
      lin.jac_g(j, i) = (e.constraint_values[j] - ex.constraint_values[j]) / h;
    }
  }
  return lin;
}

struct QpSolution {
  VectorXd step;
  VectorXd multipliers;  // one per row of A
  bool feasible = false;
};

// min 1/2 d'Bd + c'd  s.t.  A d <= b, by coordinate ascent on the dual
// (Hildreth's method). B must be positive definite.
QpSolution solve_qp(const MatrixXd& B, const VectorXd& c, const MatrixXd& A, const VectorXd& b) {
  const Eigen::LLT<MatrixXd> llt(B);
  const MatrixXd Binv_At = llt.solve(A.transpose());
  const VectorXd Binv_c = llt.solve(c);
  const MatrixXd H = A * Binv_At;
  const VectorXd k = b + A * Binv_c;
  VectorXd lambda = VectorXd::Zero(A.rows());
  for (int sweep = 0; sweep < 2000; ++sweep) {
    double change = 0.0;
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
      if (H(i, i) <= 0.0) continue;
      const double w = std::max(0.0, lambda(i) - (H.row(i).dot(lambda) + k(i)) / H(i, i));
      change = std::max(change, std::abs(w - lambda(i)));
      lambda(i) = w;
    }
    if (change < 1e-13 * (1.0 + lambda.cwiseAbs().maxCoeff())) break;
  }
  QpSolution out;
  out.step = -(Binv_c + Binv_At * lambda);
  out.multipliers = lambda;
  const VectorXd residual = A * out.step - b;
  out.feasible = residual.size() == 0 || residual.maxCoeff() <= 1e-9 * (1.0 + b.cwiseAbs().maxCoeff());
  return out;
}

void damped_bfgs_update(MatrixXd& B, const VectorXd& s, const VectorXd& y) {
  const VectorXd Bs = B * s;
  const double sBs = s.dot(Bs);
  if (sBs <= 1e-16) return;
  const double sy = s.dot(y);
  VectorXd r = y;
  if (sy < 0.2 * sBs) {
    const double theta = 0.8 * sBs / (sBs - sy);
    r = theta * y + (1.0 - theta) * Bs;
  }
  const double sr = s.dot(r);
  if (sr <= 1e-16) return;
  B += r * r.transpose() / sr - Bs * Bs.transpose() / sBs;
}

constexpr int kCorrections = 2;

// Least-norm step moving every nearly active or violated linearised
// constraint to just inside its boundary.
std::optional<VectorXd> correction(const MatrixXd& jac, const std::vector<double>& g,
                                   double tolerance) {
  std::vector<Eigen::Index> rows;
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (g[j] > tolerance - kActiveBand) rows.push_back(static_cast<Eigen::Index>(j));
  }
  if (rows.empty()) return std::nullopt;
  MatrixXd J(static_cast<Eigen::Index>(rows.size()), jac.cols());
  VectorXd r(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto ki = static_cast<Eigen::Index>(k);
    J.row(ki) = jac.row(rows[k]);
    const double target = tolerance - kInteriorMargin;
    r(ki) = target - g[rows[k]];
    if (g[rows[k]] <= target) r(ki) = 0.0;
  }
  VectorXd dc = J.completeOrthogonalDecomposition().solve(r);
  if (!dc.allFinite()) return std::nullopt;
  return dc;
}

}  // namespace

LocalSearchStrategy parse_strategy(std::string_view name) {
  if (name == "sqp_like") return LocalSearchStrategy::kSqpLike;
  if (name == "mutation_only") return LocalSearchStrategy::kMutationOnly;
  throw std::invalid_argument("unknown local search strategy '" + std::string(name) + "'");
}

std::string_view name_of(LocalSearchStrategy s) {
  return s == LocalSearchStrategy::kSqpLike ? "sqp_like" : "mutation_only";
}

LocalSearchResult local_descent(const Candidate& start, const Box& bounds, EvaluationContext& ctx,
                                const LocalSearchConfig& config) {
  if (config.max_fes < 1) throw std::invalid_argument("local_descent: max_fes must be >= 1");
  const std::size_t n = start.x.size();
  Probe probe(start, ctx, config.max_fes);

  SolutionVector x = start.x;
  Evaluation ex = start.eval;
  MatrixXd B = MatrixXd::Identity(n, n);
  std::optional<Linearisation> prev_lin;
  VectorXd prev_multipliers;
  VectorXd prev_x;

  auto lagrangian_grad = [](const Linearisation& lin, const VectorXd& mult) {
    VectorXd g = lin.grad_f;
    if (mult.size() > 0) g += lin.jac_g.transpose() * mult.head(lin.jac_g.rows());
    return g;
  };

  while (probe.can_evaluate()) {
    std::optional<Linearisation> lin = linearise(x, ex, bounds, probe, config);
    if (!lin) break;
    const VectorXd xv = Eigen::Map<const VectorXd>(x.values().data(), n);
    if (prev_lin) {
      damped_bfgs_update(B, xv - prev_x, lagrangian_grad(*lin, prev_multipliers) -
                                             lagrangian_grad(*prev_lin, prev_multipliers));
    }

    // Linearised constraints followed by the box rows.
    const Eigen::Index k = lin->jac_g.rows();
    MatrixXd A(k + 2 * n, n);
    VectorXd b(k + 2 * n);
    A.topRows(k) = lin->jac_g;
    for (Eigen::Index j = 0; j < k; ++j) b(j) = config.constraint_tolerance - kInteriorMargin - ex.constraint_values[j];
    for (std::size_t i = 0; i < n; ++i) {
      A.row(k + 2 * i).setZero();
      A(k + 2 * i, i) = 1.0;
      b(k + 2 * i) = bounds.upper(i) - x[i];
      A.row(k + 2 * i + 1).setZero();
      A(k + 2 * i + 1, i) = -1.0;
      b(k + 2 * i + 1) = x[i] - bounds.lower(i);
    }
    QpSolution qp = solve_qp(B, lin->grad_f, A, b);
    VectorXd d = qp.step;
    if (!qp.feasible || !d.allFinite()) {
      // Inconsistent linearisation: descend on the merit instead.
      VectorXd grad_merit = lin->grad_f;
      for (Eigen::Index j = 0; j < k; ++j) {
        if (ex.constraint_values[j] > config.constraint_tolerance) {
          grad_merit += config.penalty * lin->jac_g.row(j).transpose();
        }
      }
      d = -B.llt().solve(grad_merit);
      const double norm = d.norm();
      if (norm > 0.0) d *= std::min(1.0, 0.1 / norm) ;
      qp.multipliers = VectorXd::Zero(A.rows());
    }
    if (!d.allFinite() || d.norm() < config.min_step) break;

    const double m0 = merit(ex, config);
    double alpha = 1.0;
    bool moved = false;
    auto accept = [&](SolutionVector&& y, const Evaluation& ey) {
      if (merit(ey, config) >= m0) return false;
      prev_lin = std::move(lin);
      prev_multipliers = qp.multipliers;
      prev_x = xv;
      x = std::move(y);
      ex = ey;
      return true;
    };
    while (!moved && probe.can_evaluate() && alpha * d.norm() >= config.min_step) {
      SolutionVector y = x;
      for (std::size_t i = 0; i < n; ++i) y[i] += alpha * d(i);
      if (config.honor_bounds) bounds.clamp(y.span());
      Evaluation ey = probe.evaluate(y);
      // Second-order correction: a step along a curved constraint overshoots
      // it; pull the trial back with the current Jacobian before shortening.
      for (int c = 0; c < kCorrections && ey.violation > config.constraint_tolerance &&
                      probe.can_evaluate() && !accept(SolutionVector(y), ey);
           ++c) {
        const std::optional<VectorXd> dc =
            correction(lin->jac_g, ey.constraint_values, config.constraint_tolerance);
        if (!dc) break;
        for (std::size_t i = 0; i < n; ++i) y[i] += (*dc)(i);
        if (config.honor_bounds) bounds.clamp(y.span());
        ey = probe.evaluate(y);
      }
      if (x == y && ex == ey) {
        moved = true;
        break;
      }
      moved = accept(std::move(y), ey);
      alpha *= 0.5;
    }
    if (!moved) break;
  }
  return {probe.best(), probe.used()};
}

bool mutation_step(Candidate& current, const Box& bounds, EvaluationContext& ctx, double scale,
                   Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  SolutionVector y = current.x;
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += normal(rng) * scale * bounds.width(i);
  bounds.clamp(y.span());
  Evaluation e = ctx.evaluate(y);
  if (better(e, current.eval)) {
    current = {std::move(y), std::move(e)};
    return true;
  }
  return false;
}

LocalSearchResult mutation_hill_climb(const Candidate& start, const Box& bounds,
                                      EvaluationContext& ctx, const LocalSearchConfig& config,
                                      Rng& rng) {
  LocalSearchResult out{start, 0};
  while (out.fes < config.max_fes && ctx.can_evaluate()) {
    mutation_step(out.best, bounds, ctx, config.mutation_scale, rng);
    ++out.fes;
  }
  return out;
}

LocalSearchResult run_local_search(const Candidate& start, const Box& bounds,
                                   EvaluationContext& ctx, const LocalSearchConfig& config,
                                   Rng& rng) {
  switch (config.strategy) {
    case LocalSearchStrategy::kSqpLike:
      return local_descent(start, bounds, ctx, config);
    case LocalSearchStrategy::kMutationOnly:
      return mutation_hill_climb(start, bounds, ctx, config, rng);
  }
  throw std::logic_error("unhandled local search strategy");
}

double LsMemory::nearest_distance(const SolutionVector& x) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : entries_) best = std::min(best, distance(x, e));
  return best;
}

bool LsMemory::should_skip(const SolutionVector& x) const { return nearest_distance(x) < radius_; }

}  // namespace ccdo
