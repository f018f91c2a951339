#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "ccdo/g24.hpp"
#include "ccdo/local_search.hpp"

using namespace ccdo;

namespace {

// (x1 - c1)^2 + 2 (x2 - c2)^2 + 0.5 (x1 - c1)(x2 - c2) on [0,3] x [0,4].
DcopProblem quadratic(double c1, double c2) {
  return DcopProblem("quadratic", Box({0.0, 0.0}, {3.0, 4.0}), Box({0.0}, {1.0}), 0,
                     [c1, c2](std::span<const double> x, std::span<const double>, std::span<double>) {
                       const double a = x[0] - c1, b = x[1] - c2;
                       return a * a + 2.0 * b * b + 0.5 * a * b;
                     });
}

Candidate start_at(EvaluationContext& ctx, SolutionVector x) {
  Evaluation e = ctx.evaluate(x);
  return {std::move(x), std::move(e)};
}

}  // namespace

TEST_CASE("stationary start stays put") {
  const DcopProblem p = quadratic(1.2, 2.5);
  FixedEnvironmentContext ctx(p, EnvVector{0.0});
  LocalSearchConfig cfg;
  const LocalSearchResult r =
      local_descent(start_at(ctx, SolutionVector{1.2, 2.5}), p.x_bounds(), ctx, cfg);
  CHECK(distance(r.best.x, SolutionVector{1.2, 2.5}) < 1e-3);
}

TEST_CASE("box-constrained quadratic reaches the analytic minimiser") {
  LocalSearchConfig cfg;
  cfg.max_fes = 100;
  SUBCASE("interior minimiser") {
    const DcopProblem p = quadratic(1.2, 2.5);
    FixedEnvironmentContext ctx(p, EnvVector{0.0});
    const LocalSearchResult r =
        local_descent(start_at(ctx, SolutionVector{2.8, 0.3}), p.x_bounds(), ctx, cfg);
    CHECK(distance(r.best.x, SolutionVector{1.2, 2.5}) < 1e-4);
  }
  SUBCASE("minimiser on the boundary") {
    // Unconstrained centre (1.0, 5.0) lies outside; on x2 = 4 the minimiser
    // solves 2 (x1 - 1) + 0.5 (4 - 5) = 0.
    const DcopProblem p = quadratic(1.0, 5.0);
    FixedEnvironmentContext ctx(p, EnvVector{0.0});
    const LocalSearchResult r =
        local_descent(start_at(ctx, SolutionVector{2.5, 1.0}), p.x_bounds(), ctx, cfg);
    CHECK(distance(r.best.x, SolutionVector{1.25, 4.0}) < 1e-4);
  }
}

TEST_CASE("G24 static base never degrades") {
  const DcopProblem p = make_variant(G24Id::k1);
  FixedEnvironmentContext ctx(p, EnvVector{1.0}, nullptr, 20);
  const Candidate s = start_at(ctx, SolutionVector{2.3, 3.1});
  FixedEnvironmentContext budget(p, EnvVector{1.0}, nullptr, 20);
  const LocalSearchResult r = local_descent(s, p.x_bounds(), budget, LocalSearchConfig{});
  CHECK_FALSE(better(s.eval, r.best.eval));
  CHECK(budget.used() <= 20);
  CHECK(r.fes == budget.used());
}

TEST_CASE("budget below one is rejected") {
  const DcopProblem p = quadratic(1.0, 1.0);
  FixedEnvironmentContext ctx(p, EnvVector{0.0});
  LocalSearchConfig cfg;
  cfg.max_fes = 0;
  CHECK_THROWS_AS(local_descent(start_at(ctx, SolutionVector{1.0, 1.0}), p.x_bounds(), ctx, cfg),
                  std::invalid_argument);
}

TEST_CASE("mutation_step") {
  SUBCASE("infeasible perturbations are rejected") {
    // Feasible only at a single point.
    const DcopProblem p("needle", Box({0.0, 0.0}, {1.0, 1.0}), Box({0.0}, {1.0}), 1,
                        [](std::span<const double> x, std::span<const double>, std::span<double> g) {
                          g[0] = std::hypot(x[0] - 0.5, x[1] - 0.5);
                          return 0.0;
                        });
    FixedEnvironmentContext ctx(p, EnvVector{0.0});
    Candidate c = start_at(ctx, SolutionVector{0.5, 0.5});
    REQUIRE(c.eval.feasible);
    Rng rng = make_stream(2, {});
    for (int i = 0; i < 50; ++i) CHECK_FALSE(mutation_step(c, p.x_bounds(), ctx, 0.1, rng));
    CHECK(c.x == SolutionVector{0.5, 0.5});
  }
  SUBCASE("zero perturbation leaves x unchanged") {
    const DcopProblem p = quadratic(1.0, 1.0);
    FixedEnvironmentContext ctx(p, EnvVector{0.0});
    Candidate c = start_at(ctx, SolutionVector{2.0, 3.0});
    Rng rng = make_stream(2, {});
    CHECK_FALSE(mutation_step(c, p.x_bounds(), ctx, 0.0, rng));
    CHECK(c.x == SolutionVector{2.0, 3.0});
  }
  SUBCASE("hill climbing is monotone") {
    const DcopProblem p = quadratic(1.0, 1.0);
    FixedEnvironmentContext ctx(p, EnvVector{0.0});
    Candidate c = start_at(ctx, SolutionVector{2.9, 3.9});
    Rng rng = make_stream(8, {});
    double last = c.eval.objective;
    for (int i = 0; i < 200; ++i) {
      mutation_step(c, p.x_bounds(), ctx, 0.1, rng);
      CHECK(c.eval.objective <= last);
      last = c.eval.objective;
    }
    CHECK(last < 0.1);
  }
}

TEST_CASE("strategy dispatch") {
  CHECK(parse_strategy("sqp_like") == LocalSearchStrategy::kSqpLike);
  CHECK(parse_strategy("mutation_only") == LocalSearchStrategy::kMutationOnly);
  CHECK(name_of(LocalSearchStrategy::kMutationOnly) == "mutation_only");
  CHECK_THROWS(parse_strategy("newton"));

  const DcopProblem p = quadratic(1.0, 1.0);
  FixedEnvironmentContext ctx(p, EnvVector{0.0});
  LocalSearchConfig cfg;
  cfg.strategy = LocalSearchStrategy::kMutationOnly;
  Rng rng = make_stream(1, {});
  const LocalSearchResult r =
      run_local_search(start_at(ctx, SolutionVector{2.0, 2.0}), p.x_bounds(), ctx, cfg, rng);
  CHECK(r.fes == cfg.max_fes);
}

TEST_CASE("local-search memory") {
  LsMemory mem;
  const SolutionVector x{0.0, 0.0};
  CHECK_FALSE(mem.should_skip(x));
  mem.add(x);
  CHECK(mem.should_skip(x));
  CHECK_FALSE(mem.should_skip(SolutionVector{0.0, 1e-2}));
  CHECK(mem.should_skip(SolutionVector{0.0, 0.5e-2}));
  mem.clear();
  CHECK_FALSE(mem.should_skip(x));
}
