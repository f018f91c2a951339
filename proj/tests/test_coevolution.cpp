#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "ccdo/coevolution.hpp"
#include "ccdo/g24.hpp"
#include "oracles.hpp"

using namespace ccdo;

namespace {

// f = alpha * |x - (0,0)| + (1 - alpha) * |x - (1,1)| on the unit square.
DcopProblem corners() {
  return DcopProblem("corners", Box({0.0, 0.0}, {1.0, 1.0}), Box({0.0}, {1.0}), 0,
                     [](std::span<const double> x, std::span<const double> env, std::span<double>) {
                       const double d0 = std::hypot(x[0], x[1]);
                       const double d1 = std::hypot(x[0] - 1.0, x[1] - 1.0);
                       return env[0] * d0 + (1.0 - env[0]) * d1;
                     });
}

}  // namespace

TEST_CASE("set_performance picks the best member") {
  SUBCASE("feasible optimum among junk") {
    const std::vector<Evaluation> e{Evaluation::make(3.0, {2.0}), Evaluation::make(-1.0, {-1.0}),
                                    Evaluation::make(5.0, {-1.0})};
    CHECK(set_performance(e).objective == -1.0);
  }
  SUBCASE("all infeasible") {
    const std::vector<Evaluation> e{Evaluation::make(-9.0, {2.0}), Evaluation::make(4.0, {0.5}),
                                    Evaluation::make(0.0, {1.0})};
    const Evaluation best = set_performance(e);
    CHECK_FALSE(best.feasible);
    CHECK(best.violation == 0.5);
  }
  SUBCASE("random sets against an exhaustive scan") {
    const DcopProblem p = make_variant(G24Id::k3b);
    Rng rng = make_stream(11, {});
    for (int trial = 0; trial < 200; ++trial) {
      const SolutionSet sp = [&] {
        SolutionSet s;
        for (int k = 0; k < 5; ++k) s.push_back(random_point<SolutionTag>(p.x_bounds(), rng));
        return s;
      }();
      const EnvVector env = random_point<EnvTag>(p.env_ranges(), rng);
      std::vector<oracle::Raw> raw;
      for (const auto& x : sp) raw.push_back(oracle::evaluate(p, x, env));
      const oracle::Raw expect = oracle::best_of(raw);
      const Evaluation got = set_performance(sp, env, p);
      CHECK(got.feasible == expect.feasible);
      CHECK(got.score() == (expect.feasible ? expect.objective : expect.violation));
    }
  }
}

TEST_CASE("sp_fitness") {
  const DcopProblem p = corners();
  const EnvPopulation ep{EnvVector{0.0}, EnvVector{1.0}, EnvVector{1.0}};

  SUBCASE("never best") {
    const SolutionSet sp{SolutionVector{0.0, 0.0}, SolutionVector{1.0, 1.0},
                         SolutionVector{0.5, 0.5}};
    const EvaluationMatrix m(sp, ep, p, nullptr);
    CHECK(sp_fitness(m, 2) == 0);
  }
  SUBCASE("uniquely best everywhere") {
    const SolutionSet sp{SolutionVector{0.0, 0.0}, SolutionVector{0.7, 0.7},
                         SolutionVector{0.5, 0.5}};
    const EnvPopulation only_origin{EnvVector{1.0}, EnvVector{1.0}, EnvVector{0.9}};
    const EvaluationMatrix m(sp, only_origin, p, nullptr);
    CHECK(sp_fitness(m, 0) == 3);
  }
  SUBCASE("duplicates both score 0") {
    const SolutionSet sp{SolutionVector{0.0, 0.0}, SolutionVector{1.0, 1.0},
                         SolutionVector{0.0, 0.0}};
    const EvaluationMatrix m(sp, ep, p, nullptr);
    CHECK(sp_fitness(m, 0) == 0);
    CHECK(sp_fitness(m, 2) == 0);
    CHECK(sp_fitness(m, 1) == 1);
  }
  SUBCASE("random instances against the oracle") {
    const DcopProblem g = make_variant(G24Id::k1);
    Rng rng = make_stream(5, {});
    for (int trial = 0; trial < 100; ++trial) {
      SolutionSet sp;
      EnvPopulation envs;
      for (int k = 0; k < 4; ++k) sp.push_back(random_point<SolutionTag>(g.x_bounds(), rng));
      for (int k = 0; k < 6; ++k) envs.push_back(random_point<EnvTag>(g.env_ranges(), rng));
      const EvaluationMatrix m(sp, envs, g, nullptr);
      for (std::size_t i = 0; i < sp.size(); ++i) {
        CHECK(sp_fitness(m, i) == oracle::deletion_impact(g, sp, envs, i));
      }
    }
  }
}

TEST_CASE("sp generation") {
  const DcopProblem p = corners();
  const EnvPopulation ep{EnvVector{0.0}, EnvVector{1.0}};
  CoevoConfig cfg;

  SUBCASE("dominated offspring leaves the set unchanged") {
    const SolutionSet sp{SolutionVector{0.0, 0.0}, SolutionVector{1.0, 1.0}};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Rng rng = make_stream(seed, {});
      const SpGenerationResult r = sp_evolve_one_generation(sp, ep, p, cfg, rng);
      REQUIRE(r.next.size() == 2);
      const bool same = (r.next[0] == sp[0] && r.next[1] == sp[1]) ||
                        (r.next[0] == sp[1] && r.next[1] == sp[0]);
      CHECK(same);
    }
  }
  SUBCASE("same seed, same result") {
    const DcopProblem g = make_variant(G24Id::k2);
    Rng init = make_stream(3, {});
    SolutionSet sp;
    EnvPopulation envs;
    for (int k = 0; k < 10; ++k) sp.push_back(random_point<SolutionTag>(g.x_bounds(), init));
    for (int k = 0; k < 10; ++k) envs.push_back(random_point<EnvTag>(g.env_ranges(), init));
    Rng a = make_stream(9, {}), b = make_stream(9, {});
    CHECK(sp_evolve_one_generation(sp, envs, g, cfg, a).next ==
          sp_evolve_one_generation(sp, envs, g, cfg, b).next);
  }
}

TEST_CASE("ep_fitness cases") {
  SUBCASE("set infeasible") {
    const EpFitness f = ep_fitness(Evaluation::make(0.0, {0.7}), Evaluation::make(1.0, {}));
    CHECK(f.case_id == 1);
    CHECK(f.value == doctest::Approx(0.7));
  }
  SUBCASE("comparison set better") {
    const EpFitness f = ep_fitness(Evaluation::make(2.0, {}), Evaluation::make(1.0, {}));
    CHECK(f.case_id == 2);
    CHECK(f.value == 0.5);
  }
  SUBCASE("set better") {
    const EpFitness f = ep_fitness(Evaluation::make(1.0, {}), Evaluation::make(2.0, {}));
    CHECK(f.case_id == 4);
    CHECK(f.value == -0.5);
  }
  SUBCASE("comparison set infeasible") {
    const EpFitness f = ep_fitness(Evaluation::make(3.0, {}), Evaluation::make(0.0, {1.0}));
    CHECK(f.case_id == 3);
    CHECK(f.value == 3.0);
  }
  SUBCASE("both objectives zero") {
    const EpFitness f = ep_fitness(Evaluation::make(0.0, {}), Evaluation::make(0.0, {}));
    CHECK(f.case_id == 4);
    CHECK(f.value == 0.0);
  }
}

TEST_CASE("challenge ordering") {
  CHECK(compare_challenge({1, 0.1}, {4, -0.1}) == std::partial_ordering::greater);
  CHECK(compare_challenge({2, 0.1}, {3, 9.0}) == std::partial_ordering::greater);
  CHECK(compare_challenge({4, -0.2}, {4, -0.1}) == std::partial_ordering::less);
  CHECK(compare_challenge({3, 1.0}, {4, 0.0}) == std::partial_ordering::unordered);
  CHECK(compare_challenge({2, 0.5}, {2, 0.5}) == std::partial_ordering::equivalent);
}

TEST_CASE("ep generation") {
  const DcopProblem g = make_variant(G24Id::k3b);
  Rng init = make_stream(21, {});
  SolutionSet sp;
  EnvPopulation ep;
  for (int k = 0; k < 6; ++k) sp.push_back(random_point<SolutionTag>(g.x_bounds(), init));
  for (int k = 0; k < 8; ++k) ep.push_back(random_point<EnvTag>(g.env_ranges(), init));

  SUBCASE("identical child keeps the slot content") {
    CoevoConfig cfg;
    cfg.ep_crossover_rate = 0.0;
    cfg.ep_mutation.rate = 0.0;
    Rng rng = make_stream(1, {});
    CHECK(ep_evolve_one_generation(ep, sp, g, cfg, rng).next == ep);
  }
  SUBCASE("survivors follow the challenge ordering") {
    CoevoConfig cfg;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      Rng rng = make_stream(seed, {});
      const EpGenerationResult r = ep_evolve_one_generation(ep, sp, g, cfg, rng);
      REQUIRE(r.next.size() == ep.size());
      for (std::size_t i = 0; i < ep.size(); ++i) {
        const EpFitness& pf = r.parent_fitness[i];
        const EpFitness& cf = r.child_fitness[i];
        auto rank = [](int c) { return c == 1 ? 2 : c == 2 ? 1 : 0; };
        if (rank(pf.case_id) > rank(cf.case_id)) CHECK(r.parent_survived[i]);
        if (rank(pf.case_id) < rank(cf.case_id)) CHECK_FALSE(r.parent_survived[i]);
        if (pf.case_id == cf.case_id && pf.value > cf.value) CHECK(r.parent_survived[i]);
        if (pf.case_id == cf.case_id && pf.value < cf.value) CHECK_FALSE(r.parent_survived[i]);
        if (r.parent_survived[i]) CHECK(r.next[i] == ep[i]);
        // Parent's set side must agree with a direct scan.
        if (pf.case_id == 1) {
          std::vector<oracle::Raw> raw;
          for (const auto& x : sp) raw.push_back(oracle::evaluate(g, x, ep[i]));
          CHECK(pf.value == oracle::best_of(raw).violation);
        }
      }
    }
  }
}

TEST_CASE("offline search") {
  const DcopProblem g = make_variant(G24Id::k1);
  SUBCASE("no generations returns the random start") {
    CoevoConfig cfg;
    cfg.generations = 0;
    const OfflineResult r = run_offline_search(g, cfg, 17);
    Rng sp_init = make_stream(17, {0});
    SolutionSet expect;
    for (int k = 0; k < cfg.sp_size; ++k) expect.push_back(random_point<SolutionTag>(g.x_bounds(), sp_init));
    CHECK(r.set == expect);
    CHECK(r.fes == 0);
  }
  SUBCASE("same seed, same set; FE count as predicted") {
    CoevoConfig cfg;
    cfg.generations = 8;
    const OfflineResult a = run_offline_search(g, cfg, 4);
    const OfflineResult b = run_offline_search(g, cfg, 4);
    CHECK(a.set == b.set);
    CHECK(a.fes == predicted_offline_fes(cfg));
    CHECK(predicted_offline_fes(CoevoConfig{}) == 15500);
  }
  SUBCASE("invalid sizes") {
    CoevoConfig cfg;
    cfg.sp_size = 1;
    CHECK_THROWS_AS(run_offline_search(g, cfg, 1), std::invalid_argument);
  }
}
