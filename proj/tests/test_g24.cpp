#include <doctest.h>

#include <stdexcept>

#include "ccdo/g24.hpp"
#include "ccdo/rng.hpp"

using namespace ccdo;

TEST_CASE("registry and names") {
  CHECK(registered_problems().size() == 9);
  CHECK(parse_g24("G24-3b") == G24Id::k3b);
  CHECK(parse_g24("G24_7") == G24Id::k7);
  CHECK_THROWS_AS(parse_g24("g24_8"), std::invalid_argument);
  CHECK(make_problem("g24_6c").name() == "g24_6c");
}

TEST_CASE("declared environment ranges") {
  auto range_of = [](G24Id id, std::size_t i) {
    const DcopProblem p = make_variant(id);
    return std::pair{p.env_ranges().lower(i), p.env_ranges().upper(i)};
  };
  CHECK(range_of(G24Id::k1, 0) == std::pair{-1.0, 1.0});
  CHECK(range_of(G24Id::k2, 1) == std::pair{-1.0, 1.0});
  CHECK(range_of(G24Id::k3, 0) == std::pair{-0.2, 2.0});
  CHECK(range_of(G24Id::k3b, 1) == std::pair{-0.2, 2.0});
  CHECK(range_of(G24Id::k4, 1) == std::pair{0.0, 2.2});
  CHECK(range_of(G24Id::k5, 2) == std::pair{0.0, 2.2});
  CHECK(range_of(G24Id::k7, 0) == std::pair{0.0, 2.2});
}

TEST_CASE("fF variant ignores s2 in the objective") {
  const DcopProblem p = make_variant(G24Id::k7);
  for (double x1 : {0.1, 1.7, 2.9}) {
    const SolutionVector x{x1, 2.0};
    CHECK(p.evaluate(x, EnvVector{0.3}).objective == p.evaluate(x, EnvVector{1.9}).objective);
  }
}

TEST_CASE("fC variant ignores p1 in the constraints") {
  const DcopProblem p = make_variant(G24Id::k6a);
  for (double x1 : {0.1, 1.5, 2.9}) {
    const SolutionVector x{x1, 1.0};
    CHECK(p.evaluate(x, EnvVector{-0.7}).constraint_values ==
          p.evaluate(x, EnvVector{0.4}).constraint_values);
  }
}

TEST_CASE("G24_1 at the static setting matches the base problem") {
  // Base objective -(x1 + x2) with the two curved constraints.
  const DcopProblem p = make_variant(G24Id::k1);
  const Evaluation e = p.evaluate(SolutionVector{1.0, 2.0}, EnvVector{1.0});
  CHECK(e.objective == -3.0);
  CHECK(e.constraint_values[0] == -2.0);
  CHECK(e.constraint_values[1] == 2.0);
}

TEST_CASE("schedules") {
  SUBCASE("single change") {
    const ChangeSchedule s = make_schedule(G24Id::k1, 1);
    REQUIRE(s.num_changes() == 1);
    CHECK(s.envs[0] == environment_at(G24Id::k1, 0));
    CHECK(s.envs[0][0] == 1.0);
  }
  SUBCASE("G24_1 stays in range") {
    for (const auto& e : make_schedule(G24Id::k1, 12).envs) {
      CHECK(e[0] >= -1.0);
      CHECK(e[0] <= 1.0);
    }
  }
  SUBCASE("consecutive entries differ") {
    for (G24Id id : kAllG24) {
      const ChangeSchedule s = make_schedule(id, 12);
      for (std::size_t t = 1; t < s.envs.size(); ++t) {
        CHECK_MESSAGE(s.envs[t] != s.envs[t - 1], name_of(id), " t=", t);
      }
    }
  }
  SUBCASE("invalid length") { CHECK_THROWS_AS(make_schedule(G24Id::k1, 0), std::invalid_argument); }
}
