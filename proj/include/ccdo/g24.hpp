#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ccdo/problem.hpp"

namespace ccdo {

// Dynamic G24 benchmark family. Time-varying terms are lifted into explicit
// environment parameters (p1, p2, s2); time only enters through the schedule.

enum class G24Id { k1, k2, k3, k3b, k4, k5, k6a, k6c, k7 };

inline constexpr std::array<G24Id, 9> kAllG24 = {G24Id::k1,  G24Id::k2,  G24Id::k3,
                                                 G24Id::k3b, G24Id::k4,  G24Id::k5,
                                                 G24Id::k6a, G24Id::k6c, G24Id::k7};

enum class EnvParam { p1, p2, s2 };

struct G24Traits {
  G24Id id;
  std::string_view name;          // registry key, e.g. "g24_3b"
  std::string_view label;         // e.g. "G24-3b (dF,dC)"
  bool dynamic_objective;
  bool dynamic_constraints;
  std::vector<EnvParam> params;   // order of EnvVector coordinates
  std::optional<int> solution_size;  // empty means unlimited ("many")
};

const G24Traits& traits(G24Id id);
std::string_view name_of(G24Id id);
/// Accepts "g24_1", "G24_1", "G24-1"; throws std::invalid_argument otherwise.
G24Id parse_g24(std::string_view name);

/// Problem registry: every G24 variant by name.
DcopProblem make_variant(G24Id id);
DcopProblem make_problem(std::string_view name);
std::vector<std::string> registered_problems();

struct Severity {
  double k = 0.5;   // objective step size
  double s = 20.0;  // constraint step divisor
};

struct ChangeSchedule {
  G24Id id;
  Severity severity;
  std::vector<EnvVector> envs;  // one per environment period

  std::size_t num_changes() const { return envs.size(); }
};

/// Environment parameters at time step t.
EnvVector environment_at(G24Id id, int t, Severity severity = {});

/// Throws std::invalid_argument when num_changes < 1.
ChangeSchedule make_schedule(G24Id id, int num_changes, Severity severity = {});

}  // namespace ccdo
