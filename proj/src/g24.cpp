#include "ccdo/g24.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ccdo {
namespace {

constexpr double kX1Min = 0.0, kX1Max = 3.0;
constexpr double kX2Min = 0.0, kX2Max = 4.0;

// Parameters sampled from sin() are snapped so that sin(pi) reads as 0.
double snap(double v) { return std::round(v * 1e12) / 1e12; }

double g1(double x1, double x2) {
  return x1 * x1 * (x1 * (-2.0 * x1 + 8.0) - 8.0) + x2 - 2.0;
}

double g2(double x1, double x2) {
  return x1 * (x1 * (x1 * (-4.0 * x1 + 32.0) - 88.0) + 96.0) + x2 - 36.0;
}

// Linear cut; s2 shifts it through the decision box.
double g3(double x1, double x2, double s2) { return 2.0 * x1 + 3.0 * (x2 + s2) - 9.0; }

// Two disconnected vertical bands.
double g4(double x1) { return ((0.0 <= x1 && x1 <= 1.0) || (2.0 <= x1 && x1 <= 3.0)) ? -1.0 : 1.0; }

// Two narrower bands.
double g5(double x1) { return ((0.0 <= x1 && x1 <= 0.5) || (2.0 <= x1 && x1 <= 2.5)) ? -1.0 : 1.0; }

enum class ConstraintSet { kBase, kBaseAndCut, kCutAndWideBands, kCutAndNarrowBands };

std::size_t constraint_count(ConstraintSet c) {
  switch (c) {
    case ConstraintSet::kBase:
      return 2;
    case ConstraintSet::kBaseAndCut:
      return 3;
    default:
      return 2;
  }
}

ConstraintSet constraint_set(G24Id id) {
  switch (id) {
    case G24Id::k1:
    case G24Id::k2:
      return ConstraintSet::kBase;
    case G24Id::k6a:
      return ConstraintSet::kCutAndWideBands;
    case G24Id::k6c:
      return ConstraintSet::kCutAndNarrowBands;
    default:
      return ConstraintSet::kBaseAndCut;
  }
}

const std::vector<G24Traits>& all_traits() {
  static const std::vector<G24Traits> t = {
      {G24Id::k1, "g24_1", "G24-1 (dF,fC)", true, false, {EnvParam::p1}, 2},
      {G24Id::k2, "g24_2", "G24-2 (dF,fC)", true, false, {EnvParam::p1, EnvParam::p2}, 5},
      {G24Id::k3, "g24_3", "G24-3 (fF,dC)", false, true, {EnvParam::s2}, std::nullopt},
      {G24Id::k3b, "g24_3b", "G24-3b (dF,dC)", true, true, {EnvParam::p1, EnvParam::s2},
       std::nullopt},
      {G24Id::k4, "g24_4", "G24-4 (dF,dC)", true, true, {EnvParam::p1, EnvParam::s2},
       std::nullopt},
      {G24Id::k5, "g24_5", "G24-5 (dF,dC)", true, true,
       {EnvParam::p1, EnvParam::p2, EnvParam::s2}, std::nullopt},
      {G24Id::k6a, "g24_6a", "G24-6a (dF,fC)", true, false, {EnvParam::p1}, 2},
      {G24Id::k6c, "g24_6c", "G24-6c (dF,fC)", true, false, {EnvParam::p1}, 2},
      {G24Id::k7, "g24_7", "G24-7 (fF,dC)", false, true, {EnvParam::s2}, std::nullopt},
  };
  return t;
}

// s2 decreases over time for the G24-3 pair and increases for G24-4/5/7.
bool s2_decreasing(G24Id id) { return id == G24Id::k3 || id == G24Id::k3b; }

std::pair<double, double> param_range(G24Id id, EnvParam p) {
  if (p != EnvParam::s2) return {-1.0, 1.0};
  return s2_decreasing(id) ? std::pair{-0.2, 2.0} : std::pair{0.0, 2.2};
}

}  // namespace

const G24Traits& traits(G24Id id) {
  for (const auto& t : all_traits()) {
    if (t.id == id) return t;
  }
  throw std::invalid_argument("unknown G24 variant");
}

std::string_view name_of(G24Id id) { return traits(id).name; }

G24Id parse_g24(std::string_view name) {
  std::string key(name);
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) {
    return c == '-' ? '_' : static_cast<char>(std::tolower(c));
  });
  for (const auto& t : all_traits()) {
    if (t.name == key) return t.id;
  }
  throw std::invalid_argument("unknown problem '" + std::string(name) + "'");
}

DcopProblem make_variant(G24Id id) {
  const G24Traits& t = traits(id);
  std::vector<double> lo, hi;
  int ip1 = -1, ip2 = -1, is2 = -1;
  for (std::size_t i = 0; i < t.params.size(); ++i) {
    const auto [a, b] = param_range(id, t.params[i]);
    lo.push_back(a);
    hi.push_back(b);
    switch (t.params[i]) {
      case EnvParam::p1:
        ip1 = static_cast<int>(i);
        break;
      case EnvParam::p2:
        ip2 = static_cast<int>(i);
        break;
      case EnvParam::s2:
        is2 = static_cast<int>(i);
        break;
    }
  }
  const ConstraintSet cs = constraint_set(id);
  auto kernel = [ip1, ip2, is2, cs](std::span<const double> x, std::span<const double> env,
                                    std::span<double> g) {
    const double p1 = ip1 >= 0 ? env[ip1] : 1.0;
    const double p2 = ip2 >= 0 ? env[ip2] : 1.0;
    const double s2 = is2 >= 0 ? env[is2] : 0.0;
    const double x1 = x[0], x2 = x[1];
    switch (cs) {
      case ConstraintSet::kBase:
        g[0] = g1(x1, x2);
        g[1] = g2(x1, x2);
        break;
      case ConstraintSet::kBaseAndCut:
        g[0] = g1(x1, x2);
        g[1] = g2(x1, x2);
        g[2] = g3(x1, x2, s2);
        break;
      case ConstraintSet::kCutAndWideBands:
        g[0] = g3(x1, x2, 0.0);
        g[1] = g4(x1);
        break;
      case ConstraintSet::kCutAndNarrowBands:
        g[0] = g3(x1, x2, 0.0);
        g[1] = g5(x1);
        break;
    }
    return -(p1 * x1 + p2 * x2);
  };
  return DcopProblem(std::string(t.name), Box({kX1Min, kX2Min}, {kX1Max, kX2Max}),
                     Box(std::move(lo), std::move(hi)), constraint_count(cs), kernel);
}

DcopProblem make_problem(std::string_view name) { return make_variant(parse_g24(name)); }

std::vector<std::string> registered_problems() {
  std::vector<std::string> names;
  for (const auto& t : all_traits()) names.emplace_back(t.name);
  return names;
}

EnvVector environment_at(G24Id id, int t, Severity severity) {
  using std::numbers::pi;
  const double k = severity.k;
  const double s2_step = (kX2Max - kX2Min) / severity.s;
  // Paired switching used by G24-2/5: p1 moves on even steps, p2 on odd ones.
  const int t_even = t - (t % 2);
  const int t_odd = (t % 2 == 1) ? t - 1 : t - 2;

  EnvVector env(traits(id).params.size());
  std::size_t i = 0;
  for (EnvParam p : traits(id).params) {
    double v = 0.0;
    switch (p) {
      case EnvParam::p1:
        if (id == G24Id::k2 || id == G24Id::k5) {
          v = std::sin(k * pi * t_even / 2.0 + pi / 2.0);
        } else if (id == G24Id::k6a || id == G24Id::k6c) {
          v = std::sin(pi * t + pi / 2.0);
        } else {
          v = std::sin(k * pi * t + pi / 2.0);
        }
        break;
      case EnvParam::p2:
        v = std::sin(k * pi * t_odd / 2.0 + pi / 2.0);
        break;
      case EnvParam::s2:
        v = s2_decreasing(id) ? 2.0 - t * s2_step : t * s2_step;
        break;
    }
    env[i++] = snap(v);
  }
  return env;
}

ChangeSchedule make_schedule(G24Id id, int num_changes, Severity severity) {
  if (num_changes < 1) throw std::invalid_argument("make_schedule: num_changes must be >= 1");
  ChangeSchedule schedule{id, severity, {}};
  schedule.envs.reserve(num_changes);
  for (int t = 0; t < num_changes; ++t) schedule.envs.push_back(environment_at(id, t, severity));
  return schedule;
}

}  // namespace ccdo
