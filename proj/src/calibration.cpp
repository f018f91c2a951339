#include "ccdo/calibration.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace ccdo {
namespace {

struct GridHit {
  double value;
  double x1, x2;
};

class Sampler {
 public:
  Sampler(const DcopProblem& problem, const EnvVector& env)
      : problem_(problem), env_(env), g_(problem.num_constraints()) {}

  // Objective if feasible, NaN otherwise.
  double feasible_value(double x1, double x2) {
    const std::array<double, 2> x{x1, x2};
    const double f = problem_.evaluate_raw(x, env_.span(), g_);
    return total_violation(g_) == 0.0 ? f : std::numeric_limits<double>::quiet_NaN();
  }

 private:
  const DcopProblem& problem_;
  const EnvVector& env_;
  std::vector<double> g_;
};

// sign = +1 looks for the minimum, -1 for the maximum.
GridHit zoom(Sampler& sampler, const Box& box, GridHit start, double cell, double sign,
             const CalibrationSettings& s) {
  GridHit best = start;
  while (cell > s.min_cell) {
    const double half = s.zoom_half_width * cell;
    const double lo1 = std::max(box.lower(0), best.x1 - half);
    const double hi1 = std::min(box.upper(0), best.x1 + half);
    const double lo2 = std::max(box.lower(1), best.x2 - half);
    const double hi2 = std::min(box.upper(1), best.x2 + half);
    const int n = s.zoom_points;
    const double step1 = (hi1 - lo1) / (n - 1);
    const double step2 = (hi2 - lo2) / (n - 1);
    for (int i = 0; i < n; ++i) {
      const double x1 = i == n - 1 ? hi1 : lo1 + i * step1;
      for (int j = 0; j < n; ++j) {
        const double x2 = j == n - 1 ? hi2 : lo2 + j * step2;
        const double v = sampler.feasible_value(x1, x2);
        if (!std::isnan(v) && sign * v < sign * best.value) best = {v, x1, x2};
      }
    }
    cell = std::max(step1, step2);
    if (cell == 0.0) break;
  }
  return best;
}

// Best `count` grid hits that are pairwise at least `separation` apart.
std::vector<GridHit> distinct_starts(std::vector<GridHit> hits, double sign, int count,
                                     double separation) {
  std::sort(hits.begin(), hits.end(),
            [sign](const GridHit& a, const GridHit& b) { return sign * a.value < sign * b.value; });
  std::vector<GridHit> out;
  for (const GridHit& h : hits) {
    bool far = std::all_of(out.begin(), out.end(), [&](const GridHit& o) {
      return std::hypot(o.x1 - h.x1, o.x2 - h.x2) >= separation;
    });
    if (far) out.push_back(h);
    if (static_cast<int>(out.size()) >= count) break;
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Calibration calibrate(const DcopProblem& problem, const EnvVector& env,
                      const CalibrationSettings& settings) {
  if (problem.dim_x() != 2) throw std::invalid_argument("calibrate: only 2-D problems supported");
  if (settings.resolution < 2) throw std::invalid_argument("calibrate: resolution too small");
  const Box& box = problem.x_bounds();
  Sampler sampler(problem, env);

  const int n = settings.resolution;
  const double step1 = box.width(0) / (n - 1);
  const double step2 = box.width(1) / (n - 1);
  // Keep a shortlist per extreme: each grid row contributes its row-best.
  std::vector<GridHit> row_min, row_max;
  row_min.reserve(n);
  row_max.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double x1 = i == n - 1 ? box.upper(0) : box.lower(0) + i * step1;
    GridHit lo{std::numeric_limits<double>::infinity(), 0, 0};
    GridHit hi{-std::numeric_limits<double>::infinity(), 0, 0};
    for (int j = 0; j < n; ++j) {
      const double x2 = j == n - 1 ? box.upper(1) : box.lower(1) + j * step2;
      const double v = sampler.feasible_value(x1, x2);
      if (std::isnan(v)) continue;
      if (v < lo.value) lo = {v, x1, x2};
      if (v > hi.value) hi = {v, x1, x2};
    }
    if (std::isfinite(lo.value)) {
      row_min.push_back(lo);
      row_max.push_back(hi);
    }
  }

  Calibration out;
  if (row_min.empty()) return out;
  out.has_feasible = true;
  const double cell = std::max(step1, step2);

  GridHit best{std::numeric_limits<double>::infinity(), 0, 0};
  for (const GridHit& h :
       distinct_starts(row_min, 1.0, settings.refine_starts, settings.start_separation)) {
    const GridHit r = zoom(sampler, box, h, cell, 1.0, settings);
    if (r.value < best.value) best = r;
  }
  GridHit worst{-std::numeric_limits<double>::infinity(), 0, 0};
  for (const GridHit& h :
       distinct_starts(row_max, -1.0, settings.refine_starts, settings.start_separation)) {
    const GridHit r = zoom(sampler, box, h, cell, -1.0, settings);
    if (r.value > worst.value) worst = r;
  }
  // + 0.0 turns a -0.0 objective into 0.0.
  out.best_feasible = best.value + 0.0;
  out.worst_feasible = worst.value + 0.0;
  out.best_point = SolutionVector{best.x1, best.x2};
  out.worst_point = SolutionVector{worst.x1, worst.x2};
  return out;
}

std::string CalibrationCache::key(const std::string& problem, const EnvVector& env) {
  std::string k = problem + "\t";
  for (std::size_t i = 0; i < env.size(); ++i) {
    char buf[64];
    // -0.0 and 0.0 must share a key.
    const double v = env[i] == 0.0 ? 0.0 : env[i];
    std::snprintf(buf, sizeof(buf), "%.12f", v);
    if (i > 0) k += ",";
    k += buf;
  }
  return k;
}

Calibration CalibrationCache::get(const DcopProblem& problem, const EnvVector& env) {
  const std::string k = key(problem.name(), env);
  {
    std::shared_lock lock(mutex_);
    if (auto it = entries_.find(k); it != entries_.end()) return it->second;
  }
  Calibration c = calibrate(problem, env, settings_);
  std::unique_lock lock(mutex_);
  return entries_.try_emplace(k, std::move(c)).first->second;
}

bool CalibrationCache::contains(const DcopProblem& problem, const EnvVector& env) const {
  std::shared_lock lock(mutex_);
  return entries_.count(key(problem.name(), env)) > 0;
}

std::size_t CalibrationCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

void CalibrationCache::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open calibration cache " + path.string());
  std::string line;
  std::unique_lock lock(mutex_);
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, '\t');) fields.push_back(f);
    if (fields.size() != 4) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": expected 4 tab-separated fields");
    }
    Calibration c;
    if (fields[2] != "none") {
      c.has_feasible = true;
      c.best_feasible = std::stod(fields[2]);
      c.worst_feasible = std::stod(fields[3]);
    }
    entries_[fields[0] + "\t" + fields[1]] = c;
  }
}

void CalibrationCache::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write calibration cache " + path.string());
  out << "# problem\tenv\tbest_feasible\tworst_feasible\n";
  std::shared_lock lock(mutex_);
  for (const auto& [k, c] : entries_) {
    out << k << '\t';
    if (c.has_feasible) {
      out << format_double(c.best_feasible) << '\t' << format_double(c.worst_feasible) << '\n';
    } else {
      out << "none\tnone\n";
    }
  }
}

}  // namespace ccdo
