#pragma once

#include <filesystem>
#include <map>
#include <shared_mutex>
#include <string>
#include <vector>

#include "ccdo/problem.hpp"

namespace ccdo {

/// Best and worst objective values a feasible point can reach in one fixed
/// environment, estimated by dense grid sampling plus zoomed re-gridding.
struct Calibration {
  bool has_feasible = false;
  double best_feasible = 0.0;
  double worst_feasible = 0.0;
  SolutionVector best_point;
  SolutionVector worst_point;
};

struct CalibrationSettings {
  int resolution = 1001;     // grid points per axis, >= 1000 cells
  int refine_starts = 4;     // distinct grid cells refined per extreme
  int zoom_half_width = 8;   // window half width, in current cells
  int zoom_points = 65;      // points per axis inside a zoom window
  double min_cell = 1e-12;   // refinement stops below this cell size
  double start_separation = 0.05;
};

/// Only two-dimensional decision spaces are supported; throws otherwise.
Calibration calibrate(const DcopProblem& problem, const EnvVector& env,
                      const CalibrationSettings& settings = {});

/// Thread-safe memo of calibrations keyed by (problem, env rounded to 12 decimals).
/// Persisted as text, one record per line:
///   <problem>\t<c1,c2,...>\t<best>\t<worst>
/// with "none\tnone" for environments without a feasible grid point.
class CalibrationCache {
 public:
  explicit CalibrationCache(CalibrationSettings settings = {}) : settings_(settings) {}

  Calibration get(const DcopProblem& problem, const EnvVector& env);
  bool contains(const DcopProblem& problem, const EnvVector& env) const;
  std::size_t size() const;

  void load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  static std::string key(const std::string& problem, const EnvVector& env);
  const CalibrationSettings& settings() const { return settings_; }

 private:
  CalibrationSettings settings_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, Calibration> entries_;
};

}  // namespace ccdo
