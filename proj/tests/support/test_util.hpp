#pragma once

#include <cmath>
#include <filesystem>
#include <functional>
#include <random>
#include <string>

#include "adjamr/geometry.hpp"
#include "adjamr/solver.hpp"

namespace testutil {

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("adjamr_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string config_path(const std::string& name) {
  return std::string(ADJAMR_CONFIG_DIR) + "/" + name;
}

/// Sets every storage cell (interior and ghosts) from f(center, component).
inline void fill(adjamr::Patch& p, const std::function<double(adjamr::Point, int)>& f) {
  const adjamr::PatchSpec& s = p.spec();
  for (int j = s.lo[1] - s.ghost_y(); j <= s.hi[1] + s.ghost_y(); ++j) {
    for (int i = s.lo[0] - s.ghost_x(); i <= s.hi[0] + s.ghost_x(); ++i) {
      const adjamr::Point c = adjamr::cell_center(s, i, j);
      for (int k = 0; k < p.m(); ++k) p.at(i, j, k) = f(c, k);
    }
  }
}

inline double max_abs_diff(const adjamr::Patch& a, const adjamr::Patch& b) {
  double d = 0.0;
  const adjamr::PatchSpec& s = a.spec();
  for (int j = s.lo[1]; j <= s.hi[1]; ++j) {
    for (int i = s.lo[0]; i <= s.hi[0]; ++i) {
      for (int k = 0; k < a.m(); ++k) d = std::max(d, std::abs(a.at(i, j, k) - b.at(i, j, k)));
    }
  }
  return d;
}

inline double rel_err(double got, double want, double floor = 1.0) {
  return std::abs(got - want) / std::max(std::abs(want), floor);
}

}  // namespace testutil
