#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "vorstokes/continuation.hpp"
#include "vorstokes/vorticity.hpp"

namespace vorstokes {

struct VorticityConfig {
  std::string kind = "zero";  // zero | exp | gerstner | tabulated
  double amplitude = 1.0;     // exp: γ(0)
  double rate = 1.0;          // exp: r0
  double m = 0.5;             // gerstner
  double b0 = -1.0;           // gerstner: b(r) = b0 - slope·r
  double slope = 1.0;
  double rho = 1.0;
  std::vector<std::pair<double, double>> knots;  // tabulated (r, γ)

  VorticityModel build() const;
};

struct GridConfig {
  int nq = 64;
  int np = 200;
  double P = 0.0;  // 0 selects the default depth
};

struct Tolerances {
  double newton = 1e-10;
  double verify = 1e-10;
  double nekrasov = 1e-12;
};

struct NekrasovConfig {
  double nu = 4.0;
  int n = 400;
};

struct RunConfig {
  double g = 9.81;
  double L = M_PI;
  double delta = 1e-3;
  GridConfig grid;
  Caps caps;
  VorticityConfig vorticity;
  std::vector<double> epsilon_schedule{0.1, 0.05, 0.025, 0.0125};
  double s0 = 0.01;
  double step = 0.02;
  int max_steps = 30;
  double homotopy_s = 0.02;
  Tolerances tolerances;
  NekrasovConfig nekrasov;

  /// Throws ConfigError on the first violated invariant.
  void validate() const;
};

/// Reads `key = value` lines (`#` comments, optional `[section]` headers that
/// prefix keys with `section.`). Unknown keys are errors. Variables
/// VORSTOKES_<KEY> override the file, with `__` standing for `.` and the key
/// lower-cased (VORSTOKES_GRID__NQ sets grid.nq). An empty path reads only
/// the environment.
RunConfig parse_config(const std::string& path);

/// Same as parse_config but from text; `env` entries are NAME=VALUE strings
/// (the process environment when null).
RunConfig parse_config_text(const std::string& text, const char* const* env = nullptr);

/// Canonical key=value rendering, readable by parse_config_text.
std::string render_config(const RunConfig& config);

}  // namespace vorstokes
