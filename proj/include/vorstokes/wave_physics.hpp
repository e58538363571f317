#pragma once

#include <string>
#include <vector>

#include "vorstokes/strip.hpp"

namespace vorstokes {

struct Check {
  std::string name;
  std::string ref;  // formula tag the check evaluates
  bool pass = true;
  bool skipped = false;
  double margin = 0.0;  // signed slack of the inequality (>= -tolerance passes)
  double tolerance = 0.0;
  std::string note;
};

struct VerifyReport {
  std::vector<Check> checks;
  bool trivial = false;

  bool passed() const;
  int pass_count() const;
  int fail_count() const;
  const Check* find(const std::string& name) const;
  void append(const VerifyReport& other);
};

/// Physical fields recovered from a half-domain state. Node arrays share the
/// WaveState layout (x = q_i, row j at p_j); tensor arrays are nx × ny with
/// NaN above the free surface.
struct PhysicalWave {
  double lambda = 0.0;
  double epsilon = 0.0;
  double g = 9.81;
  double c = 0.0;
  double L = 0.0;
  int nq = 0;
  int np = 0;

  std::vector<double> x;    // q_i on [-L, 0]
  std::vector<double> eta;  // η(x_i) = w(x_i, 0) - λ/2g

  std::vector<double> y, psi, psi_x, psi_y, pressure, bernoulli, big_gamma;
  std::vector<double> w;  // y - h_tr(p), the strip unknown
  /// Estimated discretization error of |∇ψ|² and ψ_y (second- vs fourth-order
  /// differences); verification tolerances are built from these.
  double speed_error = 0.0;
  double psi_y_error = 0.0;

  std::vector<double> grid_x, grid_y;
  std::vector<double> t_psi, t_psi_x, t_psi_y, t_pressure;  // index k*nx + i

  double node(const std::vector<double>& f, int i, int j) const {
    return f[static_cast<std::size_t>(j) * nq + i];
  }
};

/// Column-wise inversion of y = h_tr(p) + w(q, p); ny tensor rows (0: np).
/// Throws StagnationError if a column is not strictly increasing.
PhysicalWave reconstruct(const StripProblem& prob, const WaveState& state, int ny = 0);

struct VerifyOptions {
  double solver_tol = 1e-10;
};

/// w_q > 0 in R⁻ ∪ T⁻, w_qq > 0 on q = -L, w_qq < 0 on q = 0 (p < 0),
/// w_qq(-L, 0) > 0, w_qq(0, 0) < 0; one-node collar excluded.
VerifyReport verify_nodal(const StripProblem& prob, const WaveState& state);

struct DecayReport {
  VerifyReport report;
  double M = 0.0;
  double K = 0.0;
  double beta = 0.0;
  double sigma = 0.0;
  bool degenerate = false;
  double fitted_rate = 0.0;
  double linear_rate = 0.0;      // π / (L c), c² = λ + 2Γ_∞
  double linear_rate_eps = 0.0;  // √(linear_rate² + ε), the rate of the regularized problem
};

/// Exponential decay envelope |w_q| ≤ M(2 - e^{βq}) e^{σp} in R⁻ together with
/// the fitted tail rate of max_q |w_q(·, p)|. M <= 0 selects the norm
/// surrogate max(|w|, first and second differences).
DecayReport verify_decay(const StripProblem& prob, const WaveState& state, double M = 0.0);

/// σ > 0 with 2σ²(1+M²) + 4βσKM² - ½e^{-βL}KM² = 0 (bisection); 0 when KM² = 0.
double decay_sigma(double K, double M, double beta, double L);

/// ψ_y²(0,η(0)) ≤ |∇ψ|² - 2Γ(-ψ) ≤ ψ_y²(±L,η(±L)); crest value < λ < trough value.
VerifyReport verify_velocity_bounds(const StripProblem& prob, const PhysicalWave& wave,
                                    const VerifyOptions& opt = {});

/// Pressure estimates for B = ½|∇ψ|² + gy - Γ(-ψ), routed by the sign facts of
/// γ, plus surface monotonicity of ψ_y for γ ≤ 0.
VerifyReport verify_pressure(const StripProblem& prob, const PhysicalWave& wave,
                             const VerifyOptions& opt = {});

/// (2g)^{3/2}(|η(±L)|^{3/2} - |η(0)|^{3/2}) = |ψ_y(±L)|³ - |ψ_y(0)|³ ≤ 3g·cL and
/// the min-max ordering of ψ_y, for γ ≤ 0 (γ' ≥ 0 for the latter).
VerifyReport verify_amplitude_speed(const StripProblem& prob, const PhysicalWave& wave,
                                    const VerifyOptions& opt = {});

/// Surface Bernoulli identity, no stagnation, crest/trough ordering of η and
/// the far-field velocity ψ_y → -c.
VerifyReport verify_surface(const StripProblem& prob, const PhysicalWave& wave,
                            const VerifyOptions& opt = {});

/// Everything above for one state.
VerifyReport verify_all(const StripProblem& prob, const WaveState& state,
                        const VerifyOptions& opt = {});

/// max |Δψ + γ(ψ) + εwψ_y³| over interior hodograph nodes. The regularized
/// strip equation is Δψ + γ(ψ) = -εwψ_y³, so this measures discretization error;
/// the unregularized residual differs by that O(ε) term.
double stream_residual(const PhysicalWave& wave, const VorticityModel& model);

/// Where the relative flow speed |∇ψ| is smallest: "crest", "surface" or "depth".
struct SpeedMinimum {
  double value = 0.0;
  std::string location;
};
SpeedMinimum min_relative_speed(const PhysicalWave& wave);

}  // namespace vorstokes
