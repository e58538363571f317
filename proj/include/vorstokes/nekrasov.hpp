#pragma once

#include <vector>

#include <Eigen/Dense>

#include "vorstokes/errors.hpp"
#include "vorstokes/wave_physics.hpp"

namespace vorstokes {

/// log|sin ½(s+t) / sin ½(s-t)| for s, t in (0, π), s ≠ t.
double nekrasov_kernel(double s, double t);

/// Product-integration weights on s_i = iπ/n: row i integrates K(s_i, ·)
/// against the piecewise-linear interpolant of nodal values, so that
/// ∫K(s_i,t) f(t) dt ≈ Σ_j W_ij f(t_j). Cells touching s_i use tanh-sinh.
Eigen::MatrixXd nekrasov_weights(int n);

struct NekrasovState {
  double nu = 0.0;
  int n_quad = 0;
  std::vector<double> s;      // iπ/n, i = 0..n
  std::vector<double> theta;  // θ(s_i), θ(0) = θ(π) = 0
  int iterations = 0;
  double update = 0.0;  // sup-norm of the last Picard update

  bool trivial(double tol = 1e-12) const;
  /// θ at any s by odd 2π-periodic extension and linear interpolation.
  double theta_at(double s) const;
};

/// Picard iteration ended with a non-finite or geometrically impossible
/// iterate (|θ| ≥ π/2 or a nonpositive denominator).
class NekrasovDivergence : public ConvergenceError {
 public:
  NekrasovDivergence(const std::string& what, NekrasovState last)
      : ConvergenceError(what, last.update), last_(std::move(last)) {}
  const NekrasovState& last() const noexcept { return last_; }

 private:
  NekrasovState last_;
};

struct NekrasovOptions {
  double damping = 0.5;
  int max_iter = 20000;
};

/// θ = (1/3π)∫₀^π K(s,t) sin θ(t) / (ν⁻¹ + ∫₀^t sin θ) dt by damped Picard
/// iteration from `start` (0.1 sin s when empty). Stops when the sup-norm
/// update drops below tol.
NekrasovState solve_nekrasov(double nu, int n_quad, double tol,
                             const std::vector<double>& start = {},
                             const NekrasovOptions& opt = {});

/// Right-hand side of the equation at the nodes, for residual checks.
std::vector<double> nekrasov_operator(const NekrasovState& state,
                                      const Eigen::MatrixXd& weights);

/// Multiplying the equation by sin s and integrating: since ∫K(s,t) sin s ds =
/// π sin t,  ∫θ sin s = (1/3)∫ sinθ sin t / (ν⁻¹ + ∫sinθ) dt < (ν/3)∫θ sin t,
/// which forces ν > 3.
struct NuBound {
  bool skipped = false;
  double lhs = 0.0;     // ∫θ(s) sin s ds
  double middle = 0.0;  // (1/3)∫ sinθ sin t / (ν⁻¹ + ∫₀^t sinθ) dt
  double rhs = 0.0;     // (ν/3)∫θ(t) sin t dt
  double ratio = 0.0;   // rhs / middle
  bool holds = false;   // middle < rhs
};
NuBound nu_bound_check(const NekrasovState& state);

/// Surface profile over one half period from crest (x = 0) to trough (x = L)
/// for gravity g: q³ = (3gcL/π)(ν⁻¹ + ∫sinθ), dx/ds = (cL/π) cos θ / q,
/// dy/ds = -(cL/π) sin θ / q, with c fixed by x(π) = L. y has zero mean.
struct NekrasovProfile {
  double c = 0.0;
  double crest_speed = 0.0;
  std::vector<double> x, y;
  double height() const;
};
NekrasovProfile nekrasov_profile(const NekrasovState& state, double g, double L);

/// Irrotational strip wave mapped to Nekrasov variables: ν = 3gcL/(π q_c³)
/// with q_c the crest speed, θ = arctan(-η_x) resampled onto s = π φ/(cL) with φ the
/// velocity potential along the surface measured from the crest.
NekrasovState nekrasov_from_wave(const PhysicalWave& wave, int n_quad);

struct ProfileComparison {
  double nu = 0.0;             // mapped from the strip wave's crest speed
  double nu_matched = 0.0;     // ν whose Nekrasov height equals the strip height
  double height_ratio = 0.0;   // Nekrasov height at the mapped ν / strip height
  double relative_sup = 0.0;   // profiles at nu_matched, mean-free, over sup|η_strip|
  double speed_ratio = 0.0;    // Nekrasov c at nu_matched / strip c
};

/// Compares the surface of an irrotational strip wave with the Nekrasov
/// profile of the same crest-to-trough height.
ProfileComparison compare_with_nekrasov(const PhysicalWave& wave, int n_quad = 400,
                                        double tol = 1e-12);

}  // namespace vorstokes
