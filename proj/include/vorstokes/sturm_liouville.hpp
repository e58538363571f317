#pragma once

#include <optional>
#include <span>
#include <vector>

#include "vorstokes/vorticity.hpp"

namespace vorstokes {

/// Half-line generalized eigenproblem that locates bifurcation from the
/// trivial branch:
///
///   -(a³ v')' + ε a³ v = μ a v   on -P_sl < p < 0,
///   λ^{3/2} v'(0) = g v(0),      v(-P_sl) = 0,
///
/// with a = a(p; λ). The bifurcation point λ^ε solves Λ^ε(λ) = -(π/L)².
struct SLProblem {
  VorticityModel model = VorticityModel::zero();
  VorticityFunctionals fn;
  double g = 9.81;
  double L = 3.141592653589793;
  double epsilon = 0.0;
  double depth = 0.0;  // P_sl
  int nodes = 2000;    // N intervals on [-P_sl, 0]

  /// Default truncation: P_sl = 20 / k_est with k_est = π / (L (λ_max + 2Γ_sup)^{1/2}).
  static SLProblem make(VorticityModel model, double g, double L, double epsilon,
                        int nodes = 2000);

  /// Upper end of the λ search window: 10 gL/π - 2Γ_inf.
  double lambda_max() const;
  /// Uniform grid p_i = -i P_sl / N, i = 0..N.
  std::vector<double> grid() const;
  /// Same problem with N doubled (and optionally a deeper truncation).
  SLProblem refined(int factor = 2, double depth_factor = 1.0) const;
};

struct BifurcationPoint {
  double epsilon = 0.0;
  double lambda_star = 0.0;
  double mu = 0.0;          // -(π/L)²
  std::vector<double> p;    // 0 = p_0 > p_1 > ... > p_N = -P_sl
  std::vector<double> phi;  // Φ^ε(p), Φ^ε(0) = 1

  /// Φ^ε at an arbitrary p <= 0 (monotone cubic interpolation, 0 below -P_sl).
  double phi_at(double p_query) const;
};

/// R^ε(v; λ) = (-g v(0)² + ∫a³(v')² + ε∫a³v²) / ∫a v², with v sampled on a
/// uniform decreasing grid starting at p = 0.
double rayleigh_quotient(const SLProblem& prob, double lambda, std::span<const double> p,
                         std::span<const double> v);

/// Lowest generalized eigenvalue Λ^ε(λ), or std::nullopt when it does not lie
/// below the continuous spectrum (Λ >= ε).
std::optional<double> lowest_eigenvalue(const SLProblem& prob, double lambda);

/// Λ^ε(λ) without the continuous-spectrum filter (Richardson-extrapolated
/// from grids N and 2N).
double discrete_lowest_eigenvalue(const SLProblem& prob, double lambda);

/// λ^ε with Λ^ε(λ^ε) = -(π/L)², by doubling bracket + bisection.
BifurcationPoint find_bifurcation_point(const SLProblem& prob);

/// Guaranteed exponential decay rate (λ+2Γ_inf)^{1/2} / (λ+2Γ_sup)^{3/2}.
double eigenfunction_decay_rate(const BifurcationPoint& bp, const VorticityFunctionals& fn);

}  // namespace vorstokes
