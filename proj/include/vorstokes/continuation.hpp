#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vorstokes/strip.hpp"
#include "vorstokes/sturm_liouville.hpp"

namespace vorstokes {

/// A one-parameter family G(x, λ) = 0 with a sparse Jacobian in x. The
/// pseudo-arclength machinery below only sees this interface.
class ContinuationProblem {
 public:
  virtual ~ContinuationProblem() = default;
  virtual Eigen::Index size() const = 0;
  virtual Eigen::VectorXd residual(const Eigen::VectorXd& x, double lambda) const = 0;
  virtual SparseMatrix jacobian(const Eigen::VectorXd& x, double lambda) const = 0;
  virtual Eigen::VectorXd dlambda(const Eigen::VectorXd& x, double lambda) const = 0;
  virtual bool admissible(const Eigen::VectorXd&, double) const { return true; }
  virtual double residual_norm(const Eigen::VectorXd& x, double lambda) const {
    return residual(x, lambda).lpNorm<Eigen::Infinity>();
  }
};

struct BranchVector {
  Eigen::VectorXd x;
  double lambda = 0.0;
};

/// ⟨a, b⟩ = a_λ b_λ + (1/n) a_x·b_x.
double weighted_dot(const BranchVector& a, const BranchVector& b);

/// Unit tangent of the solution curve at z, oriented along `previous`:
/// solves [G_x G_λ; previousᵀW] t = [0; 1].
BranchVector tangent(const ContinuationProblem& prob, const BranchVector& z,
                     const BranchVector& previous);

struct CorrectorOptions {
  double tol = 1e-10;
  int max_iter = 12;
};

/// Newton on {G(z) = 0, ⟨t, z - z0⟩ = h} from the predictor z0 + h t.
/// Returns nullopt when the corrector fails or leaves the admissible set.
std::optional<BranchVector> palc_correct(const ContinuationProblem& prob, const BranchVector& z0,
                                         const BranchVector& t, double h,
                                         const CorrectorOptions& opt = {},
                                         int* iterations = nullptr);

/// G(x, λ) = F^ε(λ, w) with x the unknown rows of w.
class StripContinuation : public ContinuationProblem {
 public:
  StripContinuation(const StripProblem& prob, double epsilon) : prob_(prob), epsilon_(epsilon) {}
  Eigen::Index size() const override;
  Eigen::VectorXd residual(const Eigen::VectorXd& x, double lambda) const override;
  SparseMatrix jacobian(const Eigen::VectorXd& x, double lambda) const override;
  Eigen::VectorXd dlambda(const Eigen::VectorXd& x, double lambda) const override;
  bool admissible(const Eigen::VectorXd& x, double lambda) const override;
  double residual_norm(const Eigen::VectorXd& x, double lambda) const override;

  WaveState state(const BranchVector& z) const;
  static BranchVector vector(const WaveState& s);
  const StripProblem& problem() const noexcept { return prob_; }

 private:
  const StripProblem& prob_;
  double epsilon_;
};

enum class Termination {
  Running,
  MaxSteps,
  LambdaBlowup,
  SupWBlowup,
  SupWpBlowup,
  LambdaFloor,
  StagnationClause,
  SurfaceClause,
};

std::string to_string(Termination t);

struct Caps {
  double lambda_cap = 0.0;  // 0 means 100 gL/π
  double w_cap = 1e3;
  double wp_cap = 1e3;
};

/// Maps the last accepted state to the first alternative that holds:
/// λ ≥ λ_cap, sup|w| ≥ w_cap, sup w_p ≥ wp_cap, λ + 2Γ_inf ≤ δ,
/// min(a^{-1} + w_p) ≤ δ, max_T w ≥ (2λ - δ)/4g.
Termination classify_termination(const StripProblem& prob, const WaveState& state,
                                 const Caps& caps = {});

/// s Φ^ε(p) cos(πq/L) on the strip grid with λ = λ^ε; Φ^ε is zero below its
/// truncation depth and w vanishes on the bottom row.
WaveState initial_nontrivial_guess(const BifurcationPoint& bp, const StripGrid& grid, double s);

struct Branch {
  double epsilon = 0.0;
  std::vector<WaveState> points;
  std::vector<BranchVector> tangents;
  std::vector<double> coordinates;  // branch coordinate s per point
  Termination termination = Termination::Running;
  std::string diagnostic;
};

struct BranchOptions {
  double s0 = 0.01;          // first point, solved at fixed branch coordinate
  double step = 0.02;        // nominal arclength step in the weighted norm
  double min_step = 1e-6;
  int max_steps = 30;
  Caps caps;
  CorrectorOptions corrector;
  NewtonOptions newton;
};

/// One pseudo-arclength step from the last point of `branch`, halving the step
/// on failure down to opt.min_step. On success the new point and tangent are
/// appended and the accepted step length is returned; otherwise nullopt.
std::optional<double> arclength_step(const StripContinuation& cont, Branch& branch, double step,
                                     const BranchOptions& opt);

/// Traces the nontrivial branch emanating from bp: fixed-coordinate solve at
/// s0, then up to max_steps arclength steps until a termination clause fires.
Branch trace_branch(const StripProblem& prob, const BifurcationPoint& bp,
                    const BranchOptions& opt = {});

struct HomotopyOptions {
  int seed_steps = 4;  // fixed-coordinate substeps from 0 to target_s at the first ε
  NewtonOptions newton;
};

struct HomotopyResult {
  std::vector<double> schedule;
  std::vector<Branch> branches;        // one per ε actually reached
  std::vector<BifurcationPoint> bifurcation;
  std::vector<double> lambdas;         // λ at target_s per ε
  std::vector<double> differences;     // sup|w_k - w_{k+1}| between consecutive ε
  std::vector<double> lambda_drift;    // λ_k - λ_{k+1}
  std::optional<std::size_t> failure_index;
  std::string failure;
};

/// Continues to branch coordinate target_s at the first ε, then re-converges
/// at every smaller ε starting from the previous solution.
HomotopyResult epsilon_homotopy(const StripProblem& prob, const std::vector<double>& schedule,
                                double target_s, const HomotopyOptions& opt = {});

}  // namespace vorstokes
