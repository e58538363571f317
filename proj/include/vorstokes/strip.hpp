#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Sparse>

#include "vorstokes/errors.hpp"
#include "vorstokes/vorticity.hpp"

namespace vorstokes {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// HalfEven: q ∈ [-L, 0], nq nodes, evenness by reflection at both ends.
/// FullEven: q ∈ [-L, L) periodic, nq nodes (even), with explicit rows
/// w(q) = w(-q) for q > 0. Used to cross-check the reduced formulation.
enum class Symmetry { HalfEven, FullEven };

/// Uniform grid on the truncated strip. Row j = 0 is the free surface p = 0,
/// row j = np-1 the artificial bottom p = -P where w = 0.
struct StripGrid {
  double L = 3.141592653589793;
  double P = 1.0;
  int nq = 64;
  int np = 200;
  Symmetry symmetry = Symmetry::HalfEven;

  static StripGrid make(double L, int nq, int np, double P,
                        Symmetry symmetry = Symmetry::HalfEven);

  double dq() const;
  double dp() const;
  double q(int i) const;
  double p(int j) const { return -P * j / (np - 1); }
  std::size_t nodes() const { return static_cast<std::size_t>(nq) * np; }
  /// Rows 0..np-2 carry unknowns; index j*nq + i.
  std::size_t unknowns() const { return static_cast<std::size_t>(nq) * (np - 1); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nq + i; }
  /// Column index for q-neighbour i in [-1, nq] after reflection or wrap.
  int wrap(int i) const;
  /// The half grid with the same spacing as a FullEven grid (and vice versa).
  StripGrid half() const;
  StripGrid full() const;
};

/// Default truncation depth max(4L, 20 (λ_ref + 2Γ_sup)^{1/2} L/π): twenty
/// e-folding lengths of the linear mode e^{kp}, k = π/(L √λ).
double default_depth(double L, double lambda_ref, const VorticityFunctionals& fn);

struct WaveState {
  double lambda = 0.0;
  double epsilon = 0.0;
  StripGrid grid;
  std::vector<double> w;  // grid.nodes() values, row-major from the surface

  static WaveState trivial(const StripGrid& grid, double lambda, double epsilon);
  double at(int i, int j) const { return w[grid.index(i, j)]; }
  std::vector<double> surface() const;
  double sup_abs() const;
};

/// Finite-difference derivatives of w at every node (one-sided second order
/// on the top and bottom rows).
struct Derivatives {
  std::vector<double> wq, wp, wqq, wpp, wpq;
};

/// The discrete operator F^ε(λ, w) = (F₁ - εw, F₂) on a fixed grid for a fixed
/// vorticity, with its linearization and O_δ bookkeeping.
class StripProblem {
 public:
  StripProblem(VorticityModel model, double g, StripGrid grid, double delta = 1e-3);
  StripProblem(VorticityModel model, VorticityFunctionals fn, double g, StripGrid grid,
               double delta = 1e-3);

  const StripGrid& grid() const noexcept { return grid_; }
  const VorticityModel& model() const noexcept { return model_; }
  const VorticityFunctionals& functionals() const noexcept { return fn_; }
  double g() const noexcept { return g_; }
  double delta() const noexcept { return delta_; }

  /// γ(-p_j) and Γ(p_j) per row.
  double gamma_row(int j) const { return gamma_[j]; }
  double big_gamma_row(int j) const { return big_gamma_[j]; }
  /// a^{-1}(p_j; λ).
  double ainv(int j, double lambda) const;

  Derivatives derivatives(const WaveState& s) const;

  /// First violated O_δ clause, if any.
  std::optional<AdmissibilityError> admissibility(const WaveState& s) const;
  void check_admissible(const WaveState& s) const;

  /// F₁ - εw at every node of rows 1..np-2, index (j-1)*nq + i.
  std::vector<double> residual_f1(const WaveState& s) const;
  /// F₂ on the top row.
  std::vector<double> residual_f2(const WaveState& s) const;
  /// Full discrete residual in unknown ordering (FullEven symmetry rows included).
  Eigen::VectorXd residual(const WaveState& s) const;
  /// max(‖F₁ - εw‖∞, ‖F₂‖∞).
  double residual_norm(const WaveState& s) const;
  SparseMatrix jacobian(const WaveState& s) const;
  /// ∂F^ε/∂λ in unknown ordering.
  Eigen::VectorXd dlambda(const WaveState& s) const;

  /// Signed cosine coefficient of the surface trace,
  /// s = (1/L) ∫_{-L}^{L} w(q,0) cos(πq/L) dq.
  double branch_coordinate(const WaveState& s) const;
  /// Gradient of branch_coordinate in unknown ordering (it is linear in w).
  Eigen::VectorXd branch_coordinate_weights() const;

 private:
  VorticityModel model_;
  VorticityFunctionals fn_;
  double g_;
  double delta_;
  StripGrid grid_;
  std::vector<double> gamma_, big_gamma_;
};

struct NewtonOptions {
  double tol = 1e-10;
  int max_iter = 30;
  int max_halvings = 30;
};

struct NewtonReport {
  int iterations = 0;
  double residual = 0.0;
};

/// Newton's method for F^ε(λ, w) = 0 at fixed λ. Every iterate stays in O_δ
/// (step halving); throws AdmissibilityError for an inadmissible start and
/// ConvergenceError on divergence or a singular Jacobian.
WaveState newton_solve(const StripProblem& prob, WaveState initial, const NewtonOptions& opt = {},
                       NewtonReport* report = nullptr);

/// Newton on the bordered system {F^ε(λ, w) = 0, s(w) = target} with λ free.
WaveState solve_fixed_coordinate(const StripProblem& prob, WaveState initial, double target,
                                 const NewtonOptions& opt = {}, NewtonReport* report = nullptr);

/// ‖(F(w + tv) - F(w))/t - J v‖∞ / ‖J v‖∞ for a direction v in unknown
/// ordering; first order in t when the Jacobian is right.
double directional_fd_error(const StripProblem& prob, const WaveState& state,
                            const Eigen::VectorXd& v, double t);

/// Random smooth direction Σ c_nm cos(nπq/L) cos((2m+1)πp/2P), n < 4, m < 3, with
/// c_nm uniform on (-1, 1), scaled to unit sup norm; vanishes on the bottom row.
Eigen::VectorXd smooth_direction(const StripGrid& grid, std::mt19937_64& rng);

/// Samples a half-domain state onto a FullEven grid of equal spacing and back.
WaveState to_full(const WaveState& half);
WaveState to_half(const WaveState& full);

/// Bilinear transfer of a state to another grid of the same symmetry; zero
/// below the source depth.
WaveState resample(const WaveState& s, const StripGrid& target);

}  // namespace vorstokes
