#include "vorstokes/continuation.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SparseLU>

namespace vorstokes {

namespace {

using Triplet = Eigen::Triplet<double>;

// Solves [A col; rowᵀ corner] [y; μ] = [rhs; last].
bool bordered_solve(const SparseMatrix& A, const Eigen::VectorXd& col, const Eigen::VectorXd& row,
                    double corner, const Eigen::VectorXd& rhs, double last, Eigen::VectorXd& y,
                    double& mu) {
  const auto n = static_cast<int>(A.rows());
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(A.nonZeros()) + 2 * static_cast<std::size_t>(n) + 1);
  for (int k = 0; k < A.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(A, k); it; ++it) {
      trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    }
  }
  for (int k = 0; k < n; ++k) {
    if (col[k] != 0.0) trip.emplace_back(k, n, col[k]);
    if (row[k] != 0.0) trip.emplace_back(n, k, row[k]);
  }
  if (corner != 0.0) trip.emplace_back(n, n, corner);
  SparseMatrix B(n + 1, n + 1);
  B.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<SparseMatrix> lu;
  lu.compute(B);
  if (lu.info() != Eigen::Success) return false;
  Eigen::VectorXd b(n + 1);
  b.head(n) = rhs;
  b[n] = last;
  Eigen::VectorXd x = lu.solve(b);
  if (lu.info() != Eigen::Success || !x.allFinite()) return false;
  y = x.head(n);
  mu = x[n];
  return true;
}

BranchVector normalized(BranchVector t) {
  double nrm = std::sqrt(weighted_dot(t, t));
  t.x /= nrm;
  t.lambda /= nrm;
  return t;
}

}  // namespace

double weighted_dot(const BranchVector& a, const BranchVector& b) {
  const double n = static_cast<double>(std::max<Eigen::Index>(a.x.size(), 1));
  return a.lambda * b.lambda + a.x.dot(b.x) / n;
}

BranchVector tangent(const ContinuationProblem& prob, const BranchVector& z,
                     const BranchVector& previous) {
  const double n = static_cast<double>(prob.size());
  Eigen::VectorXd row = previous.x / n;
  BranchVector t;
  if (!bordered_solve(prob.jacobian(z.x, z.lambda), prob.dlambda(z.x, z.lambda), row,
                      previous.lambda, Eigen::VectorXd::Zero(prob.size()), 1.0, t.x, t.lambda)) {
    throw ConvergenceError("tangent: singular bordered system");
  }
  return normalized(t);
}

std::optional<BranchVector> palc_correct(const ContinuationProblem& prob, const BranchVector& z0,
                                         const BranchVector& t, double h,
                                         const CorrectorOptions& opt, int* iterations) {
  const double n = static_cast<double>(prob.size());
  BranchVector z{z0.x + h * t.x, z0.lambda + h * t.lambda};
  const Eigen::VectorXd row = t.x / n;
  for (int it = 0; it <= opt.max_iter; ++it) {
    if (!prob.admissible(z.x, z.lambda)) return std::nullopt;
    BranchVector d{z.x - z0.x, z.lambda - z0.lambda};
    double arc = weighted_dot(t, d) - h;
    double res = prob.residual_norm(z.x, z.lambda);
    if (!std::isfinite(res)) return std::nullopt;
    if (res <= opt.tol && std::abs(arc) <= opt.tol) {
      if (iterations) *iterations = it;
      return z;
    }
    if (it == opt.max_iter) break;
    Eigen::VectorXd dx;
    double dl = 0.0;
    if (!bordered_solve(prob.jacobian(z.x, z.lambda), prob.dlambda(z.x, z.lambda), row, t.lambda,
                        -prob.residual(z.x, z.lambda), -arc, dx, dl)) {
      return std::nullopt;
    }
    z.x += dx;
    z.lambda += dl;
  }
  return std::nullopt;
}

Eigen::Index StripContinuation::size() const {
  return static_cast<Eigen::Index>(prob_.grid().unknowns());
}

WaveState StripContinuation::state(const BranchVector& z) const {
  WaveState s = WaveState::trivial(prob_.grid(), z.lambda, epsilon_);
  std::copy(z.x.data(), z.x.data() + z.x.size(), s.w.begin());
  return s;
}

BranchVector StripContinuation::vector(const WaveState& s) {
  BranchVector z;
  z.lambda = s.lambda;
  z.x = Eigen::Map<const Eigen::VectorXd>(s.w.data(),
                                          static_cast<Eigen::Index>(s.grid.unknowns()));
  return z;
}

Eigen::VectorXd StripContinuation::residual(const Eigen::VectorXd& x, double lambda) const {
  return prob_.residual(state({x, lambda}));
}

SparseMatrix StripContinuation::jacobian(const Eigen::VectorXd& x, double lambda) const {
  return prob_.jacobian(state({x, lambda}));
}

Eigen::VectorXd StripContinuation::dlambda(const Eigen::VectorXd& x, double lambda) const {
  return prob_.dlambda(state({x, lambda}));
}

bool StripContinuation::admissible(const Eigen::VectorXd& x, double lambda) const {
  return !prob_.admissibility(state({x, lambda}));
}

double StripContinuation::residual_norm(const Eigen::VectorXd& x, double lambda) const {
  return prob_.residual_norm(state({x, lambda}));
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::Running: return "Running";
    case Termination::MaxSteps: return "MaxSteps";
    case Termination::LambdaBlowup: return "LambdaBlowup";
    case Termination::SupWBlowup: return "SupWBlowup";
    case Termination::SupWpBlowup: return "SupWpBlowup";
    case Termination::LambdaFloor: return "LambdaFloor";
    case Termination::StagnationClause: return "StagnationClause";
    case Termination::SurfaceClause: return "SurfaceClause";
  }
  return "Unknown";
}

Termination classify_termination(const StripProblem& prob, const WaveState& s, const Caps& caps) {
  const StripGrid& g = s.grid;
  const double delta = prob.delta();
  const double lambda_cap = caps.lambda_cap > 0 ? caps.lambda_cap : 100.0 * prob.g() * g.L / M_PI;
  if (s.lambda >= lambda_cap) return Termination::LambdaBlowup;
  if (s.sup_abs() >= caps.w_cap) return Termination::SupWBlowup;
  auto d = prob.derivatives(s);
  double wp_max = -INFINITY;
  for (double v : d.wp) wp_max = std::max(wp_max, v);
  if (wp_max >= caps.wp_cap) return Termination::SupWpBlowup;
  if (s.lambda + 2.0 * prob.functionals().gamma_inf_bound <= delta) return Termination::LambdaFloor;
  for (int j = 0; j < g.np; ++j) {
    const double ai = 1.0 / std::sqrt(s.lambda + 2.0 * prob.big_gamma_row(j));
    for (int i = 0; i < g.nq; ++i) {
      if (ai + d.wp[g.index(i, j)] <= delta) return Termination::StagnationClause;
    }
  }
  const double surf = (2.0 * s.lambda - delta) / (4.0 * prob.g());
  for (int i = 0; i < g.nq; ++i) {
    if (s.at(i, 0) >= surf) return Termination::SurfaceClause;
  }
  return Termination::Running;
}

WaveState initial_nontrivial_guess(const BifurcationPoint& bp, const StripGrid& grid, double s) {
  WaveState st = WaveState::trivial(grid, bp.lambda_star, bp.epsilon);
  if (s == 0.0) return st;
  for (int j = 0; j < grid.np - 1; ++j) {
    const double amp = s * bp.phi_at(grid.p(j));
    for (int i = 0; i < grid.nq; ++i) {
      st.w[grid.index(i, j)] = amp * std::cos(M_PI * grid.q(i) / grid.L);
    }
  }
  return st;
}

std::optional<double> arclength_step(const StripContinuation& cont, Branch& branch, double step,
                                     const BranchOptions& opt) {
  const BranchVector z0 = StripContinuation::vector(branch.points.back());
  const BranchVector& t = branch.tangents.back();
  for (double h = step; h >= opt.min_step; h *= 0.5) {
    auto z = palc_correct(cont, z0, t, h, opt.corrector);
    if (!z) continue;
    WaveState s = cont.state(*z);
    const double coord = cont.problem().branch_coordinate(s);
    // A corrector that lands back on the trivial branch has switched branches.
    if (std::abs(coord) < 0.5 * std::abs(branch.coordinates.back())) continue;
    BranchVector tn = tangent(cont, *z, t);
    branch.coordinates.push_back(coord);
    branch.points.push_back(std::move(s));
    branch.tangents.push_back(std::move(tn));
    return h;
  }
  return std::nullopt;
}

Branch trace_branch(const StripProblem& prob, const BifurcationPoint& bp,
                    const BranchOptions& opt) {
  Branch br;
  br.epsilon = bp.epsilon;
  StripContinuation cont(prob, bp.epsilon);
  WaveState first =
      solve_fixed_coordinate(prob, initial_nontrivial_guess(bp, prob.grid(), opt.s0), opt.s0,
                             opt.newton);
  br.termination = classify_termination(prob, first, opt.caps);
  br.coordinates.push_back(prob.branch_coordinate(first));
  br.points.push_back(first);

  // Initial orientation: increasing branch coordinate, via [J F_λ; c 0] t = [0; 1].
  const Eigen::Index n = cont.size();
  BranchVector t0;
  {
    BranchVector z = StripContinuation::vector(first);
    Eigen::VectorXd c = prob.branch_coordinate_weights();
    if (!bordered_solve(cont.jacobian(z.x, z.lambda), cont.dlambda(z.x, z.lambda), c, 0.0,
                        Eigen::VectorXd::Zero(n), 1.0, t0.x, t0.lambda)) {
      throw ConvergenceError("trace_branch: singular system for the initial tangent");
    }
    t0 = normalized(t0);
    if (opt.s0 < 0) {
      t0.x = -t0.x;
      t0.lambda = -t0.lambda;
    }
  }
  br.tangents.push_back(t0);
  if (br.termination != Termination::Running) {
    br.diagnostic = "first point already meets a termination clause";
    return br;
  }

  double h = opt.step;
  for (int k = 0; k < opt.max_steps; ++k) {
    Branch trial = br;
    auto accepted = arclength_step(cont, trial, h, opt);
    if (!accepted) {
      br.termination = Termination::MaxSteps;
      br.diagnostic = "arclength step fell below the floor after " + std::to_string(k) + " steps";
      return br;
    }
    Termination term = classify_termination(prob, trial.points.back(), opt.caps);
    if (term != Termination::Running) {
      br.termination = term;
      br.diagnostic = "clause met by the predictor-corrector point after " + std::to_string(k) +
                      " accepted steps";
      return br;
    }
    br = std::move(trial);
    // Recover toward the nominal step after a successful halved step.
    h = std::min(opt.step, 2.0 * *accepted);
  }
  br.termination = Termination::MaxSteps;
  br.diagnostic = "step budget exhausted";
  return br;
}

HomotopyResult epsilon_homotopy(const StripProblem& prob, const std::vector<double>& schedule,
                                double target_s, const HomotopyOptions& opt) {
  if (schedule.empty()) throw DomainError("epsilon_homotopy: empty schedule");
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    if (!(schedule[k] > 0 && schedule[k] < 1) || (k > 0 && !(schedule[k] < schedule[k - 1]))) {
      throw DomainError("epsilon_homotopy: schedule must decrease strictly inside (0, 1)");
    }
  }
  HomotopyResult out;
  out.schedule = schedule;
  const double L = prob.grid().L;
  std::optional<WaveState> prev;
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    const double eps = schedule[k];
    Branch br;
    br.epsilon = eps;
    try {
      auto bp = find_bifurcation_point(SLProblem::make(prob.model(), prob.g(), L, eps));
      out.bifurcation.push_back(bp);
      WaveState sol;
      if (target_s == 0.0) {
        sol = WaveState::trivial(prob.grid(), bp.lambda_star, eps);
        br.points.push_back(sol);
      } else if (!prev) {
        const int m = std::max(1, opt.seed_steps);
        WaveState cur = initial_nontrivial_guess(bp, prob.grid(), target_s / m);
        for (int i = 1; i <= m; ++i) {
          const double s = target_s * i / m;
          cur = solve_fixed_coordinate(prob, std::move(cur), s, opt.newton);
          br.points.push_back(cur);
          br.coordinates.push_back(s);
        }
        sol = cur;
      } else {
        WaveState start = *prev;
        start.epsilon = eps;
        sol = solve_fixed_coordinate(prob, std::move(start), target_s, opt.newton);
        br.points.push_back(sol);
        br.coordinates.push_back(target_s);
      }
      br.termination = Termination::Running;
      out.lambdas.push_back(sol.lambda);
      if (prev) {
        double diff = 0.0;
        for (std::size_t i = 0; i < sol.w.size(); ++i) {
          diff = std::max(diff, std::abs(sol.w[i] - prev->w[i]));
        }
        out.differences.push_back(diff);
        out.lambda_drift.push_back(prev->lambda - sol.lambda);
      }
      prev = sol;
      out.branches.push_back(std::move(br));
    } catch (const std::exception& e) {
      out.failure_index = k;
      out.failure = e.what();
      break;
    }
  }
  return out;
}

}  // namespace vorstokes
