#include "vorstokes/strip.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include <Eigen/SparseLU>

namespace vorstokes {

namespace {

using Triplet = Eigen::Triplet<double>;

// Row j is "constraint" (w(q) = w(-q)) in FullEven mode for q > 0.
bool is_mirror_row(const StripGrid& g, int i) {
  return g.symmetry == Symmetry::FullEven && i > g.nq / 2;
}

int mirror(const StripGrid& g, int i) { return (g.nq - i) % g.nq; }

std::string node_name(const StripGrid& g, int i, int j) {
  std::ostringstream os;
  os << "node (i=" << i << ", j=" << j << ", q=" << g.q(i) << ", p=" << g.p(j) << ")";
  return os.str();
}

struct Local {
  double wq, wp, wqq, wpp, wpq, w;
};

// Central differences at an interior node 1 <= j <= np-2.
Local interior(const WaveState& s, int i, int j) {
  const StripGrid& g = s.grid;
  const double dq = g.dq(), dp = g.dp();
  const int im = g.wrap(i - 1), ip = g.wrap(i + 1);
  auto w = [&](int ii, int jj) { return s.w[g.index(ii, jj)]; };
  Local l;
  l.w = w(i, j);
  l.wq = (w(ip, j) - w(im, j)) / (2.0 * dq);
  l.wqq = (w(ip, j) - 2.0 * l.w + w(im, j)) / (dq * dq);
  // p decreases with j.
  l.wp = (w(i, j - 1) - w(i, j + 1)) / (2.0 * dp);
  l.wpp = (w(i, j - 1) - 2.0 * l.w + w(i, j + 1)) / (dp * dp);
  l.wpq = (w(ip, j - 1) - w(im, j - 1) - w(ip, j + 1) + w(im, j + 1)) / (4.0 * dq * dp);
  return l;
}

struct Top {
  double w, wq, wp;
};

Top top(const WaveState& s, int i) {
  const StripGrid& g = s.grid;
  const int im = g.wrap(i - 1), ip = g.wrap(i + 1);
  auto w = [&](int ii, int jj) { return s.w[g.index(ii, jj)]; };
  Top t;
  t.w = w(i, 0);
  t.wq = (w(ip, 0) - w(im, 0)) / (2.0 * g.dq());
  t.wp = (3.0 * w(i, 0) - 4.0 * w(i, 1) + w(i, 2)) / (2.0 * g.dp());
  return t;
}

}  // namespace

StripGrid StripGrid::make(double L, int nq, int np, double P, Symmetry symmetry) {
  if (!(L > 0) || !(P > 0)) throw DomainError("StripGrid: L and P must be positive");
  if (nq < 8 || np < 8) throw DomainError("StripGrid: nq and np must be at least 8");
  if (symmetry == Symmetry::FullEven && nq % 2 != 0) {
    throw DomainError("StripGrid: FullEven grids need an even node count");
  }
  StripGrid g;
  g.L = L;
  g.P = P;
  g.nq = nq;
  g.np = np;
  g.symmetry = symmetry;
  return g;
}

double StripGrid::dq() const {
  return symmetry == Symmetry::HalfEven ? L / (nq - 1) : 2.0 * L / nq;
}

double StripGrid::dp() const { return P / (np - 1); }

double StripGrid::q(int i) const { return -L + i * dq(); }

int StripGrid::wrap(int i) const {
  if (symmetry == Symmetry::HalfEven) {
    if (i < 0) return -i;
    if (i >= nq) return 2 * (nq - 1) - i;
    return i;
  }
  return ((i % nq) + nq) % nq;
}

StripGrid StripGrid::half() const {
  if (symmetry == Symmetry::HalfEven) return *this;
  return make(L, nq / 2 + 1, np, P, Symmetry::HalfEven);
}

StripGrid StripGrid::full() const {
  if (symmetry == Symmetry::FullEven) return *this;
  return make(L, 2 * (nq - 1), np, P, Symmetry::FullEven);
}

double default_depth(double L, double lambda_ref, const VorticityFunctionals& fn) {
  double arg = lambda_ref + 2.0 * fn.gamma_sup_bound;
  if (!(arg > 0)) throw DomainError("default_depth: lambda_ref + 2 Gamma_sup must be positive");
  return std::max(4.0 * L, 20.0 * std::sqrt(arg) * L / M_PI);
}

WaveState WaveState::trivial(const StripGrid& grid, double lambda, double epsilon) {
  WaveState s;
  s.lambda = lambda;
  s.epsilon = epsilon;
  s.grid = grid;
  s.w.assign(grid.nodes(), 0.0);
  return s;
}

std::vector<double> WaveState::surface() const { return {w.begin(), w.begin() + grid.nq}; }

double WaveState::sup_abs() const {
  double m = 0.0;
  for (double v : w) m = std::max(m, std::abs(v));
  return m;
}

StripProblem::StripProblem(VorticityModel model, double g, StripGrid grid, double delta)
    : StripProblem(model, vorstokes::functionals(model), g, grid, delta) {}

StripProblem::StripProblem(VorticityModel model, VorticityFunctionals fn, double g,
                           StripGrid grid, double delta)
    : model_(std::move(model)), fn_(fn), g_(g), delta_(delta), grid_(grid) {
  if (!(g > 0)) throw DomainError("StripProblem: g must be positive");
  if (!(delta > 0)) throw DomainError("StripProblem: delta must be positive");
  std::vector<double> p(grid_.np);
  for (int j = 0; j < grid_.np; ++j) p[j] = grid_.p(j);
  big_gamma_ = big_gamma_table(model_, p);
  gamma_.resize(grid_.np);
  for (int j = 0; j < grid_.np; ++j) gamma_[j] = model_.gamma(-p[j]);
}

double StripProblem::ainv(int j, double lambda) const {
  double arg = lambda + 2.0 * big_gamma_[j];
  if (!(arg > 0)) throw StagnationError("strip: lambda + 2 Gamma(p) <= 0 at row " + std::to_string(j));
  return 1.0 / std::sqrt(arg);
}

Derivatives StripProblem::derivatives(const WaveState& s) const {
  const StripGrid& g = s.grid;
  const int nq = g.nq, np = g.np;
  const double dq = g.dq(), dp = g.dp();
  Derivatives d;
  for (auto* v : {&d.wq, &d.wp, &d.wqq, &d.wpp, &d.wpq}) v->assign(g.nodes(), 0.0);
  auto w = [&](int i, int j) { return s.w[g.index(i, j)]; };
  for (int j = 0; j < np; ++j) {
    for (int i = 0; i < nq; ++i) {
      const int im = g.wrap(i - 1), ip = g.wrap(i + 1);
      const std::size_t k = g.index(i, j);
      d.wq[k] = (w(ip, j) - w(im, j)) / (2.0 * dq);
      d.wqq[k] = (w(ip, j) - 2.0 * w(i, j) + w(im, j)) / (dq * dq);
    }
  }
  // One-sided p-stencils at the ends, written for a column f_0..f_{np-1} with
  // p decreasing along the column.
  auto p_derivs = [&](const std::vector<double>& f, int i, double& fp, double& fpp, int j) {
    auto v = [&](int jj) { return f[g.index(i, jj)]; };
    if (j == 0) {
      fp = (3.0 * v(0) - 4.0 * v(1) + v(2)) / (2.0 * dp);
      fpp = (2.0 * v(0) - 5.0 * v(1) + 4.0 * v(2) - v(3)) / (dp * dp);
    } else if (j == np - 1) {
      fp = (-3.0 * v(np - 1) + 4.0 * v(np - 2) - v(np - 3)) / (2.0 * dp);
      fpp = (2.0 * v(np - 1) - 5.0 * v(np - 2) + 4.0 * v(np - 3) - v(np - 4)) / (dp * dp);
    } else {
      fp = (v(j - 1) - v(j + 1)) / (2.0 * dp);
      fpp = (v(j - 1) - 2.0 * v(j) + v(j + 1)) / (dp * dp);
    }
  };
  double unused = 0.0;
  for (int j = 0; j < np; ++j) {
    for (int i = 0; i < nq; ++i) {
      const std::size_t k = g.index(i, j);
      p_derivs(s.w, i, d.wp[k], d.wpp[k], j);
      p_derivs(d.wq, i, d.wpq[k], unused, j);
    }
  }
  return d;
}

std::optional<AdmissibilityError> StripProblem::admissibility(const WaveState& s) const {
  const StripGrid& g = s.grid;
  const double floor = -2.0 * fn_.gamma_inf_bound + delta_;
  if (!(s.lambda > floor)) {
    return AdmissibilityError("O_delta clause 1: lambda = " + std::to_string(s.lambda) +
                                  " <= -2 Gamma_inf + delta = " + std::to_string(floor),
                              1);
  }
  if (s.w.size() != g.nodes()) throw DomainError("WaveState: field size does not match grid");
  for (double v : s.w) {
    if (!std::isfinite(v)) return AdmissibilityError("O_delta: non-finite w", 2);
  }
  auto d = derivatives(s);
  for (int j = 0; j < g.np; ++j) {
    const double ai = ainv(j, s.lambda);
    for (int i = 0; i < g.nq; ++i) {
      double h = ai + d.wp[g.index(i, j)];
      if (!(h > delta_)) {
        return AdmissibilityError("O_delta clause 2: a^-1 + w_p = " + std::to_string(h) +
                                      " <= delta at " + node_name(g, i, j),
                                  2, i, j);
      }
    }
  }
  const double surf = (2.0 * s.lambda - delta_) / (4.0 * g_);
  for (int i = 0; i < g.nq; ++i) {
    if (!(s.at(i, 0) < surf)) {
      return AdmissibilityError("O_delta clause 3: w = " + std::to_string(s.at(i, 0)) +
                                    " >= (2 lambda - delta)/4g on the surface at " +
                                    node_name(g, i, 0),
                                3, i, 0);
    }
  }
  return std::nullopt;
}

void StripProblem::check_admissible(const WaveState& s) const {
  if (auto err = admissibility(s)) throw *err;
}

std::vector<double> StripProblem::residual_f1(const WaveState& s) const {
  const StripGrid& g = s.grid;
  std::vector<double> out(static_cast<std::size_t>(g.nq) * (g.np - 2));
  for (int j = 1; j < g.np - 1; ++j) {
    const double ai = ainv(j, s.lambda);
    const double ai3 = ai * ai * ai;
    const double gam = gamma_[j];
    for (int i = 0; i < g.nq; ++i) {
      Local l = interior(s, i, j);
      const double h = ai + l.wp;
      const double wq2 = 1.0 + l.wq * l.wq;
      out[static_cast<std::size_t>(j - 1) * g.nq + i] =
          wq2 * l.wpp - 2.0 * h * l.wq * l.wpq + h * h * l.wqq + gam * (h * h * h) -
          gam * ai3 * wq2 - s.epsilon * l.w;
    }
  }
  return out;
}

std::vector<double> StripProblem::residual_f2(const WaveState& s) const {
  const StripGrid& g = s.grid;
  std::vector<double> out(g.nq);
  const double lr = 1.0 / std::sqrt(s.lambda);
  for (int i = 0; i < g.nq; ++i) {
    Top t = top(s, i);
    const double h0 = lr + t.wp;
    out[i] = 1.0 + (2.0 * g_ * t.w - s.lambda) * h0 * h0 + t.wq * t.wq;
  }
  return out;
}

Eigen::VectorXd StripProblem::residual(const WaveState& s) const {
  const StripGrid& g = s.grid;
  Eigen::VectorXd r(static_cast<Eigen::Index>(g.unknowns()));
  auto f1 = residual_f1(s);
  auto f2 = residual_f2(s);
  for (int i = 0; i < g.nq; ++i) r[i] = f2[i];
  for (int j = 1; j < g.np - 1; ++j) {
    for (int i = 0; i < g.nq; ++i) {
      r[static_cast<Eigen::Index>(g.index(i, j))] = f1[static_cast<std::size_t>(j - 1) * g.nq + i];
    }
  }
  if (g.symmetry == Symmetry::FullEven) {
    for (int j = 0; j < g.np - 1; ++j) {
      for (int i = g.nq / 2 + 1; i < g.nq; ++i) {
        r[static_cast<Eigen::Index>(g.index(i, j))] = s.at(i, j) - s.at(mirror(g, i), j);
      }
    }
  }
  return r;
}

double StripProblem::residual_norm(const WaveState& s) const {
  double m = 0.0;
  for (double v : residual_f1(s)) m = std::max(m, std::abs(v));
  for (double v : residual_f2(s)) m = std::max(m, std::abs(v));
  return m;
}

SparseMatrix StripProblem::jacobian(const WaveState& s) const {
  const StripGrid& g = s.grid;
  const int nq = g.nq, np = g.np;
  const double dq = g.dq(), dp = g.dp();
  std::vector<Triplet> trip;
  trip.reserve(g.unknowns() * 9);
  auto add = [&](std::size_t row, int i, int j, double c) {
    if (j >= np - 1 || c == 0.0) return;  // bottom row is Dirichlet
    trip.emplace_back(static_cast<int>(row), static_cast<int>(g.index(g.wrap(i), j)), c);
  };
  const double lr = 1.0 / std::sqrt(s.lambda);
  for (int i = 0; i < nq; ++i) {
    const std::size_t row = g.index(i, 0);
    if (is_mirror_row(g, i)) {
      add(row, i, 0, 1.0);
      add(row, mirror(g, i), 0, -1.0);
      continue;
    }
    Top t = top(s, i);
    const double h0 = lr + t.wp;
    const double c_p = 2.0 * (2.0 * g_ * t.w - s.lambda) * h0;
    const double c_q = 2.0 * t.wq;
    const double c_0 = 2.0 * g_ * h0 * h0;
    add(row, i, 0, c_0 + c_p * 3.0 / (2.0 * dp));
    add(row, i, 1, -c_p * 4.0 / (2.0 * dp));
    add(row, i, 2, c_p / (2.0 * dp));
    add(row, i + 1, 0, c_q / (2.0 * dq));
    add(row, i - 1, 0, -c_q / (2.0 * dq));
  }
  for (int j = 1; j < np - 1; ++j) {
    const double ai = ainv(j, s.lambda);
    const double ai3 = ai * ai * ai;
    const double gam = gamma_[j];
    for (int i = 0; i < nq; ++i) {
      const std::size_t row = g.index(i, j);
      if (is_mirror_row(g, i)) {
        add(row, i, j, 1.0);
        add(row, mirror(g, i), j, -1.0);
        continue;
      }
      Local l = interior(s, i, j);
      const double h = ai + l.wp;
      const double c_pp = 1.0 + l.wq * l.wq;
      const double c_pq = -2.0 * h * l.wq;
      const double c_qq = h * h;
      const double c_p = -2.0 * l.wq * l.wpq + 2.0 * h * l.wqq + 3.0 * gam * h * h;
      const double c_q = 2.0 * l.wq * l.wpp - 2.0 * h * l.wpq - 2.0 * gam * ai3 * l.wq;
      const double c_0 = -s.epsilon;
      const double ipp = 1.0 / (dp * dp), iqq = 1.0 / (dq * dq);
      const double ip = 1.0 / (2.0 * dp), iq = 1.0 / (2.0 * dq), ipq = 1.0 / (4.0 * dp * dq);
      add(row, i, j, c_0 - 2.0 * c_pp * ipp - 2.0 * c_qq * iqq);
      add(row, i, j - 1, c_pp * ipp + c_p * ip);
      add(row, i, j + 1, c_pp * ipp - c_p * ip);
      add(row, i + 1, j, c_qq * iqq + c_q * iq);
      add(row, i - 1, j, c_qq * iqq - c_q * iq);
      add(row, i + 1, j - 1, c_pq * ipq);
      add(row, i - 1, j - 1, -c_pq * ipq);
      add(row, i + 1, j + 1, -c_pq * ipq);
      add(row, i - 1, j + 1, c_pq * ipq);
    }
  }
  const auto n = static_cast<int>(g.unknowns());
  SparseMatrix J(n, n);
  J.setFromTriplets(trip.begin(), trip.end());
  return J;
}

Eigen::VectorXd StripProblem::dlambda(const WaveState& s) const {
  const StripGrid& g = s.grid;
  Eigen::VectorXd d = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.unknowns()));
  const double lr = 1.0 / std::sqrt(s.lambda);
  const double lr_l = -0.5 * lr / s.lambda;
  for (int i = 0; i < g.nq; ++i) {
    if (is_mirror_row(g, i)) continue;
    Top t = top(s, i);
    const double h0 = lr + t.wp;
    d[i] = -h0 * h0 + (2.0 * g_ * t.w - s.lambda) * 2.0 * h0 * lr_l;
  }
  for (int j = 1; j < g.np - 1; ++j) {
    const double ai = ainv(j, s.lambda);
    const double ai3 = ai * ai * ai;
    const double h_l = -0.5 * ai3;
    const double ai3_l = -1.5 * ai3 * ai * ai;
    const double gam = gamma_[j];
    for (int i = 0; i < g.nq; ++i) {
      if (is_mirror_row(g, i)) continue;
      Local l = interior(s, i, j);
      const double h = ai + l.wp;
      d[static_cast<Eigen::Index>(g.index(i, j))] =
          -2.0 * h_l * l.wq * l.wpq + 2.0 * h * h_l * l.wqq + 3.0 * gam * h * h * h_l -
          gam * ai3_l * (1.0 + l.wq * l.wq);
    }
  }
  return d;
}

Eigen::VectorXd StripProblem::branch_coordinate_weights() const {
  const StripGrid& g = grid_;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.unknowns()));
  const double dq = g.dq();
  for (int i = 0; i < g.nq; ++i) {
    double wt = std::cos(M_PI * g.q(i) / g.L) * dq / g.L;
    if (g.symmetry == Symmetry::HalfEven) {
      wt *= 2.0;
      if (i == 0 || i == g.nq - 1) wt *= 0.5;
    }
    c[i] = wt;
  }
  return c;
}

double StripProblem::branch_coordinate(const WaveState& s) const {
  auto c = branch_coordinate_weights();
  double sum = 0.0;
  for (int i = 0; i < s.grid.nq; ++i) sum += c[i] * s.at(i, 0);
  return sum;
}

namespace {

Eigen::VectorXd unknowns_of(const WaveState& s) {
  return Eigen::Map<const Eigen::VectorXd>(s.w.data(),
                                           static_cast<Eigen::Index>(s.grid.unknowns()));
}

void add_update(WaveState& s, const Eigen::VectorXd& dw, double t) {
  for (Eigen::Index k = 0; k < dw.size(); ++k) s.w[static_cast<std::size_t>(k)] += t * dw[k];
}

template <typename Norm, typename Solve>
WaveState newton_loop(const StripProblem& prob, WaveState state, const NewtonOptions& opt,
                      NewtonReport* report, bool with_lambda, Norm&& norm, Solve&& solve) {
  prob.check_admissible(state);
  double res = norm(state);
  const double start = res;
  int it = 0;
  while (res > opt.tol) {
    if (it >= opt.max_iter) {
      throw ConvergenceError("Newton: no convergence in " + std::to_string(opt.max_iter) +
                                 " iterations",
                             res);
    }
    Eigen::VectorXd dw;
    double dl = 0.0;
    solve(state, dw, dl);
    if (!dw.allFinite() || !std::isfinite(dl)) {
      throw ConvergenceError("Newton: non-finite update", res);
    }
    double t = 1.0;
    WaveState trial = state;
    int halvings = 0;
    for (;; ++halvings) {
      trial = state;
      add_update(trial, dw, t);
      if (with_lambda) trial.lambda += t * dl;
      if (!prob.admissibility(trial)) break;
      if (halvings >= opt.max_halvings) {
        throw *prob.admissibility(trial);
      }
      t *= 0.5;
    }
    state = std::move(trial);
    res = norm(state);
    ++it;
    if (!std::isfinite(res) || res > 1e8 * std::max(start, 1.0)) {
      throw ConvergenceError("Newton: divergence", res);
    }
  }
  if (report) {
    report->iterations = it;
    report->residual = res;
  }
  return state;
}

}  // namespace

WaveState newton_solve(const StripProblem& prob, WaveState initial, const NewtonOptions& opt,
                       NewtonReport* report) {
  return newton_loop(prob, std::move(initial), opt, report, false,
                     [&](const WaveState& s) { return prob.residual_norm(s); },
                     [&](const WaveState& s, Eigen::VectorXd& dw, double&) {
                       Eigen::SparseLU<SparseMatrix> lu;
                       lu.compute(prob.jacobian(s));
                       if (lu.info() != Eigen::Success) {
                         throw ConvergenceError("Newton: singular Jacobian (near fold?)");
                       }
                       dw = lu.solve(-prob.residual(s));
                     });
}

WaveState solve_fixed_coordinate(const StripProblem& prob, WaveState initial, double target,
                                 const NewtonOptions& opt, NewtonReport* report) {
  const Eigen::VectorXd c = prob.branch_coordinate_weights();
  const auto n = static_cast<int>(prob.grid().unknowns());
  auto solve = [&](const WaveState& s, Eigen::VectorXd& dw, double& dl) {
    SparseMatrix J = prob.jacobian(s);
    Eigen::VectorXd fl = prob.dlambda(s);
    std::vector<Triplet> trip;
    trip.reserve(static_cast<std::size_t>(J.nonZeros()) + 2 * n + 1);
    for (int k = 0; k < J.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator itr(J, k); itr; ++itr) {
        trip.emplace_back(static_cast<int>(itr.row()), static_cast<int>(itr.col()), itr.value());
      }
    }
    for (int k = 0; k < n; ++k) {
      if (fl[k] != 0.0) trip.emplace_back(k, n, fl[k]);
      if (c[k] != 0.0) trip.emplace_back(n, k, c[k]);
    }
    SparseMatrix B(n + 1, n + 1);
    B.setFromTriplets(trip.begin(), trip.end());
    Eigen::VectorXd rhs(n + 1);
    rhs.head(n) = -prob.residual(s);
    rhs[n] = -(c.dot(unknowns_of(s)) - target);
    Eigen::SparseLU<SparseMatrix> lu;
    lu.compute(B);
    if (lu.info() != Eigen::Success) throw ConvergenceError("bordered Newton: singular system");
    Eigen::VectorXd x = lu.solve(rhs);
    dw = x.head(n);
    dl = x[n];
  };
  auto norm = [&](const WaveState& s) {
    return std::max(prob.residual_norm(s), std::abs(prob.branch_coordinate(s) - target));
  };
  return newton_loop(prob, std::move(initial), opt, report, true, norm, solve);
}

WaveState to_full(const WaveState& half) {
  if (half.grid.symmetry != Symmetry::HalfEven) throw DomainError("to_full: expects a half grid");
  WaveState out = WaveState::trivial(half.grid.full(), half.lambda, half.epsilon);
  const StripGrid& f = out.grid;
  const int centre = f.nq / 2;
  for (int j = 0; j < f.np; ++j) {
    for (int i = 0; i < f.nq; ++i) {
      int k = i <= centre ? i : f.nq - i;
      out.w[f.index(i, j)] = half.at(k, j);
    }
  }
  return out;
}

WaveState to_half(const WaveState& full) {
  if (full.grid.symmetry != Symmetry::FullEven) throw DomainError("to_half: expects a full grid");
  WaveState out = WaveState::trivial(full.grid.half(), full.lambda, full.epsilon);
  for (int j = 0; j < out.grid.np; ++j) {
    for (int i = 0; i < out.grid.nq; ++i) out.w[out.grid.index(i, j)] = full.at(i, j);
  }
  return out;
}

WaveState resample(const WaveState& s, const StripGrid& target) {
  if (s.grid.symmetry != target.symmetry) throw DomainError("resample: symmetry mismatch");
  WaveState out = WaveState::trivial(target, s.lambda, s.epsilon);
  const StripGrid& src = s.grid;
  for (int j = 0; j < target.np - 1; ++j) {
    double pj = target.p(j);
    if (pj <= -src.P) continue;
    double y = -pj / src.dp();
    int j0 = std::min(static_cast<int>(std::floor(y)), src.np - 2);
    double ty = y - j0;
    for (int i = 0; i < target.nq; ++i) {
      double x = (target.q(i) + src.L) / src.dq();
      int i0 = static_cast<int>(std::floor(x));
      double tx = x - i0;
      int ia = src.wrap(i0), ib = src.wrap(i0 + 1);
      if (src.symmetry == Symmetry::HalfEven && i0 >= src.nq - 1) {
        ia = ib = src.nq - 1;
        tx = 0.0;
      }
      double v0 = (1 - tx) * s.at(ia, j0) + tx * s.at(ib, j0);
      double v1 = (1 - tx) * s.at(ia, j0 + 1) + tx * s.at(ib, j0 + 1);
      out.w[target.index(i, j)] = (1 - ty) * v0 + ty * v1;
    }
  }
  return out;
}

double directional_fd_error(const StripProblem& prob, const WaveState& state,
                            const Eigen::VectorXd& v, double t) {
  if (v.size() != static_cast<Eigen::Index>(state.grid.unknowns())) {
    throw DomainError("directional_fd_error: direction has the wrong length");
  }
  WaveState moved = state;
  for (Eigen::Index k = 0; k < v.size(); ++k) moved.w[k] += t * v[k];
  const Eigen::VectorXd jv = prob.jacobian(state) * v;
  const Eigen::VectorXd fd = (prob.residual(moved) - prob.residual(state)) / t;
  return (fd - jv).lpNorm<Eigen::Infinity>() / jv.lpNorm<Eigen::Infinity>();
}

Eigen::VectorXd smooth_direction(const StripGrid& grid, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  double c[4][3];
  for (auto& row : c) {
    for (double& v : row) v = unit(rng);
  }
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid.unknowns()));
  for (int j = 0; j + 1 < grid.np; ++j) {
    for (int i = 0; i < grid.nq; ++i) {
      double sum = 0.0;
      for (int n = 0; n < 4; ++n) {
        for (int m = 0; m < 3; ++m) {
          sum += c[n][m] * std::cos(n * M_PI * grid.q(i) / grid.L) *
                 std::cos((2 * m + 1) * M_PI * grid.p(j) / (2.0 * grid.P));
        }
      }
      v[static_cast<Eigen::Index>(grid.index(i, j))] = sum;
    }
  }
  const double sup = v.lpNorm<Eigen::Infinity>();
  return sup > 0.0 ? Eigen::VectorXd(v / sup) : v;
}

}  // namespace vorstokes
