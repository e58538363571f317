#include "vorstokes/sturm_liouville.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>


#include "vorstokes/errors.hpp"

namespace vorstokes {

namespace {

// Γ sampled at the nodes and cell midpoints of one grid; independent of λ so it
// is built once per solve.
struct HalfGrid {
  double h = 0.0;
  int n = 0;
  std::vector<double> gamma_node;  // Γ(p_i), i = 0..n
  std::vector<double> gamma_mid;   // Γ(p_{i+1/2}), i = 0..n-1

  HalfGrid(const SLProblem& prob, int intervals) : h(prob.depth / intervals), n(intervals) {
    std::vector<double> pts(2 * n + 1);
    for (int i = 0; i <= 2 * n; ++i) pts[i] = -0.5 * h * i;
    auto table = big_gamma_table(prob.model, pts);
    gamma_node.resize(n + 1);
    gamma_mid.resize(n);
    for (int i = 0; i <= n; ++i) gamma_node[i] = table[2 * i];
    for (int i = 0; i < n; ++i) gamma_mid[i] = table[2 * i + 1];
  }
};

// Symmetric tridiagonal S = D^{-1/2} K D^{-1/2} of the pencil (K, D) on the
// unknowns v_0..v_{n-1} (v_n = 0). K is the stiffness of the quadratic form
// -g v_0² + Σ a³_{i+1/2}(v_{i+1}-v_i)²/h + ε Σ m_i a_i³ v_i², D = diag(m_i a_i)
// with m_0 = h/2, m_i = h.
struct Pencil {
  std::vector<double> diag, off, mass;
};

Pencil assemble(const SLProblem& prob, const HalfGrid& hg, double lambda) {
  const int n = hg.n;
  const double h = hg.h;
  Pencil pen;
  pen.diag.assign(n, 0.0);
  pen.off.assign(n > 0 ? n - 1 : 0, 0.0);
  pen.mass.assign(n, 0.0);
  std::vector<double> a_node(n), c_mid(n);
  for (int i = 0; i < n; ++i) {
    double arg = lambda + 2.0 * hg.gamma_node[i];
    double arg_mid = lambda + 2.0 * hg.gamma_mid[i];
    if (!(arg > 0) || !(arg_mid > 0)) {
      throw StagnationError("Sturm-Liouville: lambda + 2 Gamma(p) <= 0 on the grid");
    }
    a_node[i] = std::sqrt(arg);
    c_mid[i] = arg_mid * std::sqrt(arg_mid);  // a³ at midpoints
  }
  for (int i = 0; i < n; ++i) {
    double m = (i == 0 ? 0.5 : 1.0) * h;
    double a3 = a_node[i] * a_node[i] * a_node[i];
    double k = c_mid[i] / h + prob.epsilon * m * a3;
    if (i > 0) k += c_mid[i - 1] / h;
    if (i == 0) k -= prob.g;
    pen.mass[i] = m * a_node[i];
    pen.diag[i] = k / pen.mass[i];
  }
  for (int i = 0; i + 1 < n; ++i) {
    pen.off[i] = -c_mid[i] / h / std::sqrt(pen.mass[i] * pen.mass[i + 1]);
  }
  return pen;
}

// Number of eigenvalues of the tridiagonal matrix strictly below sigma.
int sturm_count(const Pencil& pen, double sigma) {
  int count = 0;
  double q = 1.0;
  const double tiny = std::numeric_limits<double>::min() * 1e4;
  for (std::size_t i = 0; i < pen.diag.size(); ++i) {
    double e2 = i == 0 ? 0.0 : pen.off[i - 1] * pen.off[i - 1];
    q = pen.diag[i] - sigma - (i == 0 ? 0.0 : e2 / q);
    if (q == 0.0) q = -tiny;
    if (q < 0) ++count;
  }
  return count;
}

double smallest_eigenvalue(const Pencil& pen) {
  const std::size_t n = pen.diag.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double r = (i > 0 ? std::abs(pen.off[i - 1]) : 0.0) + (i + 1 < n ? std::abs(pen.off[i]) : 0.0);
    lo = std::min(lo, pen.diag[i] - r);
    hi = std::min(hi, pen.diag[i]);
  }
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (hi - lo <= 4e-16 * std::max(std::abs(lo), std::abs(hi)) || mid == lo || mid == hi) break;
    if (sturm_count(pen, mid) >= 1) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Shifted inverse iteration; sigma sits just below the eigenvalue so S - σI
// is positive definite and the LDLᵀ sweep is stable.
std::vector<double> eigenvector(const Pencil& pen, double eigenvalue) {
  const std::size_t n = pen.diag.size();
  double sigma = eigenvalue - 1e-9 * std::max(1.0, std::abs(eigenvalue));
  std::vector<double> d(n), l(n > 0 ? n - 1 : 0);
  d[0] = pen.diag[0] - sigma;
  for (std::size_t i = 1; i < n; ++i) {
    l[i - 1] = pen.off[i - 1] / d[i - 1];
    d[i] = pen.diag[i] - sigma - l[i - 1] * pen.off[i - 1];
  }
  std::vector<double> y(n, 1.0);
  for (int it = 0; it < 6; ++it) {
    for (std::size_t i = 1; i < n; ++i) y[i] -= l[i - 1] * y[i - 1];
    for (std::size_t i = 0; i < n; ++i) y[i] /= d[i];
    for (std::size_t i = n - 1; i-- > 0;) y[i] -= l[i] * y[i + 1];
    double norm = 0.0;
    for (double v : y) norm = std::max(norm, std::abs(v));
    for (double& v : y) v /= norm;
  }
  return y;
}

double grid_eigenvalue(const SLProblem& prob, const HalfGrid& hg, double lambda) {
  return smallest_eigenvalue(assemble(prob, hg, lambda));
}

// Richardson-extrapolated pair of grids (N, 2N).
struct GridPair {
  HalfGrid coarse;
  HalfGrid fine;
  explicit GridPair(const SLProblem& prob) : coarse(prob, prob.nodes), fine(prob, 2 * prob.nodes) {}
  double eigenvalue(const SLProblem& prob, double lambda) const {
    double lc = grid_eigenvalue(prob, coarse, lambda);
    double lf = grid_eigenvalue(prob, fine, lambda);
    return (4.0 * lf - lc) / 3.0;
  }
};

}  // namespace

SLProblem SLProblem::make(VorticityModel model, double g, double L, double epsilon, int nodes) {
  if (!(g > 0) || !(L > 0)) throw DomainError("SLProblem: g and L must be positive");
  if (!(epsilon >= 0 && epsilon < 1)) throw DomainError("SLProblem: epsilon must lie in [0,1)");
  if (nodes < 16) throw DomainError("SLProblem: at least 16 intervals required");
  SLProblem prob;
  prob.fn = functionals(model);
  prob.model = std::move(model);
  prob.g = g;
  prob.L = L;
  prob.epsilon = epsilon;
  prob.nodes = nodes;
  double k_est = M_PI / (L * std::sqrt(prob.lambda_max() + 2.0 * prob.fn.gamma_sup_bound));
  prob.depth = 20.0 / k_est;
  return prob;
}

double SLProblem::lambda_max() const { return 10.0 * g * L / M_PI - 2.0 * fn.gamma_inf_bound; }

std::vector<double> SLProblem::grid() const {
  std::vector<double> p(nodes + 1);
  for (int i = 0; i <= nodes; ++i) p[i] = -depth * static_cast<double>(i) / nodes;
  return p;
}

SLProblem SLProblem::refined(int factor, double depth_factor) const {
  SLProblem out = *this;
  out.nodes = nodes * factor;
  out.depth = depth * depth_factor;
  return out;
}

double BifurcationPoint::phi_at(double p_query) const {
  if (p_query > 0) throw DomainError("phi_at: p must be nonpositive");
  if (p.empty() || p_query < p.back()) return 0.0;
  // Grid is uniform and decreasing; interpolate on reversed (increasing) copy.
  double h = p[0] - p[1];
  double s = -p_query / h;
  auto i = static_cast<std::size_t>(std::floor(s));
  if (i + 1 >= p.size()) return phi.back();
  // Cubic Lagrange on four neighbours, falling back to linear at the ends.
  if (i >= 1 && i + 2 < p.size()) {
    double t = s - static_cast<double>(i);
    double f0 = phi[i - 1], f1 = phi[i], f2 = phi[i + 1], f3 = phi[i + 2];
    double tm1 = t + 1.0, t1 = t - 1.0, t2 = t - 2.0;
    return -f0 * t * t1 * t2 / 6.0 + f1 * tm1 * t1 * t2 / 2.0 - f2 * tm1 * t * t2 / 2.0 +
           f3 * tm1 * t * t1 / 6.0;
  }
  double t = s - static_cast<double>(i);
  return (1.0 - t) * phi[i] + t * phi[i + 1];
}

double rayleigh_quotient(const SLProblem& prob, double lambda, std::span<const double> p,
                         std::span<const double> v) {
  if (p.size() != v.size() || p.size() < 3) {
    throw DomainError("rayleigh_quotient: need matching samples (>= 3)");
  }
  if (p[0] != 0.0) throw DomainError("rayleigh_quotient: grid must start at p = 0");
  const std::size_t n = p.size() - 1;
  std::vector<double> pts(2 * n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    pts[2 * i] = p[i];
    pts[2 * i + 1] = 0.5 * (p[i] + p[i + 1]);
  }
  pts[2 * n] = p[n];
  auto G = big_gamma_table(prob.model, pts);
  auto a_at = [&](std::size_t k) {
    double arg = lambda + 2.0 * G[k];
    if (!(arg > 0)) throw StagnationError("rayleigh_quotient: lambda + 2 Gamma(p) <= 0");
    return std::sqrt(arg);
  };
  double grad = 0.0, pot = 0.0, mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double h = p[i] - p[i + 1];
    double am = a_at(2 * i + 1);
    double dv = (v[i] - v[i + 1]) / h;
    grad += am * am * am * dv * dv * h;
    double a0 = a_at(2 * i), a1 = a_at(2 * i + 2);
    pot += 0.5 * h * (a0 * a0 * a0 * v[i] * v[i] + a1 * a1 * a1 * v[i + 1] * v[i + 1]);
    mass += 0.5 * h * (a0 * v[i] * v[i] + a1 * v[i + 1] * v[i + 1]);
  }
  if (!(mass > 0)) throw DomainError("rayleigh_quotient: v must not vanish identically");
  return (-prob.g * v[0] * v[0] + grad + prob.epsilon * pot) / mass;
}

double discrete_lowest_eigenvalue(const SLProblem& prob, double lambda) {
  if (!(lambda + 2.0 * prob.fn.gamma_inf_bound > 0)) {
    throw StagnationError("lowest_eigenvalue: lambda must exceed -2 Gamma_inf");
  }
  return GridPair(prob).eigenvalue(prob, lambda);
}

std::optional<double> lowest_eigenvalue(const SLProblem& prob, double lambda) {
  double value = discrete_lowest_eigenvalue(prob, lambda);
  if (value >= prob.epsilon) return std::nullopt;
  return value;
}

BifurcationPoint find_bifurcation_point(const SLProblem& prob) {
  const double target = -(M_PI / prob.L) * (M_PI / prob.L);
  const double floor = -2.0 * prob.fn.gamma_inf_bound;
  const double lambda_max = prob.lambda_max();
  GridPair grids(prob);
  auto f = [&](double lambda) { return grids.eigenvalue(prob, lambda) - target; };

  double lo = floor + 0.1;
  if (!(f(lo) < 0)) {
    throw BifurcationAbsent("no bifurcation: Lambda(lambda) >= -(pi/L)^2 already at lambda = " +
                            std::to_string(lo));
  }
  double step = 0.1;
  double hi = lo + step;
  while (true) {
    if (hi >= lambda_max) {
      hi = lambda_max;
      if (f(hi) < 0) {
        throw BifurcationAbsent("no bifurcation: Lambda(lambda) < -(pi/L)^2 up to lambda_max = " +
                                std::to_string(lambda_max));
      }
      break;
    }
    if (f(hi) >= 0) break;
    lo = hi;
    step *= 2.0;
    hi = lo + step;
  }
  while (hi - lo > 1e-10 * std::abs(hi)) {
    double mid = 0.5 * (lo + hi);
    if (f(mid) < 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double lambda_star = 0.5 * (lo + hi);

  BifurcationPoint bp;
  bp.epsilon = prob.epsilon;
  bp.lambda_star = lambda_star;
  bp.mu = target;
  Pencil pen = assemble(prob, grids.fine, lambda_star);
  double eig = smallest_eigenvalue(pen);
  auto y = eigenvector(pen, eig);
  const int n = grids.fine.n;
  bp.p.resize(n + 1);
  bp.phi.assign(n + 1, 0.0);
  for (int i = 0; i <= n; ++i) bp.p[i] = -grids.fine.h * i;
  for (int i = 0; i < n; ++i) bp.phi[i] = y[i] / std::sqrt(pen.mass[i]);
  double v0 = bp.phi[0];
  for (double& v : bp.phi) v /= v0;
  return bp;
}

double eigenfunction_decay_rate(const BifurcationPoint& bp, const VorticityFunctionals& fn) {
  double lo = bp.lambda_star + 2.0 * fn.gamma_inf_bound;
  double hi = bp.lambda_star + 2.0 * fn.gamma_sup_bound;
  if (lo <= 0) return 0.0;
  return std::sqrt(lo) / (hi * std::sqrt(hi));
}

}  // namespace vorstokes
