#include "vorstokes/nekrasov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/toms748_solve.hpp>

namespace vorstokes {

namespace {

using boost::math::quadrature::gauss;
using boost::math::quadrature::tanh_sinh;

// Kernel with s - t passed separately so the log stays accurate next to s = t.
double kernel_split(double s, double t, double diff) {
  return std::log(std::sin(0.5 * (s + t))) - std::log(std::abs(std::sin(0.5 * diff)));
}

// Cumulative trapezoid of sin θ on the uniform grid.
std::vector<double> cumulative_sin(const std::vector<double>& theta, double h) {
  std::vector<double> out(theta.size(), 0.0);
  for (std::size_t i = 1; i < theta.size(); ++i) {
    out[i] = out[i - 1] + 0.5 * h * (std::sin(theta[i - 1]) + std::sin(theta[i]));
  }
  return out;
}

double trapezoid(const std::vector<double>& f, double h) {
  double sum = 0.0;
  for (std::size_t i = 1; i < f.size(); ++i) sum += 0.5 * h * (f[i - 1] + f[i]);
  return sum;
}

double interp(const std::vector<double>& x, const std::vector<double>& y, double v) {
  if (v <= x.front()) return y.front();
  if (v >= x.back()) return y.back();
  const auto it = std::upper_bound(x.begin(), x.end(), v);
  const std::size_t k = static_cast<std::size_t>(it - x.begin()) - 1;
  const double t = (v - x[k]) / (x[k + 1] - x[k]);
  return (1.0 - t) * y[k] + t * y[k + 1];
}

// Mean over x of a piecewise-linear profile.
double mean_over(const std::vector<double>& x, const std::vector<double>& y) {
  double area = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) area += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return area / (x.back() - x.front());
}

}  // namespace

double nekrasov_kernel(double s, double t) {
  if (!(s > 0.0 && s < M_PI && t > 0.0 && t < M_PI)) {
    throw DomainError("nekrasov_kernel: arguments must lie in (0, pi)");
  }
  if (s == t) throw DomainError("nekrasov_kernel: singular at s = t");
  return kernel_split(s, t, s - t);
}

Eigen::MatrixXd nekrasov_weights(int n) {
  if (n < 4) throw DomainError("nekrasov_weights: need n >= 4");
  const double h = M_PI / n;
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n + 1, n + 1);
  tanh_sinh<double> ts;
  for (int i = 1; i < n; ++i) {
    const double s = i * h;
    for (int k = 0; k < n; ++k) {
      const double a = k * h, b = (k + 1) * h;
      double left = 0.0, right = 0.0;
      if (k == i || k + 1 == i) {
        // tc is a - t near a and b - t near b; one of them is s - t exactly.
        const bool s_is_a = (k == i);
        auto diff = [&](double t, double tc) {
          if (s_is_a && tc < 0.0) return tc;
          if (!s_is_a && tc > 0.0) return tc;
          return s - t;
        };
        left = ts.integrate([&](double t, double tc) {
          return kernel_split(s, t, diff(t, tc)) * (b - t) / h;
        }, a, b);
        right = ts.integrate([&](double t, double tc) {
          return kernel_split(s, t, diff(t, tc)) * (t - a) / h;
        }, a, b);
      } else {
        // Nearest singularity (s = t or s + t = 2π) is at least one cell away.
        left = gauss<double, 16>::integrate(
            [&](double t) { return kernel_split(s, t, s - t) * (b - t) / h; }, a, b);
        right = gauss<double, 16>::integrate(
            [&](double t) { return kernel_split(s, t, s - t) * (t - a) / h; }, a, b);
      }
      W(i, k) += left;
      W(i, k + 1) += right;
    }
  }
  return W;
}

bool NekrasovState::trivial(double tol) const {
  return std::all_of(theta.begin(), theta.end(), [&](double v) { return std::abs(v) <= tol; });
}

double NekrasovState::theta_at(double v) const {
  double r = std::remainder(v, 2.0 * M_PI);  // (-π, π]
  const double sign = r < 0.0 ? -1.0 : 1.0;
  r = std::abs(r);
  return sign * interp(s, theta, r);
}

std::vector<double> nekrasov_operator(const NekrasovState& st, const Eigen::MatrixXd& W) {
  const int n = st.n_quad;
  const double h = M_PI / n;
  const auto cum = cumulative_sin(st.theta, h);
  Eigen::VectorXd f(n + 1);
  for (int j = 0; j <= n; ++j) {
    const double den = 1.0 / st.nu + cum[j];
    if (!(den > 0.0)) {
      throw NekrasovDivergence("solve_nekrasov: nonpositive denominator", st);
    }
    f[j] = std::sin(st.theta[j]) / den;
  }
  const Eigen::VectorXd out = W * f / (3.0 * M_PI);
  return {out.data(), out.data() + out.size()};
}

namespace {

void picard(NekrasovState& st, const Eigen::MatrixXd& W, double tol, const NekrasovOptions& opt) {
  const int n = st.n_quad;
  const double w = opt.damping;
  double prev = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= opt.max_iter; ++it) {
    const auto T = nekrasov_operator(st, W);
    double upd = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double next = (1.0 - w) * st.theta[i] + w * T[i];
      upd = std::max(upd, std::abs(next - st.theta[i]));
      st.theta[i] = next;
    }
    st.iterations = it;
    st.update = upd;
    for (double v : st.theta) {
      if (!std::isfinite(v) || std::abs(v) >= 0.5 * M_PI) {
        throw NekrasovDivergence("solve_nekrasov: iterate left |theta| < pi/2", st);
      }
    }
    if (upd < tol) {
      // Distance to the fixed point is about upd r/(1-r); iterates that are
      // that close to zero have converged to the trivial solution.
      const double r = std::min(upd / prev, 0.999);
      const double dist = 10.0 * upd * r / (1.0 - r);
      double sup = 0.0;
      for (double v : st.theta) sup = std::max(sup, std::abs(v));
      if (sup <= dist) std::fill(st.theta.begin(), st.theta.end(), 0.0);
      return;
    }
    prev = upd;
  }
  throw NekrasovDivergence("solve_nekrasov: no convergence within max_iter", st);
}

NekrasovState initial_state(double nu, int n_quad, const std::vector<double>& start) {
  if (!(nu > 0.0)) throw DomainError("solve_nekrasov: nu must be positive");
  NekrasovState st;
  st.nu = nu;
  st.n_quad = n_quad;
  const double h = M_PI / n_quad;
  st.s.resize(n_quad + 1);
  st.theta.assign(n_quad + 1, 0.0);
  for (int i = 0; i <= n_quad; ++i) st.s[i] = i * h;
  if (start.empty()) {
    for (int i = 0; i <= n_quad; ++i) st.theta[i] = 0.1 * std::sin(st.s[i]);
  } else {
    if (static_cast<int>(start.size()) != n_quad + 1) {
      throw DomainError("solve_nekrasov: start must have n_quad + 1 samples");
    }
    st.theta = start;
  }
  st.theta.front() = st.theta.back() = 0.0;
  return st;
}

}  // namespace

NekrasovState solve_nekrasov(double nu, int n_quad, double tol, const std::vector<double>& start,
                             const NekrasovOptions& opt) {
  NekrasovState st = initial_state(nu, n_quad, start);
  if (st.trivial(0.0)) return st;
  picard(st, nekrasov_weights(n_quad), tol, opt);
  return st;
}

NuBound nu_bound_check(const NekrasovState& st) {
  NuBound out;
  if (st.trivial()) {
    out.skipped = true;
    return out;
  }
  const int n = st.n_quad;
  const double h = M_PI / n;
  const auto cum = cumulative_sin(st.theta, h);
  std::vector<double> a(n + 1), b(n + 1);
  for (int j = 0; j <= n; ++j) {
    a[j] = st.theta[j] * std::sin(st.s[j]);
    b[j] = std::sin(st.theta[j]) * std::sin(st.s[j]) / (1.0 / st.nu + cum[j]);
  }
  out.lhs = trapezoid(a, h);
  out.middle = trapezoid(b, h) / 3.0;
  out.rhs = st.nu / 3.0 * out.lhs;
  out.ratio = out.rhs / out.middle;
  out.holds = out.middle < out.rhs;
  return out;
}

double NekrasovProfile::height() const {
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  return *hi - *lo;
}

NekrasovProfile nekrasov_profile(const NekrasovState& st, double g, double L) {
  const int n = st.n_quad;
  const double h = M_PI / n;
  const auto cum = cumulative_sin(st.theta, h);
  std::vector<double> jc(n + 1), cx(n + 1), cy(n + 1);
  for (int j = 0; j <= n; ++j) {
    jc[j] = std::cbrt(1.0 / st.nu + cum[j]);
    cx[j] = std::cos(st.theta[j]) / jc[j];
    cy[j] = -std::sin(st.theta[j]) / jc[j];
  }
  // x(π) = L fixes c = π √(3gL) A^{-3/2}, A = ∫cos θ J^{-1/3}.
  const double A = trapezoid(cx, h);
  NekrasovProfile pr;
  pr.c = M_PI * std::sqrt(3.0 * g * L) * std::pow(A, -1.5);
  const double scale3 = 3.0 * g * pr.c * L / M_PI;  // q³ = scale3 · J
  pr.crest_speed = std::cbrt(scale3) * jc[0];
  const double f = pr.c * L / M_PI / std::cbrt(scale3);
  pr.x.assign(n + 1, 0.0);
  pr.y.assign(n + 1, 0.0);
  for (int j = 1; j <= n; ++j) {
    pr.x[j] = pr.x[j - 1] + 0.5 * h * f * (cx[j - 1] + cx[j]);
    pr.y[j] = pr.y[j - 1] + 0.5 * h * f * (cy[j - 1] + cy[j]);
  }
  const double m = mean_over(pr.x, pr.y);
  for (double& v : pr.y) v -= m;
  return pr;
}

NekrasovState nekrasov_from_wave(const PhysicalWave& w, int n_quad) {
  // Walk the surface from the crest (i = nq-1, x = 0) to the trough (x = -L).
  const int nq = w.nq;
  std::vector<double> phi(nq, 0.0), th(nq, 0.0);
  for (int k = 0; k < nq; ++k) {
    const int i = nq - 1 - k;
    const double px = w.node(w.psi_x, i, 0), py = w.node(w.psi_y, i, 0);
    const double slope = -px / py;  // ψ = 0 along the surface
    th[k] = std::atan(slope);
    if (k > 0) {
      const int ip = i + 1;
      const double spx = w.node(w.psi_x, ip, 0), spy = w.node(w.psi_y, ip, 0);
      const double sp = -spx / spy;
      const double a = std::hypot(px, py) * std::sqrt(1.0 + slope * slope);
      const double b = std::hypot(spx, spy) * std::sqrt(1.0 + sp * sp);
      phi[k] = phi[k - 1] + 0.5 * (w.x[ip] - w.x[i]) * (a + b);
    }
  }
  NekrasovState st;
  const double qc = std::abs(w.node(w.psi_y, nq - 1, 0));
  st.nu = 3.0 * w.g * w.c * w.L / (M_PI * qc * qc * qc);
  st.n_quad = n_quad;
  st.s.resize(n_quad + 1);
  st.theta.resize(n_quad + 1);
  std::vector<double> sgrid(nq);
  for (int k = 0; k < nq; ++k) sgrid[k] = M_PI * phi[k] / phi.back();
  for (int i = 0; i <= n_quad; ++i) {
    st.s[i] = i * M_PI / n_quad;
    st.theta[i] = interp(sgrid, th, st.s[i]);
  }
  st.theta.front() = st.theta.back() = 0.0;
  return st;
}

ProfileComparison compare_with_nekrasov(const PhysicalWave& w, int n_quad, double tol) {
  // Strip profile on X = -x in [0, L], crest first.
  std::vector<double> X(w.nq), Y(w.nq);
  for (int k = 0; k < w.nq; ++k) {
    X[k] = -w.x[w.nq - 1 - k];
    Y[k] = w.eta[w.nq - 1 - k];
  }
  const double m = mean_over(X, Y);
  for (double& v : Y) v -= m;
  const auto [lo, hi] = std::minmax_element(Y.begin(), Y.end());
  const double hs = *hi - *lo;

  const NekrasovState mapped = nekrasov_from_wave(w, n_quad);
  const Eigen::MatrixXd W = nekrasov_weights(n_quad);
  std::vector<double> warm = mapped.theta;
  auto solve = [&](double nu) {
    NekrasovState st = initial_state(nu, n_quad, warm);
    picard(st, W, tol, {});
    if (!st.trivial()) warm = st.theta;
    return st;
  };

  ProfileComparison out;
  out.nu = mapped.nu;
  const NekrasovProfile at_mapped = nekrasov_profile(solve(mapped.nu), w.g, w.L);
  out.height_ratio = at_mapped.height() / hs;

  // Amplitude matching: the ν > 3 whose crest-to-trough height equals the strip's.
  auto mismatch = [&](double nu) {
    const NekrasovState st = solve(nu);
    return st.trivial() ? -hs : nekrasov_profile(st, w.g, w.L).height() - hs;
  };
  double a = 3.0 + 1e-6, b = mapped.nu;
  double fa = -hs, fb = mismatch(b);
  while (fb < 0.0) {
    a = b;
    fa = fb;
    b = 3.0 + 2.0 * (b - 3.0);
    fb = mismatch(b);
  }
  boost::uintmax_t iters = 60;
  const auto root = boost::math::tools::toms748_solve(
      mismatch, a, b, fa, fb, boost::math::tools::eps_tolerance<double>(40), iters);
  out.nu_matched = 0.5 * (root.first + root.second);
  const NekrasovProfile pr = nekrasov_profile(solve(out.nu_matched), w.g, w.L);
  out.speed_ratio = pr.c / w.c;

  double num = 0.0, den = 0.0;
  for (int k = 0; k < w.nq; ++k) {
    num = std::max(num, std::abs(interp(pr.x, pr.y, X[k]) - Y[k]));
    den = std::max(den, std::abs(Y[k]));
  }
  out.relative_sup = num / den;
  return out;
}

}  // namespace vorstokes
