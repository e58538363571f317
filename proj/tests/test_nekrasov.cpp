#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

#include "support.hpp"
#include "vorstokes/nekrasov.hpp"

using namespace vorstokes;

TEST_CASE("kernel values") {
  CHECK(nekrasov_kernel(M_PI / 2, M_PI / 4) == doctest::Approx(std::log(1.0 + std::sqrt(2.0))));
  CHECK(nekrasov_kernel(1.0, 2.0) == doctest::Approx(nekrasov_kernel(2.0, 1.0)));
  CHECK(nekrasov_kernel(1.0, 1.0 + 1e-9) > 15.0);
}

TEST_CASE("product-integration weights integrate the kernel exactly on linears") {
  const int n = 120;
  const Eigen::MatrixXd W = nekrasov_weights(n);
  boost::math::quadrature::tanh_sinh<double> ts;
  for (double s : {M_PI / 6, M_PI / 2, 5 * M_PI / 6}) {
    const int i = static_cast<int>(std::lround(s * n / M_PI));
    const double si = i * M_PI / n;
    auto k = [&](double t) { return nekrasov_kernel(si, t); };
    const double ref = ts.integrate(k, 0.0, si) + ts.integrate(k, si, M_PI);
    CHECK(W.row(i).sum() == doctest::Approx(ref).epsilon(1e-8));
  }
  // ∫K(s,t) sin t dt = π sin s: sin is an eigenfunction of the kernel.
  Eigen::VectorXd sn(n + 1);
  for (int j = 0; j <= n; ++j) sn[j] = std::sin(j * M_PI / n);
  const Eigen::VectorXd img = W * sn;
  for (int i = 1; i < n; ++i) CHECK(img[i] == doctest::Approx(M_PI * sn[i]).epsilon(1e-3).scale(1e-3));
}

TEST_CASE("below the threshold nu = 3 only the trivial solution exists") {
  for (double nu : {1.0, 2.5, 2.9}) {
    const NekrasovState st = solve_nekrasov(nu, 100, 1e-12);
    CHECK(st.trivial());
    CHECK(nu_bound_check(st).skipped);
  }
}

TEST_CASE("nontrivial solutions satisfy the equation and the nu bound") {
  const int n = 200;
  const Eigen::MatrixXd W = nekrasov_weights(n);
  double prev_height = 0.0;
  for (double nu : {3.3, 4.0, 6.0}) {
    const NekrasovState st = solve_nekrasov(nu, n, 1e-12);
    REQUIRE_FALSE(st.trivial());
    const auto op = nekrasov_operator(st, W);
    double res = 0.0;
    for (std::size_t i = 0; i < op.size(); ++i) res = std::max(res, std::abs(op[i] - st.theta[i]));
    CHECK(res < 1e-10);
    for (double v : st.theta) CHECK(v >= 0.0);
    CHECK(st.theta.front() == 0.0);
    CHECK(st.theta.back() == 0.0);
    const NuBound b = nu_bound_check(st);
    CHECK(b.holds);
    CHECK(b.ratio > 1.0);
    CHECK(b.lhs == doctest::Approx(b.middle).epsilon(1e-4));
    const double h = nekrasov_profile(st, 9.81, M_PI).height();
    CHECK(h > prev_height);
    prev_height = h;
  }
}

TEST_CASE("odd extension is preserved") {
  const NekrasovState st = solve_nekrasov(4.0, 100, 1e-12);
  for (double s : {0.3, 1.1, 2.9}) {
    CHECK(st.theta_at(-s) == doctest::Approx(-st.theta_at(s)));
    CHECK(st.theta_at(s + 2 * M_PI) == doctest::Approx(st.theta_at(s)));
  }
}

TEST_CASE("Nekrasov speed matches Stokes' second-order dispersion relation") {
  // Deep water, k = π/L = 1: c² = (g/k)(1 + (ka)²) with a half the crest-to-trough height.
  const NekrasovState st = solve_nekrasov(4.0, 400, 1e-12);
  const NekrasovProfile p = nekrasov_profile(st, 9.81, M_PI);
  const double a = 0.5 * p.height();
  CHECK(p.c * p.c == doctest::Approx(9.81 * (1.0 + a * a)).epsilon(1e-3));
  CHECK(p.x.front() == doctest::Approx(0.0).scale(1.0));
  CHECK(p.x.back() == doctest::Approx(M_PI));
  CHECK(p.y.front() > p.y.back());
  CHECK(p.crest_speed < p.c);
}
