#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "support.hpp"
#include "vorstokes/continuation.hpp"
#include "vorstokes/errors.hpp"
#include "vorstokes/strip.hpp"

using namespace vorstokes;
using testing::Gen;

namespace {

// A cos(πq/L)(e^{p} - e^{-P}): smooth, even at both ends of the half strip, zero at the bottom.
WaveState smooth_state(const StripGrid& g, double lambda, double eps, double A) {
  WaveState s = WaveState::trivial(g, lambda, eps);
  for (int j = 0; j < g.np; ++j) {
    for (int i = 0; i < g.nq; ++i) {
      s.w[g.index(i, j)] =
          A * std::cos(M_PI * g.q(i) / g.L) * (std::exp(g.p(j)) - std::exp(-g.P));
    }
  }
  return s;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

}  // namespace

TEST_CASE("residual vanishes on the trivial branch") {
  Gen gen(41);
  for (int k = 0; k < 12; ++k) {
    const VorticityModel m = testing::random_model(gen, k);
    const auto fn = functionals(m);
    const double lam = -2.0 * fn.gamma_inf_bound + gen.uniform(0.5, 15.0);
    const StripGrid g = StripGrid::make(M_PI, 16, 40, gen.uniform(5.0, 40.0));
    const StripProblem prob(m, 9.81, g);
    const WaveState s = WaveState::trivial(g, lam, gen.uniform(0.0, 0.5));
    for (double v : prob.residual_f1(s)) CHECK(std::abs(v) <= 1e-13);
    for (double v : prob.residual_f2(s)) CHECK(std::abs(v) <= 1e-13);
  }
}

TEST_CASE("discrete operator is second-order consistent") {
  // F_h(w) - F(w) = O(h²): differences between nested grids shrink by four.
  const VorticityModel m = VorticityModel::exp_decay(-0.8, 1.0);
  const double P = 6.0, lam = 9.0, eps = 0.01;
  auto residual_on = [&](int level) {
    const int nq = 8 * (1 << level) + 1, np = 24 * (1 << level) + 1;
    const StripGrid g = StripGrid::make(M_PI, nq, np, P);
    const StripProblem prob(m, 9.81, g);
    const WaveState s = smooth_state(g, lam, eps, 0.05);
    const auto f1 = prob.residual_f1(s);
    const auto f2 = prob.residual_f2(s);
    // Coarse-grid nodes only: stride 2^level.
    std::vector<double> out;
    const int stride = 1 << level;
    for (int i = 0; i < nq; i += stride) out.push_back(f2[i]);
    for (int j = stride; j < np - 1; j += stride) {
      for (int i = 0; i < nq; i += stride) out.push_back(f1[(j - 1) * nq + i]);
    }
    return out;
  };
  const auto r0 = residual_on(0), r1 = residual_on(1), r2 = residual_on(2);
  const double e0 = sup_diff(r0, r1), e1 = sup_diff(r1, r2);
  const double order = std::log2(e0 / e1);
  CHECK(order == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("Jacobian and lambda derivative match finite differences") {
  Gen gen(42);
  for (int k = 0; k < 4; ++k) {
    const VorticityModel m = testing::random_model(gen, k);
    const double lam = -2.0 * functionals(m).gamma_inf_bound + gen.uniform(4.0, 10.0);
    const StripGrid g = StripGrid::make(M_PI, 16, 40, 12.0);
    const StripProblem prob(m, 9.81, g);
    const WaveState s = smooth_state(g, lam, 0.02, gen.uniform(0.01, 0.1));
    for (int d = 0; d < 3; ++d) {
      const Eigen::VectorXd v = smooth_direction(g, gen.engine());
      const double e1 = directional_fd_error(prob, s, v, 1e-4);
      const double e2 = directional_fd_error(prob, s, v, 1e-5);
      CHECK(e2 < 1e-4);
      CHECK(e1 / e2 == doctest::Approx(10.0).epsilon(0.05));
    }
    WaveState moved = s;
    moved.lambda += 1e-6;
    const Eigen::VectorXd fd = (prob.residual(moved) - prob.residual(s)) / 1e-6;
    const Eigen::VectorXd dl = prob.dlambda(s);
    CHECK((fd - dl).lpNorm<Eigen::Infinity>() <= 1e-5 * dl.lpNorm<Eigen::Infinity>());
  }
}

TEST_CASE("smooth directions are deterministic, unit and zero on the bottom") {
  const StripGrid g = StripGrid::make(M_PI, 12, 20, 10.0);
  Gen a(5), b(5);
  const Eigen::VectorXd u = smooth_direction(g, a.engine());
  const Eigen::VectorXd v = smooth_direction(g, b.engine());
  CHECK((u - v).norm() == 0.0);
  CHECK(u.lpNorm<Eigen::Infinity>() == doctest::Approx(1.0));
  CHECK(u.size() == static_cast<Eigen::Index>(g.unknowns()));
}

TEST_CASE("branch coordinate reads the cosine amplitude") {
  const auto bp = find_bifurcation_point(SLProblem::make(VorticityModel::zero(), 9.81, M_PI, 0.01));
  const StripGrid g = StripGrid::make(M_PI, 24, 60, 30.0);
  const StripProblem prob(VorticityModel::zero(), 9.81, g);
  for (double s : {-0.03, 0.0, 0.01, 0.2}) {
    CHECK(prob.branch_coordinate(initial_nontrivial_guess(bp, g, s)) ==
          doctest::Approx(s).scale(1e-3));
  }
  const WaveState w = initial_nontrivial_guess(bp, g, 0.07);
  const Eigen::Map<const Eigen::VectorXd> x(w.w.data(), static_cast<Eigen::Index>(g.unknowns()));
  CHECK(prob.branch_coordinate_weights().dot(x) == doctest::Approx(prob.branch_coordinate(w)));
}

TEST_CASE("half-domain and full-domain solves agree") {
  const double eps = 0.02;
  const VorticityModel m = VorticityModel::gerstner(0.4);
  const auto bp = find_bifurcation_point(SLProblem::make(m, 9.81, M_PI, eps));
  const StripGrid half = StripGrid::make(M_PI, 17, 40, 25.0);
  const StripProblem ph(m, 9.81, half);
  const StripProblem pf(m, 9.81, half.full());
  const WaveState seed = initial_nontrivial_guess(bp, half, 0.03);
  const WaveState sh = solve_fixed_coordinate(ph, seed, 0.03);
  const WaveState sf = solve_fixed_coordinate(pf, to_full(seed), 0.03);
  CHECK(sf.lambda == doctest::Approx(sh.lambda).epsilon(1e-9));
  CHECK(sup_diff(to_half(sf).w, sh.w) < 1e-9);
}

TEST_CASE("state transfer round trips") {
  Gen gen(43);
  const StripGrid g = StripGrid::make(M_PI, 13, 30, 8.0);
  WaveState s = WaveState::trivial(g, 5.0, 0.1);
  for (std::size_t k = 0; k < g.unknowns(); ++k) s.w[k] = gen.uniform(-0.1, 0.1);
  CHECK(sup_diff(to_half(to_full(s)).w, s.w) == 0.0);
  CHECK(sup_diff(resample(s, g).w, s.w) < 1e-15);
  CHECK(s.sup_abs() <= 0.1);
}

TEST_CASE("Newton keeps to the admissible set") {
  const StripGrid g = StripGrid::make(M_PI, 12, 20, 10.0);
  const StripProblem prob(VorticityModel::zero(), 9.81, g, 1e-3);
  const WaveState bad = WaveState::trivial(g, -1.0, 0.01);
  CHECK(prob.admissibility(bad).has_value());
  CHECK(prob.admissibility(bad)->clause() == 1);
  CHECK_THROWS_AS(newton_solve(prob, bad), AdmissibilityError);
  // A surface above (2λ - δ)/4g violates clause 3.
  WaveState high = WaveState::trivial(g, 9.0, 0.01);
  for (int i = 0; i < g.nq; ++i) high.w[g.index(i, 0)] = 0.5;
  REQUIRE(prob.admissibility(high).has_value());
  CHECK(prob.admissibility(high)->clause() == 3);
}

TEST_CASE("Newton converges quadratically near a branch point") {
  const auto bp = find_bifurcation_point(SLProblem::make(VorticityModel::zero(), 9.81, M_PI, 0.02));
  const StripGrid g = StripGrid::make(M_PI, 16, 60, 30.0);
  const StripProblem prob(VorticityModel::zero(), 9.81, g);
  const WaveState sol = solve_fixed_coordinate(prob, initial_nontrivial_guess(bp, g, 0.05), 0.05);
  // Perturb w at the converged λ and recover it by fixed-λ Newton.
  WaveState start = sol;
  for (std::size_t k = 0; k < g.unknowns(); ++k) start.w[k] *= 1.02;
  NewtonReport rep;
  const WaveState back = newton_solve(prob, start, {}, &rep);
  CHECK(rep.iterations <= 6);
  CHECK(rep.residual <= 1e-10);
  CHECK(sup_diff(back.w, sol.w) < 1e-8);
}
