#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "vorstokes/continuation.hpp"
#include "vorstokes/numerics.hpp"
#include "vorstokes/shear_flow.hpp"
#include "vorstokes/wave_physics.hpp"

using namespace vorstokes;

namespace {

struct Solved {
  std::unique_ptr<StripProblem> prob;
  WaveState state;
};

Solved solve(const VorticityModel& m, double eps, double s, int nq = 24, int np = 100) {
  const auto bp = find_bifurcation_point(SLProblem::make(m, 9.81, M_PI, eps));
  const StripGrid g =
      StripGrid::make(M_PI, nq, np, default_depth(M_PI, bp.lambda_star, functionals(m)));
  Solved out;
  out.prob = std::make_unique<StripProblem>(m, 9.81, g);
  WaveState st = initial_nontrivial_guess(bp, g, std::min(s, 0.02));
  for (double t = std::min(s, 0.02); t <= s + 1e-12; t += 0.02) {
    st = solve_fixed_coordinate(*out.prob, st, t);
  }
  out.state = solve_fixed_coordinate(*out.prob, st, s);
  return out;
}

}  // namespace

TEST_CASE("numerics helpers") {
  const std::vector<double> x{0.0, 1.0, 2.0, 3.0}, y{1.0, 3.0, 5.0, 7.0};
  const LineFit f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(observed_order(4.0, 1.0) == doctest::Approx(2.0));
  std::vector<double> p, e;
  for (int j = 0; j < 200; ++j) {
    p.push_back(-0.1 * j);
    e.push_back(3.0 * std::exp(0.7 * p.back()));
  }
  CHECK(fit_exponential_rate(p, e) == doctest::Approx(0.7));
}

TEST_CASE("trivial state reconstructs the flat shear flow") {
  const VorticityModel m = VorticityModel::exp_decay(-0.6, 1.0);
  const double lam = 6.0, g = 9.81;
  const StripGrid grid = StripGrid::make(M_PI, 12, 60, 30.0);
  const StripProblem prob(m, g, grid);
  const PhysicalWave w = reconstruct(prob, WaveState::trivial(grid, lam, 0.01));
  const ShearFlow flow(m, lam);
  CHECK(w.c == doctest::Approx(flow.c()));
  for (int i = 0; i < w.nq; ++i) {
    CHECK(w.eta[i] == doctest::Approx(-lam / (2.0 * g)));
    CHECK(w.node(w.psi_y, i, 0) == doctest::Approx(-std::sqrt(lam)));
    CHECK(w.node(w.psi_x, i, 0) == doctest::Approx(0.0).scale(1.0));
    CHECK(w.node(w.pressure, i, 0) == doctest::Approx(0.0).scale(1.0));
    CHECK(w.node(w.psi_y, i, 10) == doctest::Approx(-a_coeff(flow, grid.p(10))));
  }
  const VerifyReport rep = verify_nodal(prob, WaveState::trivial(grid, lam, 0.01));
  CHECK(rep.trivial);
  CHECK(rep.passed());
}

TEST_CASE("reconstruction round-trips the hodograph derivatives") {
  Solved s = solve(VorticityModel::gerstner(0.5), 0.02, 0.06);
  const StripProblem& prob = *s.prob;
  const PhysicalWave w = reconstruct(prob, s.state);
  const Derivatives d = prob.derivatives(s.state);
  const StripGrid& g = s.state.grid;
  double worst = 0.0;
  for (int j = 0; j + 1 < g.np; ++j) {
    for (int i = 0; i < g.nq; ++i) {
      const std::size_t k = g.index(i, j);
      const double hq = -w.psi_x[k] / w.psi_y[k];
      const double hp = -1.0 / w.psi_y[k];
      worst = std::max({worst, std::abs(hq - d.wq[k]), std::abs(hp - (prob.ainv(j, s.state.lambda) + d.wp[k]))});
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("physical checks pass on computed waves") {
  for (const VorticityModel& m :
       {VorticityModel::zero(), VorticityModel::gerstner(0.5), VorticityModel::exp_decay(1.0, 1.0)}) {
    Solved s = solve(m, 0.02, 0.1);
    const VerifyReport rep = verify_all(*s.prob, s.state);
    for (const Check& c : rep.checks) {
      INFO(c.name << " margin " << c.margin << " tol " << c.tolerance << " " << c.note);
      CHECK(c.pass);
    }
    CHECK(rep.fail_count() == 0);
    CHECK(rep.pass_count() > 15);
    CHECK(rep.find("nodal1.wq_positive") != nullptr);
    // Sign routing: min-max and the amplitude chain apply only for γ ≤ 0.
    const Check* mm = rep.find("amplitude.min_max");
    REQUIRE(mm != nullptr);
    CHECK(mm->skipped == !m.signs().nonpositive);
  }
}

TEST_CASE("flipping the wave breaks the nodal pattern") {
  Solved s = solve(VorticityModel::zero(), 0.02, 0.05);
  WaveState flipped = s.state;
  const StripGrid& g = flipped.grid;
  for (int j = 0; j < g.np; ++j) {
    for (int i = 0; i < g.nq; ++i) flipped.w[g.index(i, j)] = s.state.at(g.nq - 1 - i, j);
  }
  const VerifyReport rep = verify_nodal(*s.prob, flipped);
  CHECK_FALSE(rep.passed());
  CHECK_FALSE(rep.find("nodal1.wq_positive")->pass);
}

TEST_CASE("crest is the slowest point and the crest speed is below lambda") {
  Solved s = solve(VorticityModel::zero(), 0.02, 0.15);
  const PhysicalWave w = reconstruct(*s.prob, s.state);
  const SpeedMinimum m = min_relative_speed(w);
  CHECK(m.location == "crest");
  const double crest = w.node(w.psi_y, w.nq - 1, 0);
  const double trough = w.node(w.psi_y, 0, 0);
  CHECK(crest * crest < w.lambda);
  CHECK(trough * trough > w.lambda);
  CHECK(w.eta.back() > w.eta.front());
}

TEST_CASE("stream-function residual decreases under refinement") {
  const VorticityModel m = VorticityModel::exp_decay(0.8, 1.0);
  Solved a = solve(m, 0.02, 0.08, 16, 80);
  Solved b = solve(m, 0.02, 0.08, 32, 160);
  const double ra = stream_residual(reconstruct(*a.prob, a.state), m);
  const double rb = stream_residual(reconstruct(*b.prob, b.state), m);
  INFO("residuals " << ra << " -> " << rb);
  // First order: the worst node sits next to the surface, where the residual
  // differences the one-sided surface derivatives once more.
  CHECK(rb < 0.6 * ra);
}

TEST_CASE("decay rate on an irrotational wave") {
  Solved s = solve(VorticityModel::zero(), 0.01, 0.05, 24, 200);
  const DecayReport d = verify_decay(*s.prob, s.state);
  const double k = M_PI / (M_PI * std::sqrt(s.state.lambda));
  CHECK(d.linear_rate == doctest::Approx(k));
  CHECK(d.linear_rate_eps == doctest::Approx(std::sqrt(k * k + 0.01)));
  CHECK(d.fitted_rate == doctest::Approx(d.linear_rate_eps).epsilon(0.02));
  CHECK(d.report.passed());
}

TEST_CASE("sigma solves its quadratic") {
  const double K = 0.8, M = 0.3, beta = 1.5, L = M_PI;
  const double s = decay_sigma(K, M, beta, L);
  const double km2 = K * M * M;
  CHECK(s > 0.0);
  CHECK(2.0 * s * s * (1.0 + M * M) + 4.0 * beta * s * km2 - 0.5 * std::exp(-beta * L) * km2 ==
        doctest::Approx(0.0).scale(1e-3));
  CHECK(decay_sigma(0.0, M, beta, L) == 0.0);
}
