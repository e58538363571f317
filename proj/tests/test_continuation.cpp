#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "vorstokes/continuation.hpp"

using namespace vorstokes;

namespace {

// x² + λ² = 1: a closed curve with turning points in both coordinates.
class Circle : public ContinuationProblem {
 public:
  Eigen::Index size() const override { return 1; }
  Eigen::VectorXd residual(const Eigen::VectorXd& x, double lambda) const override {
    return Eigen::VectorXd::Constant(1, x[0] * x[0] + lambda * lambda - 1.0);
  }
  SparseMatrix jacobian(const Eigen::VectorXd& x, double) const override {
    SparseMatrix J(1, 1);
    J.insert(0, 0) = 2.0 * x[0];
    return J;
  }
  Eigen::VectorXd dlambda(const Eigen::VectorXd&, double lambda) const override {
    return Eigen::VectorXd::Constant(1, 2.0 * lambda);
  }
};

struct SmallBranch {
  VorticityModel model = VorticityModel::zero();
  BifurcationPoint bp;
  StripGrid grid;
  std::unique_ptr<StripProblem> prob;

  explicit SmallBranch(double eps, VorticityModel m = VorticityModel::zero()) : model(std::move(m)) {
    bp = find_bifurcation_point(SLProblem::make(model, 9.81, M_PI, eps));
    grid = StripGrid::make(M_PI, 16, 60, 30.0);
    prob = std::make_unique<StripProblem>(model, 9.81, grid);
  }
};

}  // namespace

TEST_CASE("pseudo-arclength follows a circle through its turning points") {
  Circle c;
  BranchVector z{Eigen::VectorXd::Constant(1, 1.0), 0.0};
  BranchVector t{Eigen::VectorXd::Zero(1), 1.0};
  t = tangent(c, z, t);
  double angle = 0.0;
  for (int k = 0; k < 40; ++k) {
    int iters = 0;
    auto next = palc_correct(c, z, t, 0.1, {}, &iters);
    REQUIRE(next.has_value());
    CHECK(std::abs(next->x[0] * next->x[0] + next->lambda * next->lambda - 1.0) < 1e-10);
    angle += 2.0 * std::asin(0.5 * std::hypot(next->x[0] - z.x[0], next->lambda - z.lambda));
    t = tangent(c, *next, t);
    z = *next;
  }
  // Forty chords of length ~0.1 sweep past both turning points without reversing.
  CHECK(angle == doctest::Approx(4.0).epsilon(0.01));
  CHECK(weighted_dot(t, t) == doctest::Approx(1.0));
}

TEST_CASE("termination clauses are classified in order") {
  const StripGrid g = StripGrid::make(M_PI, 12, 20, 10.0);
  const StripProblem prob(VorticityModel::zero(), 9.81, g, 1e-3);
  CHECK(classify_termination(prob, WaveState::trivial(g, 9.0, 0.01)) == Termination::Running);
  CHECK(classify_termination(prob, WaveState::trivial(g, 1000.0, 0.01)) == Termination::LambdaBlowup);
  Caps small;
  small.w_cap = 0.05;
  WaveState bumped = WaveState::trivial(g, 9.0, 0.01);
  bumped.w[g.index(3, 5)] = 0.1;
  CHECK(classify_termination(prob, bumped, small) == Termination::SupWBlowup);
  CHECK(classify_termination(prob, WaveState::trivial(g, 5e-4, 0.01)) == Termination::LambdaFloor);
  WaveState high = WaveState::trivial(g, 9.0, 0.01);
  for (int i = 0; i < g.nq; ++i) high.w[g.index(i, 0)] = 0.5;
  CHECK(classify_termination(prob, high) == Termination::SurfaceClause);
  CHECK(to_string(Termination::StagnationClause) == "StagnationClause");
}

TEST_CASE("a short branch climbs in amplitude and stays admissible") {
  SmallBranch b(0.02);
  BranchOptions opt;
  opt.max_steps = 4;
  const Branch br = trace_branch(*b.prob, b.bp, opt);
  CHECK(br.termination == Termination::MaxSteps);
  REQUIRE(br.points.size() == 5);
  for (std::size_t k = 0; k < br.points.size(); ++k) {
    CHECK_FALSE(b.prob->admissibility(br.points[k]).has_value());
    CHECK(b.prob->residual_norm(br.points[k]) <= 1e-9);
    if (k > 0) CHECK(br.coordinates[k] > br.coordinates[k - 1]);
  }
  CHECK(br.coordinates.front() == doctest::Approx(0.01));
  // Supercritical: λ rises with amplitude for γ = 0.
  CHECK(br.points.back().lambda > br.points.front().lambda);
}

TEST_CASE("negative branch coordinate is the half-period translate") {
  SmallBranch b(0.02, VorticityModel::exp_decay(-0.5, 1.0));
  const StripGrid& g = b.grid;
  for (double s : {0.01, 0.03, 0.05}) {
    const WaveState up = solve_fixed_coordinate(*b.prob, initial_nontrivial_guess(b.bp, g, s), s);
    const WaveState down = solve_fixed_coordinate(*b.prob, initial_nontrivial_guess(b.bp, g, -s), -s);
    CHECK(down.lambda == doctest::Approx(up.lambda).epsilon(1e-10));
    double d = 0.0;
    for (int j = 0; j < g.np; ++j) {
      for (int i = 0; i < g.nq; ++i) d = std::max(d, std::abs(down.at(i, j) - up.at(g.nq - 1 - i, j)));
    }
    CHECK(d < 1e-9);
  }
}

TEST_CASE("epsilon homotopy is Cauchy and re-solves quickly") {
  SmallBranch b(0.0125);
  const HomotopyResult h = epsilon_homotopy(*b.prob, {0.1, 0.05, 0.025, 0.0125}, 0.02);
  REQUIRE_FALSE(h.failure_index.has_value());
  REQUIRE(h.differences.size() == 3);
  for (std::size_t k = 1; k < h.differences.size(); ++k) CHECK(h.differences[k] < h.differences[k - 1]);
  for (std::size_t k = 1; k < h.lambdas.size(); ++k) CHECK(h.lambdas[k] > h.lambdas[k - 1]);

  // Halving ε from a converged point needs only a few Newton steps.
  for (double s : {0.02, 0.05}) {
    const auto bp = find_bifurcation_point(SLProblem::make(b.model, 9.81, M_PI, 0.04));
    WaveState st = solve_fixed_coordinate(*b.prob, initial_nontrivial_guess(bp, b.grid, s), s);
    st.epsilon = 0.02;
    NewtonReport rep;
    solve_fixed_coordinate(*b.prob, st, s, {}, &rep);
    CHECK(rep.iterations <= 10);
  }
}

TEST_CASE("homotopy rejects bad schedules") {
  SmallBranch b(0.05);
  CHECK_THROWS_AS(epsilon_homotopy(*b.prob, {}, 0.02), DomainError);
  CHECK_THROWS_AS(epsilon_homotopy(*b.prob, {0.05, 0.1}, 0.02), DomainError);
}
