// vorstokes: command-line front end for the rotational Stokes-wave solvers.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>

#include <CLI11.hpp>

#include "vorstokes/config.hpp"
#include "vorstokes/errors.hpp"
#include "vorstokes/io.hpp"
#include "vorstokes/nekrasov.hpp"
#include "vorstokes/pipeline.hpp"
#include "vorstokes/shear_flow.hpp"

namespace fs = std::filesystem;
using namespace vorstokes;

namespace {

struct Common {
  std::string config;
  std::string out;
  int jobs = 1;
  std::uint64_t seed = 0;
};

// Single documents go to stdout unless --out names a directory.
void emit(const Common& c, const std::string& name, const Json& j) {
  if (c.out.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  fs::create_directories(c.out);
  write_json(fs::path(c.out) / name, j);
}

fs::path out_dir(const Common& c, const char* fallback) {
  const fs::path dir = c.out.empty() ? fs::path(fallback) : fs::path(c.out);
  fs::create_directories(dir);
  return dir;
}

int cmd_trivial(const Common& c, std::optional<double> lambda, double eps) {
  const RunConfig cfg = parse_config(c.config);
  const BranchSetup setup = setup_branch(cfg, eps);
  const StripProblem& prob = *setup.problem;
  const double lam = lambda.value_or(setup.bifurcation.lambda_star);
  const WaveState st = WaveState::trivial(prob.grid(), lam, eps);
  const ShearFlow flow(prob.model(), prob.functionals(), lam);
  std::vector<double> p(prob.grid().np);
  for (int j = 0; j < prob.grid().np; ++j) p[j] = prob.grid().p(j);
  const auto h = h_trivial_table(flow, p, cfg.g);
  Json profile = Json::array();
  for (int j = 0; j < prob.grid().np; ++j) profile.push_back({p[j], a_coeff(flow, p[j]), h[j]});
  emit(c, "trivial.json",
       Json{{"lambda", lam},
            {"epsilon", eps},
            {"c", flow.c()},
            {"residual_sup", prob.residual_norm(st)},
            {"admissible", !prob.admissibility(st).has_value()},
            {"profile", profile}});
  return 0;
}

int cmd_bifurcate(const Common& c, double eps) {
  const RunConfig cfg = parse_config(c.config);
  const BranchSetup setup = setup_branch(cfg, eps);
  emit(c, "bifurcation.json", to_json(setup.bifurcation, setup.decay_rate));
  return 0;
}

int cmd_continue(const Common& c, double eps) {
  const RunConfig cfg = parse_config(c.config);
  const BranchRun run = run_branch(cfg, eps, c.seed);
  const fs::path dir = out_dir(c, "vorstokes_out");
  branch_table(run.records).write(dir / "branch.csv");
  fs::create_directories(dir / "points");
  for (std::size_t k = 0; k < run.branch.points.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "point_%03zu", k);
    Json st = state_document(cfg, run.branch.points[k]);
    st["s"] = run.branch.coordinates[k];
    write_json(dir / "points" / (std::string(name) + ".state.json"), st);
    write_json(dir / "points" / (std::string(name) + ".verify.json"), to_json(run.reports[k]));
  }
  write_json(dir / "branch.json",
             Json{{"epsilon", eps},
                  {"lambda_star", run.setup.bifurcation.lambda_star},
                  {"termination", to_string(run.branch.termination)},
                  {"diagnostic", run.branch.diagnostic},
                  {"points", run.branch.points.size()},
                  {"failures", run.failures},
                  {"jacobian_fd_error", run.jacobian_error}});
  std::cout << "branch: " << run.branch.points.size() << " points, termination "
            << to_string(run.branch.termination) << ", failed checks " << run.failures << "\n";
  return run.failures > 0 ? 1 : 0;
}

int cmd_homotopy(const Common& c, std::optional<double> target) {
  const RunConfig cfg = parse_config(c.config);
  const double s = target.value_or(cfg.homotopy_s);
  const BranchSetup setup = setup_branch(cfg, cfg.epsilon_schedule.back());
  HomotopyOptions ho;
  ho.newton.tol = cfg.tolerances.newton;
  const HomotopyResult h = epsilon_homotopy(*setup.problem, cfg.epsilon_schedule, s, ho);
  Json j{{"schedule", h.schedule},
         {"target_s", s},
         {"lambdas", h.lambdas},
         {"differences", h.differences},
         {"lambda_drift", h.lambda_drift}};
  if (h.failure_index) {
    j["failure_index"] = *h.failure_index;
    j["failure"] = h.failure;
  }
  emit(c, "homotopy.json", j);
  return h.failure_index ? 2 : 0;
}

int cmd_verify(const Common& c, const std::string& state_path, int directions) {
  RunConfig cfg = parse_config(c.config);
  WaveState st;
  const StripProblem prob = problem_for_state(cfg, read_json(state_path), st);
  const VerifyReport rep = verify_state(prob, st, cfg);
  Json j = to_json(rep);
  std::mt19937_64 rng(c.seed);
  double worst = 0.0;
  for (int d = 0; d < directions; ++d) {
    const Eigen::VectorXd v = smooth_direction(st.grid, rng);
    worst = std::max(worst, directional_fd_error(prob, st, v, 1e-5));
  }
  if (directions > 0) j["jacobian_fd_error"] = worst;
  emit(c, "verify.json", j);
  return rep.passed() && worst < 1e-4 ? 0 : 1;
}

int cmd_reconstruct(const Common& c, const std::string& state_path, int ny) {
  RunConfig cfg = parse_config(c.config);
  WaveState st;
  const StripProblem prob = problem_for_state(cfg, read_json(state_path), st);
  const PhysicalWave w = reconstruct(prob, st, ny);
  const fs::path dir = out_dir(c, "vorstokes_out");
  surface_table(w).write(dir / "surface.csv");
  field_table(w).write(dir / "field.csv");
  const SpeedMinimum m = min_relative_speed(w);
  write_json(dir / "reconstruct.json",
             Json{{"lambda", w.lambda},
                  {"c", w.c},
                  {"eta_crest", w.eta.back()},
                  {"eta_trough", w.eta.front()},
                  {"min_rel_speed", m.value},
                  {"min_rel_speed_at", m.location},
                  {"speed_error", w.speed_error}});
  return 0;
}

int cmd_nekrasov(const Common& c, std::optional<double> nu, std::optional<int> n,
                 std::optional<double> tol) {
  const RunConfig cfg = parse_config(c.config);
  const NekrasovState st = solve_nekrasov(nu.value_or(cfg.nekrasov.nu), n.value_or(cfg.nekrasov.n),
                                          tol.value_or(cfg.tolerances.nekrasov));
  emit(c, "nekrasov.json", to_json(st, nu_bound_check(st)));
  return 0;
}

int cmd_run(const Common& c) {
  const RunConfig cfg = parse_config(c.config);
  PipelineOptions opt;
  opt.jobs = c.jobs;
  opt.seed = c.seed;
  const fs::path dir = out_dir(c, "vorstokes_out");
  const int code = run_pipeline(cfg, dir, opt);
  std::cout << "run: exit " << code << ", manifest " << (dir / "manifest.json").string() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rotational Stokes waves in deep water: bifurcation, continuation, verification"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--config", common.config, "key = value configuration file")
      ->check(CLI::ExistingFile);
  app.add_option("--out", common.out, "output directory");
  app.add_option("--jobs", common.jobs, "concurrent branches")->check(CLI::PositiveNumber);
  app.add_option("--seed", common.seed, "seed for random Jacobian directions");

  std::optional<double> lambda, target, nu, tol;
  std::optional<int> n;
  double eps = 0.01;
  std::string state;
  int directions = 3, ny = 0;

  auto* trivial = app.add_subcommand("trivial", "shear flow and trivial-branch residual");
  trivial->add_option("--lambda", lambda, "Bernoulli parameter (default: bifurcation point)");
  trivial->add_option("--eps", eps, "regularization epsilon");

  auto* bifurcate = app.add_subcommand("bifurcate", "bifurcation point and eigenfunction");
  bifurcate->add_option("--eps", eps, "regularization epsilon (0 for the limit problem)");

  auto* cont = app.add_subcommand("continue", "trace and verify one branch");
  cont->add_option("--eps", eps, "regularization epsilon");

  auto* homotopy = app.add_subcommand("homotopy", "continue a fixed-amplitude wave in epsilon");
  homotopy->add_option("--s", target, "branch coordinate (default: homotopy.s)");

  auto* verify = app.add_subcommand("verify", "verify a saved state");
  verify->add_option("--state", state, "state JSON")->required()->check(CLI::ExistingFile);
  verify->add_option("--directions", directions, "random Jacobian directions");

  auto* recon = app.add_subcommand("reconstruct", "physical fields of a saved state");
  recon->add_option("--state", state, "state JSON")->required()->check(CLI::ExistingFile);
  recon->add_option("--ny", ny, "tensor rows (default: np)");

  auto* nek = app.add_subcommand("nekrasov", "irrotational Nekrasov equation");
  nek->add_option("--nu", nu, "parameter nu");
  nek->add_option("--n", n, "quadrature intervals");
  nek->add_option("--tol", tol, "Picard update tolerance");

  auto* run = app.add_subcommand("run", "full pipeline over the epsilon schedule");

  CLI11_PARSE(app, argc, argv);

  try {
    if (trivial->parsed()) return cmd_trivial(common, lambda, eps);
    if (bifurcate->parsed()) return cmd_bifurcate(common, eps);
    if (cont->parsed()) return cmd_continue(common, eps);
    if (homotopy->parsed()) return cmd_homotopy(common, target);
    if (verify->parsed()) return cmd_verify(common, state, directions);
    if (recon->parsed()) return cmd_reconstruct(common, state, ny);
    if (nek->parsed()) return cmd_nekrasov(common, nu, n, tol);
    if (run->parsed()) return cmd_run(common);
  } catch (const ConfigError& e) {
    std::cerr << "vorstokes: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "vorstokes: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
