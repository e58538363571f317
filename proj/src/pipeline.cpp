#include "vorstokes/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <future>

#include "vorstokes/errors.hpp"
#include "vorstokes/shear_flow.hpp"

namespace vorstokes {

namespace fs = std::filesystem;

namespace {

template <class F>
auto tagged(const char* module, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(module, e.what());
  }
}

std::string point_name(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "point_%03zu", k);
  return buf;
}

std::string eps_dir(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "eps_%02zu", k);
  return buf;
}

Json record_json(const BranchRecord& r) {
  return Json{{"s", r.s},
              {"lambda", r.lambda},
              {"c", r.c},
              {"eta_crest", r.eta_crest},
              {"eta_trough", r.eta_trough},
              {"min_rel_speed", r.min_rel_speed},
              {"verify_pass_count", r.verify_pass_count},
              {"verify_fail_count", r.verify_fail_count},
              {"termination", r.termination}};
}

}  // namespace

Json state_document(const RunConfig& config, const WaveState& state) {
  Json j = to_json(state);
  j["vorticity"] = to_json(config.vorticity);
  j["g"] = config.g;
  j["delta"] = config.delta;
  return j;
}

StripProblem problem_for_state(RunConfig& config, const Json& doc, WaveState& state) {
  state = wave_state_from_json(doc);
  if (doc.contains("vorticity")) config.vorticity = vorticity_from_json(doc.at("vorticity"));
  config.g = doc.value("g", config.g);
  config.delta = doc.value("delta", config.delta);
  config.L = state.grid.L;
  config.validate();
  return StripProblem(config.vorticity.build(), config.g, state.grid, config.delta);
}

BranchSetup setup_branch(const RunConfig& config, double epsilon) {
  BranchSetup out;
  out.epsilon = epsilon;
  const VorticityModel model = tagged("vorticity", [&] { return config.vorticity.build(); });
  const VorticityFunctionals fn = tagged("vorticity", [&] { return functionals(model); });
  out.bifurcation = tagged("bifurcation_sl", [&] {
    return find_bifurcation_point(SLProblem::make(model, config.g, config.L, epsilon));
  });
  out.decay_rate = eigenfunction_decay_rate(out.bifurcation, fn);
  const double depth = config.grid.P > 0.0
                           ? config.grid.P
                           : default_depth(config.L, out.bifurcation.lambda_star, fn);
  out.problem = tagged("strip_solver", [&] {
    return std::make_unique<StripProblem>(
        model, fn, config.g,
        StripGrid::make(config.L, config.grid.nq, config.grid.np, depth), config.delta);
  });
  return out;
}

VerifyReport verify_state(const StripProblem& prob, const WaveState& state,
                          const RunConfig& config) {
  return tagged("wave_physics", [&] {
    return verify_all(prob, state, {config.tolerances.verify});
  });
}

BranchRecord make_record(const StripProblem& prob, const WaveState& state, double s,
                         const VerifyReport& report) {
  BranchRecord r;
  r.s = s;
  r.lambda = state.lambda;
  r.c = wave_speed(state.lambda, prob.functionals());
  const PhysicalWave w = tagged("wave_physics", [&] { return reconstruct(prob, state); });
  r.eta_crest = w.eta.back();
  r.eta_trough = w.eta.front();
  r.min_rel_speed = min_relative_speed(w).value;
  r.verify_pass_count = report.pass_count();
  r.verify_fail_count = report.fail_count();
  r.termination = to_string(Termination::Running);
  return r;
}

CsvTable branch_table(const std::vector<BranchRecord>& records) {
  CsvTable t({"s", "lambda", "c", "eta_crest", "eta_trough", "min_rel_speed",
              "verify_pass_count", "verify_fail_count", "termination"});
  for (const auto& r : records) {
    t.add({CsvTable::num(r.s), CsvTable::num(r.lambda), CsvTable::num(r.c),
           CsvTable::num(r.eta_crest), CsvTable::num(r.eta_trough),
           CsvTable::num(r.min_rel_speed), CsvTable::num(static_cast<long long>(r.verify_pass_count)),
           CsvTable::num(static_cast<long long>(r.verify_fail_count)), r.termination});
  }
  return t;
}

BranchRun run_branch(const RunConfig& config, double epsilon, std::uint64_t seed) {
  BranchRun run;
  run.setup = setup_branch(config, epsilon);
  const StripProblem& prob = *run.setup.problem;

  BranchOptions bo;
  bo.s0 = config.s0;
  bo.step = config.step;
  bo.max_steps = config.max_steps;
  bo.caps = config.caps;
  bo.newton.tol = config.tolerances.newton;
  bo.corrector.tol = config.tolerances.newton;
  run.branch = tagged("branch_continuation",
                      [&] { return trace_branch(prob, run.setup.bifurcation, bo); });

  for (std::size_t k = 0; k < run.branch.points.size(); ++k) {
    const WaveState& st = run.branch.points[k];
    VerifyReport rep = verify_state(prob, st, config);
    run.failures += rep.fail_count();
    run.records.push_back(make_record(prob, st, run.branch.coordinates[k], rep));
    run.reports.push_back(std::move(rep));
  }
  if (!run.records.empty()) run.records.back().termination = to_string(run.branch.termination);

  // Jacobian spot check at the first and last accepted points, smooth directions.
  if (!run.branch.points.empty()) {
    std::mt19937_64 rng(seed);
    for (const WaveState* st : {&run.branch.points.front(), &run.branch.points.back()}) {
      for (int d = 0; d < 3; ++d) {
        const Eigen::VectorXd v = smooth_direction(st->grid, rng);
        run.jacobian_error =
            std::max(run.jacobian_error, directional_fd_error(prob, *st, v, 1e-5));
      }
    }
    if (run.jacobian_error >= 1e-4) ++run.failures;
  }
  return run;
}

int run_pipeline(const RunConfig& config, const fs::path& out, const PipelineOptions& opt) {
  config.validate();
  fs::create_directories(out);
  std::vector<std::string> files;
  auto emit_json = [&](const fs::path& rel, const Json& j) {
    write_json(out / rel, j);
    files.push_back(rel.generic_string());
  };
  auto emit_csv = [&](const fs::path& rel, const CsvTable& t) {
    t.write(out / rel);
    files.push_back(rel.generic_string());
  };
  {
    const fs::path rel = "config.txt";
    std::FILE* f = std::fopen((out / rel).c_str(), "w");
    if (!f) throw ConfigError("cannot write " + (out / rel).string());
    const std::string text = render_config(config);
    std::fputs(text.c_str(), f);
    std::fclose(f);
    files.push_back(rel.generic_string());
  }

  const auto& schedule = config.epsilon_schedule;
  std::vector<std::optional<BranchRun>> runs(schedule.size());
  std::vector<std::string> errors(schedule.size());
  const std::size_t jobs = static_cast<std::size_t>(std::max(1, opt.jobs));
  for (std::size_t start = 0; start < schedule.size(); start += jobs) {
    std::vector<std::future<BranchRun>> batch;
    const std::size_t stop = std::min(schedule.size(), start + jobs);
    for (std::size_t k = start; k < stop; ++k) {
      batch.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred,
                                 [&, k] { return run_branch(config, schedule[k], opt.seed + k); }));
    }
    for (std::size_t k = start; k < stop; ++k) {
      try {
        runs[k] = batch[k - start].get();
      } catch (const std::exception& e) {
        errors[k] = e.what();
      }
    }
  }

  int failures = 0;
  bool module_error = false;
  Json branches = Json::array();
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    const fs::path dir = eps_dir(k);
    fs::create_directories(out / dir);
    Json summary{{"epsilon", schedule[k]}};
    if (!runs[k]) {
      module_error = true;
      summary["error"] = errors[k];
      emit_json(dir / "branch.json", summary);
      branches.push_back(summary);
      continue;
    }
    const BranchRun& run = *runs[k];
    failures += run.failures;
    emit_json(dir / "bifurcation.json", to_json(run.setup.bifurcation, run.setup.decay_rate));
    emit_csv(dir / "branch.csv", branch_table(run.records));
    Json rows = Json::array();
    for (const auto& r : run.records) rows.push_back(record_json(r));
    summary["lambda_star"] = run.setup.bifurcation.lambda_star;
    summary["termination"] = to_string(run.branch.termination);
    summary["diagnostic"] = run.branch.diagnostic;
    summary["points"] = run.branch.points.size();
    summary["failures"] = run.failures;
    summary["jacobian_fd_error"] = run.jacobian_error;
    summary["records"] = rows;
    const auto& g = run.setup.problem->grid();
    summary["grid"] = Json{{"L", g.L}, {"P", g.P}, {"nq", g.nq}, {"np", g.np}};
    emit_json(dir / "branch.json", summary);
    if (opt.write_states) {
      fs::create_directories(out / dir / "points");
      for (std::size_t p = 0; p < run.branch.points.size(); ++p) {
        const fs::path base = dir / "points" / point_name(p);
        Json state = state_document(config, run.branch.points[p]);
        state["s"] = run.branch.coordinates[p];
        emit_json(base.string() + ".state.json", state);
        emit_json(base.string() + ".verify.json", to_json(run.reports[p]));
        const PhysicalWave w = reconstruct(*run.setup.problem, run.branch.points[p]);
        emit_csv(base.string() + ".surface.csv", surface_table(w));
      }
    }
    summary.erase("records");
    branches.push_back(summary);
  }

  // Homotopy on the grid of the smallest ε (deepest default truncation).
  Json homotopy;
  try {
    const BranchSetup hs = setup_branch(config, schedule.back());
    HomotopyOptions ho;
    ho.newton.tol = config.tolerances.newton;
    const HomotopyResult h = tagged("branch_continuation", [&] {
      return epsilon_homotopy(*hs.problem, schedule, config.homotopy_s, ho);
    });
    bool monotone = true;
    for (std::size_t k = 1; k < h.differences.size(); ++k) {
      monotone = monotone && h.differences[k] < h.differences[k - 1];
    }
    homotopy = Json{{"schedule", h.schedule},     {"target_s", config.homotopy_s},
                    {"lambdas", h.lambdas},       {"differences", h.differences},
                    {"lambda_drift", h.lambda_drift}, {"cauchy_monotone", monotone}};
    if (h.failure_index) {
      homotopy["failure_index"] = *h.failure_index;
      homotopy["failure"] = "[branch_continuation] " + h.failure;
      module_error = true;
    }
  } catch (const std::exception& e) {
    homotopy = Json{{"error", e.what()}};
    module_error = true;
  }
  emit_json("homotopy.json", homotopy);

  Json lambda0;
  try {
    lambda0 = setup_branch(config, 0.0).bifurcation.lambda_star;
  } catch (const std::exception&) {
    lambda0 = nullptr;
  }

  const int code = module_error ? 2 : (failures > 0 ? 1 : 0);
  std::sort(files.begin(), files.end());
  Json manifest{{"exit_code", code},
                {"failed_checks", failures},
                {"lambda0", lambda0},
                {"vorticity", to_json(config.vorticity)},
                {"branches", branches},
                {"files", files}};
  write_json(out / "manifest.json", manifest);
  return code;
}

}  // namespace vorstokes
