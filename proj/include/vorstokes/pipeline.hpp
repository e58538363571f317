#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vorstokes/config.hpp"
#include "vorstokes/continuation.hpp"
#include "vorstokes/io.hpp"
#include "vorstokes/wave_physics.hpp"

namespace vorstokes {

/// A module failure surfaced by the orchestrator; what() starts with
/// "[module] ".
class PipelineError : public std::runtime_error {
 public:
  PipelineError(std::string module, const std::string& what)
      : std::runtime_error("[" + module + "] " + what), module_(std::move(module)) {}
  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

/// One row per accepted branch point.
struct BranchRecord {
  double s = 0.0;
  double lambda = 0.0;
  double c = 0.0;
  double eta_crest = 0.0;
  double eta_trough = 0.0;
  double min_rel_speed = 0.0;
  int verify_pass_count = 0;
  int verify_fail_count = 0;
  std::string termination;  // "Running" except on the last row
};

/// State JSON plus the vorticity block, g and δ needed to rebuild its problem.
Json state_document(const RunConfig& config, const WaveState& state);

/// Reads a state document; its vorticity, g, δ and L override `config`.
StripProblem problem_for_state(RunConfig& config, const Json& doc, WaveState& state);

/// Bifurcation point, strip problem and grid for one ε under a config.
struct BranchSetup {
  double epsilon = 0.0;
  BifurcationPoint bifurcation;
  double decay_rate = 0.0;
  std::unique_ptr<StripProblem> problem;
};
BranchSetup setup_branch(const RunConfig& config, double epsilon);

struct BranchRun {
  BranchSetup setup;
  Branch branch;
  std::vector<VerifyReport> reports;  // verify_all plus decay, per point
  std::vector<BranchRecord> records;
  double jacobian_error = 0.0;        // worst directional FD error at t = 1e-5
  int failures = 0;                   // failed mandatory checks over the branch
};

/// Bifurcate, continue and verify one branch. Directions for the Jacobian
/// spot check come from a generator seeded with `seed`.
BranchRun run_branch(const RunConfig& config, double epsilon, std::uint64_t seed = 0);

/// Verification of one state: every physical check and the decay report.
VerifyReport verify_state(const StripProblem& prob, const WaveState& state,
                          const RunConfig& config);

BranchRecord make_record(const StripProblem& prob, const WaveState& state, double s,
                         const VerifyReport& report);

CsvTable branch_table(const std::vector<BranchRecord>& records);

struct PipelineOptions {
  int jobs = 1;
  std::uint64_t seed = 0;
  bool write_states = true;
};

/// Runs every ε of the schedule and the homotopy, writing into `out`:
/// config.txt, manifest.json, homotopy.json and eps_<k>/{bifurcation.json,
/// branch.csv, branch.json, points/...}. Returns 0 when every mandatory
/// check passed, 1 on a verification failure and 2 on a module error.
int run_pipeline(const RunConfig& config, const std::filesystem::path& out,
                 const PipelineOptions& opt = {});

}  // namespace vorstokes
