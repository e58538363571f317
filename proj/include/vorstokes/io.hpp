#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "vorstokes/config.hpp"
#include "vorstokes/nekrasov.hpp"
#include "vorstokes/strip.hpp"
#include "vorstokes/sturm_liouville.hpp"
#include "vorstokes/wave_physics.hpp"

namespace vorstokes {

using Json = nlohmann::json;

/// {lambda, epsilon, grid: {L, P, nq, np, symmetry}, w} with w row-major in p.
Json to_json(const WaveState& state);
WaveState wave_state_from_json(const Json& j);

Json to_json(const VorticityConfig& v);
VorticityConfig vorticity_from_json(const Json& j);

/// {epsilon, lambda_star, mu, decay_rate, phi: [[p, value], ...]}.
Json to_json(const BifurcationPoint& bp, double decay_rate);

Json to_json(const Check& c);
Json to_json(const VerifyReport& r);

/// {nu, n, iterations, theta: [[s, value], ...], bound_ratio}; bound_ratio is
/// null for the trivial solution.
Json to_json(const NekrasovState& st, const NuBound& bound);

/// Pretty-printed with a trailing newline; keys are sorted so equal values
/// give identical bytes.
void write_json(const std::filesystem::path& path, const Json& j);
Json read_json(const std::filesystem::path& path);

/// CSV with a header line; numbers use the shortest round-trip form.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void add(std::vector<std::string> row);
  static std::string num(double v);
  static std::string num(long long v) { return std::to_string(v); }
  void write(const std::filesystem::path& path) const;
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Surface samples x, eta, psi_x, psi_y, pressure, bernoulli at p = 0.
CsvTable surface_table(const PhysicalWave& wave);
/// Tensor samples x, y, psi, psi_x, psi_y, pressure (rows above the surface skipped).
CsvTable field_table(const PhysicalWave& wave);

}  // namespace vorstokes
