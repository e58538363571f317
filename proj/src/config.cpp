#include "vorstokes/config.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/program_options.hpp>

#include "vorstokes/errors.hpp"

extern char** environ;

namespace vorstokes {

namespace po = boost::program_options;

namespace {

constexpr const char* kEnvPrefix = "VORSTOKES_";

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  boost::split(out, text, boost::is_any_of(","));
  for (auto& s : out) boost::trim(s);
  out.erase(std::remove(out.begin(), out.end(), std::string{}), out.end());
  return out;
}

double to_double(const std::string& s, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": not a number: '" + s + "'");
  }
}

std::vector<double> parse_schedule(const std::string& text) {
  std::vector<double> out;
  for (const auto& s : split_list(text)) out.push_back(to_double(s, "epsilon_schedule"));
  return out;
}

std::vector<std::pair<double, double>> parse_knots(const std::string& text) {
  std::vector<std::pair<double, double>> out;
  for (const auto& item : split_list(text)) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw ConfigError("vorticity.knots: expected r:gamma pairs, got '" + item + "'");
    }
    out.emplace_back(to_double(boost::trim_copy(item.substr(0, colon)), "vorticity.knots"),
                     to_double(boost::trim_copy(item.substr(colon + 1)), "vorticity.knots"));
  }
  return out;
}

// VORSTOKES_GRID__NQ=128 -> "grid.nq=128"; other variables are ignored.
std::string environment_text(const char* const* env) {
  std::string out;
  const std::string prefix = kEnvPrefix;
  for (; env && *env; ++env) {
    const std::string entry = *env;
    if (entry.rfind(prefix, 0) != 0) continue;
    const auto eq = entry.find('=');
    if (eq == std::string::npos) continue;
    std::string key = boost::to_lower_copy(entry.substr(prefix.size(), eq - prefix.size()));
    boost::replace_all(key, "__", ".");
    if (key == "l") key = "L";
    out += key + "=" + entry.substr(eq + 1) + "\n";
  }
  return out;
}

struct Raw {
  std::string schedule, knots;
};

po::options_description describe(RunConfig& c, Raw& raw) {
  po::options_description d;
  d.add_options()
      ("g", po::value(&c.g))
      ("L", po::value(&c.L))
      ("delta", po::value(&c.delta))
      ("grid.nq", po::value(&c.grid.nq))
      ("grid.np", po::value(&c.grid.np))
      ("grid.depth", po::value(&c.grid.P))
      ("caps.lambda_cap", po::value(&c.caps.lambda_cap))
      ("caps.w_cap", po::value(&c.caps.w_cap))
      ("caps.wp_cap", po::value(&c.caps.wp_cap))
      ("vorticity.kind", po::value(&c.vorticity.kind))
      ("vorticity.amplitude", po::value(&c.vorticity.amplitude))
      ("vorticity.rate", po::value(&c.vorticity.rate))
      ("vorticity.m", po::value(&c.vorticity.m))
      ("vorticity.b0", po::value(&c.vorticity.b0))
      ("vorticity.slope", po::value(&c.vorticity.slope))
      ("vorticity.rho", po::value(&c.vorticity.rho))
      ("vorticity.knots", po::value(&raw.knots))
      ("epsilon_schedule", po::value(&raw.schedule))
      ("seeds.s0", po::value(&c.s0))
      ("seeds.step", po::value(&c.step))
      ("continuation.max_steps", po::value(&c.max_steps))
      ("homotopy.s", po::value(&c.homotopy_s))
      ("tolerances.newton", po::value(&c.tolerances.newton))
      ("tolerances.verify", po::value(&c.tolerances.verify))
      ("tolerances.nekrasov", po::value(&c.tolerances.nekrasov))
      ("nekrasov.nu", po::value(&c.nekrasov.nu))
      ("nekrasov.n", po::value(&c.nekrasov.n));
  return d;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

VorticityModel VorticityConfig::build() const {
  const std::string k = boost::to_lower_copy(kind);
  if (k == "zero") return VorticityModel::zero(rho);
  if (k == "exp") return VorticityModel::exp_decay(amplitude, rate, rho);
  if (k == "gerstner") return VorticityModel::gerstner(m, b0, slope, rho);
  if (k == "tabulated") return VorticityModel::tabulated(knots, rho);
  throw ConfigError("vorticity.kind: expected zero, exp, gerstner or tabulated, got '" + kind +
                    "'");
}

void RunConfig::validate() const {
  require(g > 0.0, "g must be positive");
  require(L > 0.0, "L must be positive");
  require(delta > 0.0, "delta must be positive (the admissible set needs a margin)");
  require(grid.nq >= 8 && grid.np >= 8, "grid.nq and grid.np must be at least 8");
  require(grid.P >= 0.0, "grid.depth must be nonnegative (0 selects the default)");
  require(caps.lambda_cap >= 0.0, "caps.lambda_cap must be nonnegative (0 selects 100gL/pi)");
  require(caps.w_cap > 0.0 && caps.wp_cap > 0.0, "caps.w_cap and caps.wp_cap must be positive");
  require(!epsilon_schedule.empty(), "epsilon_schedule must not be empty");
  for (std::size_t i = 0; i < epsilon_schedule.size(); ++i) {
    const double e = epsilon_schedule[i];
    require(e > 0.0 && e < 1.0, "epsilon_schedule entries must lie in (0, 1)");
    require(i == 0 || e < epsilon_schedule[i - 1], "epsilon_schedule must be strictly decreasing");
  }
  require(s0 > 0.0 && step > 0.0, "seeds.s0 and seeds.step must be positive");
  require(max_steps >= 0, "continuation.max_steps must be nonnegative");
  require(homotopy_s >= 0.0, "homotopy.s must be nonnegative");
  require(tolerances.newton > 0.0 && tolerances.verify > 0.0 && tolerances.nekrasov > 0.0,
          "tolerances must be positive");
  require(nekrasov.nu > 0.0 && nekrasov.n >= 4, "nekrasov.nu must be positive and nekrasov.n >= 4");
  try {
    (void)vorticity.build();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("vorticity: ") + e.what());
  }
}

RunConfig parse_config_text(const std::string& text, const char* const* env) {
  RunConfig c;
  Raw raw;
  const auto desc = describe(c, raw);
  po::variables_map vm;
  try {
    // First store wins, so the environment overrides the file.
    std::istringstream env_in(environment_text(env ? env : environ));
    po::store(po::parse_config_file(env_in, desc, false), vm);
    std::istringstream file_in(text);
    po::store(po::parse_config_file(file_in, desc, false), vm);
    po::notify(vm);
  } catch (const po::error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (vm.count("epsilon_schedule")) c.epsilon_schedule = parse_schedule(raw.schedule);
  if (vm.count("vorticity.knots")) c.vorticity.knots = parse_knots(raw.knots);
  c.validate();
  return c;
}

RunConfig parse_config(const std::string& path) {
  if (path.empty()) return parse_config_text("");
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string render_config(const RunConfig& c) {
  std::ostringstream o;
  o << std::setprecision(17);
  o << "g = " << c.g << "\nL = " << c.L << "\ndelta = " << c.delta << "\n";
  o << "epsilon_schedule = ";
  for (std::size_t i = 0; i < c.epsilon_schedule.size(); ++i) {
    o << (i ? ", " : "") << c.epsilon_schedule[i];
  }
  o << "\n\n[grid]\nnq = " << c.grid.nq << "\nnp = " << c.grid.np << "\ndepth = " << c.grid.P
    << "\n\n[caps]\nlambda_cap = " << c.caps.lambda_cap << "\nw_cap = " << c.caps.w_cap
    << "\nwp_cap = " << c.caps.wp_cap << "\n\n[vorticity]\nkind = " << c.vorticity.kind
    << "\namplitude = " << c.vorticity.amplitude << "\nrate = " << c.vorticity.rate
    << "\nm = " << c.vorticity.m << "\nb0 = " << c.vorticity.b0
    << "\nslope = " << c.vorticity.slope << "\nrho = " << c.vorticity.rho << "\n";
  if (!c.vorticity.knots.empty()) {
    o << "knots = ";
    for (std::size_t i = 0; i < c.vorticity.knots.size(); ++i) {
      o << (i ? ", " : "") << c.vorticity.knots[i].first << ":" << c.vorticity.knots[i].second;
    }
    o << "\n";
  }
  o << "\n[seeds]\ns0 = " << c.s0 << "\nstep = " << c.step
    << "\n\n[continuation]\nmax_steps = " << c.max_steps << "\n\n[homotopy]\ns = " << c.homotopy_s
    << "\n\n[tolerances]\nnewton = " << c.tolerances.newton
    << "\nverify = " << c.tolerances.verify << "\nnekrasov = " << c.tolerances.nekrasov
    << "\n\n[nekrasov]\nnu = " << c.nekrasov.nu << "\nn = " << c.nekrasov.n << "\n";
  return o.str();
}

}  // namespace vorstokes
