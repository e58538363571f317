#include "vorstokes/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "vorstokes/errors.hpp"

namespace vorstokes {

namespace {

std::string symmetry_name(Symmetry s) { return s == Symmetry::FullEven ? "full" : "half"; }

Symmetry symmetry_from(const std::string& s) {
  if (s == "half") return Symmetry::HalfEven;
  if (s == "full") return Symmetry::FullEven;
  throw ConfigError("state: unknown grid symmetry '" + s + "'");
}

}  // namespace

Json to_json(const WaveState& s) {
  Json grid{{"L", s.grid.L},
            {"P", s.grid.P},
            {"nq", s.grid.nq},
            {"np", s.grid.np},
            {"symmetry", symmetry_name(s.grid.symmetry)}};
  return Json{{"lambda", s.lambda}, {"epsilon", s.epsilon}, {"grid", grid}, {"w", s.w}};
}

WaveState wave_state_from_json(const Json& j) {
  try {
    const auto& g = j.at("grid");
    WaveState s;
    s.lambda = j.at("lambda").get<double>();
    s.epsilon = j.at("epsilon").get<double>();
    s.grid = StripGrid::make(g.at("L").get<double>(), g.at("nq").get<int>(),
                             g.at("np").get<int>(), g.at("P").get<double>(),
                             symmetry_from(g.value("symmetry", std::string("half"))));
    s.w = j.at("w").get<std::vector<double>>();
    if (s.w.size() != s.grid.nodes()) {
      throw ConfigError("state: w has " + std::to_string(s.w.size()) + " values, grid needs " +
                        std::to_string(s.grid.nodes()));
    }
    return s;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("state: ") + e.what());
  }
}

Json to_json(const VorticityConfig& v) {
  Json j{{"kind", v.kind}, {"rho", v.rho}};
  if (v.kind == "exp") {
    j["amplitude"] = v.amplitude;
    j["rate"] = v.rate;
  } else if (v.kind == "gerstner") {
    j["m"] = v.m;
    j["b0"] = v.b0;
    j["slope"] = v.slope;
  } else if (v.kind == "tabulated") {
    Json k = Json::array();
    for (const auto& [r, gm] : v.knots) k.push_back({r, gm});
    j["knots"] = k;
  }
  return j;
}

VorticityConfig vorticity_from_json(const Json& j) {
  VorticityConfig v;
  try {
    v.kind = j.at("kind").get<std::string>();
    v.rho = j.value("rho", v.rho);
    v.amplitude = j.value("amplitude", v.amplitude);
    v.rate = j.value("rate", v.rate);
    v.m = j.value("m", v.m);
    v.b0 = j.value("b0", v.b0);
    v.slope = j.value("slope", v.slope);
    if (j.contains("knots")) {
      for (const auto& k : j.at("knots")) v.knots.emplace_back(k.at(0), k.at(1));
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("vorticity: ") + e.what());
  }
  return v;
}

Json to_json(const BifurcationPoint& bp, double decay_rate) {
  Json phi = Json::array();
  for (std::size_t k = 0; k < bp.p.size(); ++k) phi.push_back({bp.p[k], bp.phi[k]});
  return Json{{"epsilon", bp.epsilon},
              {"lambda_star", bp.lambda_star},
              {"mu", bp.mu},
              {"decay_rate", decay_rate},
              {"phi", phi}};
}

Json to_json(const Check& c) {
  Json j{{"name", c.name},  {"ref", c.ref},         {"pass", c.pass},
         {"skipped", c.skipped}, {"margin", c.margin}, {"tolerance", c.tolerance}};
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

Json to_json(const VerifyReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return Json{{"passed", r.passed()},
              {"pass_count", r.pass_count()},
              {"fail_count", r.fail_count()},
              {"trivial", r.trivial},
              {"checks", checks}};
}

Json to_json(const NekrasovState& st, const NuBound& bound) {
  Json theta = Json::array();
  for (std::size_t k = 0; k < st.s.size(); ++k) theta.push_back({st.s[k], st.theta[k]});
  Json j{{"nu", st.nu},
         {"n", st.n_quad},
         {"iterations", st.iterations},
         {"trivial", st.trivial()},
         {"theta", theta}};
  if (bound.skipped) {
    j["bound_ratio"] = nullptr;
  } else {
    j["bound_ratio"] = bound.ratio;
    j["bound"] = Json{{"lhs", bound.lhs}, {"middle", bound.middle}, {"rhs", bound.rhs},
                      {"holds", bound.holds}, {"ref", "nu-bound"}};
  }
  return j;
}

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << j.dump(2) << "\n";
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void CsvTable::add(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw DomainError("CsvTable: row width mismatch");
  rows_.push_back(std::move(row));
}

std::string CsvTable::num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) out += ',';
      out += cells[k];
    }
    out += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

void CsvTable::write(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << str();
}

CsvTable surface_table(const PhysicalWave& w) {
  CsvTable t({"x", "eta", "psi_x", "psi_y", "pressure", "bernoulli"});
  for (int i = 0; i < w.nq; ++i) {
    t.add({CsvTable::num(w.x[i]), CsvTable::num(w.eta[i]), CsvTable::num(w.node(w.psi_x, i, 0)),
           CsvTable::num(w.node(w.psi_y, i, 0)), CsvTable::num(w.node(w.pressure, i, 0)),
           CsvTable::num(w.node(w.bernoulli, i, 0))});
  }
  return t;
}

CsvTable field_table(const PhysicalWave& w) {
  CsvTable t({"x", "y", "psi", "psi_x", "psi_y", "pressure"});
  const std::size_t nx = w.grid_x.size();
  for (std::size_t k = 0; k < w.grid_y.size(); ++k) {
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t at = k * nx + i;
      if (std::isnan(w.t_psi[at])) continue;
      t.add({CsvTable::num(w.grid_x[i]), CsvTable::num(w.grid_y[k]), CsvTable::num(w.t_psi[at]),
             CsvTable::num(w.t_psi_x[at]), CsvTable::num(w.t_psi_y[at]),
             CsvTable::num(w.t_pressure[at])});
    }
  }
  return t;
}

}  // namespace vorstokes
