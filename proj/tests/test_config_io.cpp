#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"
#include "vorstokes/config.hpp"
#include "vorstokes/errors.hpp"
#include "vorstokes/io.hpp"

using namespace vorstokes;

namespace {

const char* const kNoEnv[] = {nullptr};

RunConfig parse(const std::string& text, const char* const* env = kNoEnv) {
  return parse_config_text(text, env);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("empty configuration gives the defaults") {
  const RunConfig c = parse("");
  CHECK(c.g == 9.81);
  CHECK(c.L == doctest::Approx(M_PI));
  CHECK(c.delta == 1e-3);
  CHECK(c.grid.nq == 64);
  CHECK(c.grid.np == 200);
  CHECK(c.epsilon_schedule == std::vector<double>{0.1, 0.05, 0.025, 0.0125});
  CHECK(c.vorticity.kind == "zero");
  CHECK(c.max_steps == 30);
}

TEST_CASE("sections, lists and knots") {
  const RunConfig c = parse(
      "g = 9.8\n"
      "epsilon_schedule = 0.2, 0.1\n"
      "# comment\n"
      "[grid]\nnq = 32\nnp = 80\ndepth = 25\n"
      "[vorticity]\nkind = tabulated\nknots = 0:-1, 0.5:-0.5, 1:-0.1, 2:0\n"
      "[continuation]\nmax_steps = 7\n");
  CHECK(c.g == 9.8);
  CHECK(c.epsilon_schedule == std::vector<double>{0.2, 0.1});
  CHECK(c.grid.nq == 32);
  CHECK(c.grid.P == 25.0);
  CHECK(c.max_steps == 7);
  REQUIRE(c.vorticity.knots.size() == 4);
  CHECK(c.vorticity.knots[1] == std::pair<double, double>{0.5, -0.5});
  CHECK(c.vorticity.build().kind() == VorticityKind::Tabulated);
}

TEST_CASE("invalid configurations are rejected") {
  CHECK_THROWS_AS(parse("delta = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("g = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse("epsilon_schedule = 0.05, 0.1\n"), ConfigError);
  CHECK_THROWS_AS(parse("epsilon_schedule = 0.1, 1.5\n"), ConfigError);
  CHECK_THROWS_AS(parse("bogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[grid]\nnq = four\n"), ConfigError);
  CHECK_THROWS_AS(parse("[vorticity]\nkind = swirl\n"), ConfigError);
  CHECK_THROWS_AS(parse("[vorticity]\nkind = gerstner\nm = 1.2\n"), ConfigError);
  CHECK_THROWS_AS(parse("[vorticity]\nkind = tabulated\nknots = 0:1, 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("/nonexistent/vorstokes.cfg"), ConfigError);
}

TEST_CASE("environment overrides the file") {
  const char* const env[] = {"VORSTOKES_GRID__NQ=20", "VORSTOKES_L=2.5", "PATH=/usr/bin",
                             "VORSTOKES_VORTICITY__KIND=gerstner", nullptr};
  const RunConfig c = parse("L = 3\n[grid]\nnq = 40\n", env);
  CHECK(c.grid.nq == 20);
  CHECK(c.L == 2.5);
  CHECK(c.vorticity.kind == "gerstner");
  const char* const bad[] = {"VORSTOKES_NOPE=1", nullptr};
  CHECK_THROWS_AS(parse("", bad), ConfigError);
}

TEST_CASE("rendered configuration parses back to the same values") {
  RunConfig c = parse("[vorticity]\nkind = exp\namplitude = -0.3\nrate = 2\n[grid]\nnq = 33\n");
  c.epsilon_schedule = {0.3, 0.1, 0.01};
  const RunConfig d = parse(render_config(c));
  CHECK(render_config(d) == render_config(c));
  CHECK(d.vorticity.amplitude == -0.3);
  CHECK(d.epsilon_schedule == c.epsilon_schedule);
}

TEST_CASE("wave state JSON round trip") {
  testing::Gen gen(61);
  const StripGrid g = StripGrid::make(2.0, 10, 12, 7.5);
  WaveState s = WaveState::trivial(g, 4.25, 0.0125);
  for (double& v : s.w) v = gen.uniform(-1.0, 1.0);
  const Json j = to_json(s);
  const WaveState t = wave_state_from_json(Json::parse(j.dump()));
  CHECK(t.lambda == s.lambda);
  CHECK(t.epsilon == s.epsilon);
  CHECK(t.grid.L == 2.0);
  CHECK(t.grid.nq == 10);
  CHECK(t.w == s.w);

  Json broken = j;
  broken["w"].erase(broken["w"].begin());
  CHECK_THROWS_AS(wave_state_from_json(broken), ConfigError);
  broken = j;
  broken.erase("lambda");
  CHECK_THROWS_AS(wave_state_from_json(broken), ConfigError);
}

TEST_CASE("vorticity JSON round trip") {
  VorticityConfig v;
  v.kind = "gerstner";
  v.m = 0.3;
  v.b0 = -0.7;
  const VorticityConfig w = vorticity_from_json(to_json(v));
  CHECK(w.kind == "gerstner");
  CHECK(w.m == 0.3);
  CHECK(w.b0 == -0.7);
  CHECK_THROWS_AS(vorticity_from_json(Json::object()), ConfigError);
}

TEST_CASE("report JSON carries formula tags") {
  VerifyReport r;
  r.checks.push_back({"surface.bernoulli", "E:hw", true, false, 1e-12, 1e-9, ""});
  r.checks.push_back({"amplitude.min_max_lower", "E:velocity-bound2", true, true, 0.0, 0.0, "advisory"});
  r.checks.push_back({"nodal1.wq_positive", "nodal1", false, false, -1.0, 0.0, ""});
  const Json j = to_json(r);
  CHECK(j["pass_count"] == 1);
  CHECK(j["fail_count"] == 1);
  CHECK(j["passed"] == false);
  CHECK(j["checks"][0]["ref"] == "E:hw");
  CHECK(j["checks"][1]["note"] == "advisory");
  CHECK_FALSE(j["checks"][0].contains("note"));
}

TEST_CASE("CSV numbers round trip and rows are checked") {
  CsvTable t({"a", "b"});
  t.add({CsvTable::num(0.1), CsvTable::num(static_cast<long long>(7))});
  CHECK(std::stod(CsvTable::num(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(CsvTable::num(std::nan("")) == "nan");
  CHECK(t.str() == "a,b\n0.1,7\n");
  CHECK_THROWS_AS(t.add({"1"}), DomainError);
}

TEST_CASE("JSON files are byte-stable") {
  const auto dir = std::filesystem::temp_directory_path() / "vorstokes_io_test";
  std::filesystem::create_directories(dir);
  const Json j{{"b", 1.0 / 3.0}, {"a", {1, 2, 3}}, {"c", "x"}};
  write_json(dir / "one.json", j);
  write_json(dir / "two.json", Json::parse(slurp(dir / "one.json")));
  CHECK(slurp(dir / "one.json") == slurp(dir / "two.json"));
  CHECK(read_json(dir / "one.json") == j);
  CHECK_THROWS_AS(read_json(dir / "missing.json"), ConfigError);
  std::filesystem::remove_all(dir);
}
