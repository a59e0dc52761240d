#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "doctest.h"
#include "esst/commands.hpp"
#include "esst/config.hpp"
#include "esst/output.hpp"
#include "esst/units.hpp"
#include "json.hpp"

using namespace esst;
namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

fs::path config_dir() {
  const char* dir = std::getenv("ESST_CONFIG_DIR");
  return dir ? fs::path(dir) : fs::path(ESST_DEFAULT_CONFIG_DIR);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fig3a_text() { return slurp(config_dir() / "fig3a.cfg"); }

std::string replace(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  return text.replace(pos, from.size(), to);
}

RunConfig parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "test.cfg");
}

std::string config_error_where(const std::string& text) {
  try {
    parse_text(text);
  } catch (const ConfigError& e) {
    return e.where();
  }
  return "no error";
}

/// Fresh scratch directory per call.
fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("esst_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "run.cfg";
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

int run_tool(const std::string& args) {
  const char* tool = std::getenv("ESST_TOOL");
  if (!tool) return -1;
  const int status = std::system((std::string(tool) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1.25e-6) == "1.25e-06");
  CHECK(round_significant(2.0 / 3.0) == 0.666666666667);
  CHECK(population_column("3p") == "p3p");
}

TEST_CASE("CSV rendering clamps and uses LF") {
  PopulationTrace t;
  t.times = {0.0, 1e-6};
  t.labels = {"1", "2"};
  t.populations.resize(2, 2);
  t.populations << 1.0 + 1e-15, -1e-16, 0.25, 0.75;
  CsvStats stats;
  const std::string csv = trace_csv(t, &stats);
  CHECK(csv == "t_s,p1,p2\n0,1,0\n1e-06,0.25,0.75\n");
  CHECK(stats.clamped == 2);
  CHECK(stats.max_clamp == doctest::Approx(1e-15));
  CHECK(csv.find('\r') == std::string::npos);
}

TEST_CASE("atomic writes leave no temporaries") {
  const fs::path dir = scratch("atomic");
  write_files_atomically({{dir / "a.txt", "one\n"}, {dir / "b.txt", "two\n"}});
  CHECK(slurp(dir / "a.txt") == "one\n");
  CHECK(slurp(dir / "b.txt") == "two\n");
  CHECK_FALSE(fs::exists(dir / "a.txt.tmp"));
  CHECK_THROWS(write_files_atomically({{dir / "missing" / "c.txt", "x"}}));
  CHECK_FALSE(fs::exists(dir / "missing"));
}

TEST_CASE("bundled configurations parse") {
  for (const char* name : {"fig3a.cfg", "fig3b.cfg", "fullmodel.cfg"}) {
    CAPTURE(name);
    const RunConfig cfg = load_config(config_dir() / name);
    CHECK(cfg.protocol.mode.has_value());
    CHECK_FALSE(cfg.field12_specified);
    CHECK(cfg.detunings().delta12() == 0.0);
  }
  const RunConfig full = load_config(config_dir() / "fullmodel.cfg");
  CHECK(full.simulation.model == ModelKind::Full);
  CHECK(full.verify_ladder.size() == 4);
  REQUIRE(full.levels.has_value());
}

TEST_CASE("configuration errors name the offending place") {
  const std::string base = fig3a_text();
  CHECK_NOTHROW(parse_text(base));
  CHECK(config_error_where(replace(base, "points = 2001", "pointz = 2001")) == "[simulation] pointz");
  CHECK(config_error_where(replace(base, "[protocol]", "[protocols]")) == "[protocols]");
  CHECK(config_error_where(replace(base, "points = 2001", "points = many")) == "[simulation] points");
  CHECK(config_error_where(replace(base, "points = 2001", "points = 1")) == "[simulation] points");
  CHECK(config_error_where(replace(base, "[field_12]\n", "[field_12]\namplitude = 1\n")) ==
        "[field_12] amplitude");
  CHECK(config_error_where(replace(base, "phase = 0\n", "phase = 0\ndetuning = 25\n")) ==
        "[field_13] detuning");
  CHECK(config_error_where(replace(base, "model = effective", "model = quantum")) == "[simulation] model");
  CHECK(config_error_where(replace(base, "v3v2_y = -1", "v3v2_y = 0")) == "[dipoles] v3v2_y");
  CHECK(config_error_where(replace(base, "mode = way_one_keep_L", "mode = way_three")) == "[protocol] mode");
  CHECK(config_error_where(replace(base, "t_end_us = 5", "t_end_us = 0")) == "[simulation] t_end_us");
  // Syntax errors carry file and line.
  const std::string broken = replace(base, "[rotor]", "[rotor");
  CHECK(config_error_where(broken).rfind("test.cfg:", 0) == 0);
  CHECK_THROWS_AS(load_config(config_dir() / "no_such.cfg"), ConfigError);
}

TEST_CASE("a protocol needs the 1-2 field on resonance") {
  const std::string text = replace(fig3a_text(), "detuning = 0", "detuning = 1");
  const RunConfig cfg = parse_text(replace(text, "detuning = 20", "detuning = 19"));
  try {
    resolve_run(cfg);
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.where() == "[protocol] mode");
  }
}

TEST_CASE("resolved runs apply the designed 1-2 field") {
  const ResolvedRun run = resolve_run(load_config(config_dir() / "fig3a.cfg"));
  REQUIRE(run.protocol.has_value());
  REQUIRE(run.effective.has_value());
  const double mhz = units::kTwoPiMHz;
  CHECK(std::abs(run.effective->omega_eff - cplx(0.1 * mhz, 0)) <= 1e-12 * mhz);
  CHECK(std::abs(run.couplings_l.omega21 + run.effective->omega_eff) <= 1e-12 * mhz);
  CHECK(run.couplings_r.omega21 == -run.couplings_l.omega21);
  CHECK(run.fields.f12.amplitude == doctest::Approx(0.2 * std::sqrt(3.0) * mhz).epsilon(1e-14));
}

TEST_CASE("simulation outputs") {
  const SimulationResult res = run_simulation(load_config(config_dir() / "fig3a.cfg"));
  REQUIRE(res.files.size() == 3);
  CHECK(res.files[0].first == "trace_L.csv");
  CHECK(res.files[1].first == "trace_R.csv");
  CHECK(res.files[2].first == "summary.json");
  CHECK(res.files[0].second.rfind("t_s,p1,p2\n", 0) == 0);
  const json s = json::parse(res.files[2].second);
  CHECK(s["metadata"]["version"] == kVersion);
  CHECK(s["protocol"]["at_transfer"]["p2_R"].get<double>() >= 0.999);
  CHECK(s["protocol"]["at_transfer"]["p2_L"].get<double>() <= 1e-10);
  CHECK(s["enantiomers"]["R"]["period_s"].get<double>() == doctest::Approx(2.5e-6).epsilon(1e-3));
  CHECK(s["discrimination"]["max"].get<double>() >= 0.999);

  SUBCASE("the full model writes four columns") {
    const SimulationResult full = run_simulation(load_config(config_dir() / "fullmodel.cfg"));
    CHECK(full.files[0].second.rfind("t_s,p1,p2,p3p,p3m\n", 0) == 0);
    const json fs_json = json::parse(full.files[2].second);
    CHECK(fs_json["protocol"]["at_transfer"]["discrimination"].get<double>() >= 0.95);
  }
  SUBCASE("single enantiomer") {
    RunConfig cfg = load_config(config_dir() / "fig3a.cfg");
    cfg.simulation.enantiomer = EnantiomerSelection::R;
    const SimulationResult r = run_simulation(cfg);
    REQUIRE(r.files.size() == 2);
    CHECK(r.files[0].first == "trace_R.csv");
    CHECK(json::parse(r.files[1].second)["discrimination"].is_null());
  }
}

TEST_CASE("without a 1-2 coupling both enantiomers write identical traces") {
  std::string text = replace(fig3a_text(), "[protocol]\nmode = way_one_keep_L\nn = 0\n", "");
  text = replace(text, "[field_12]\n", "[field_12]\namplitude = 0\nphase = 0\n");
  const SimulationResult res = run_simulation(parse_text(text));
  CHECK(res.files[0].second == res.files[1].second);
}

TEST_CASE("simulate is deterministic and atomic") {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  std::ostringstream out, err;
  const fs::path cfg = config_dir() / "fig3b.cfg";
  REQUIRE(cmd_simulate({cfg, a, std::nullopt, std::nullopt}, out, err) == kExitOk);
  REQUIRE(cmd_simulate({cfg, b, std::nullopt, std::nullopt}, out, err) == kExitOk);
  for (const char* f : {"trace_L.csv", "trace_R.csv", "summary.json"}) {
    CAPTURE(f);
    CHECK(slurp(a / f) == slurp(b / f));
  }
  for (const auto& entry : fs::directory_iterator(a)) {
    CHECK(entry.path().extension() != ".tmp");
  }
}

TEST_CASE("command exit codes") {
  const fs::path dir = scratch("exit");
  std::ostringstream out, err;
  SUBCASE("corrupted config writes nothing") {
    const fs::path cfg = write_config(dir, replace(fig3a_text(), "A = 5.0", "A = five"));
    CHECK(cmd_simulate({cfg, dir / "out", std::nullopt, std::nullopt}, out, err) == kExitValidation);
    CHECK_FALSE(fs::exists(dir / "out" / "summary.json"));
    CHECK(err.str().find("[rotor] A") != std::string::npos);
    CHECK(cmd_verify({cfg, dir / "vout"}, out, err) == kExitValidation);
    CHECK_FALSE(fs::exists(dir / "vout" / "verify.json"));
  }
  SUBCASE("verify exits 2 exactly when a check fails") {
    const fs::path cfg = config_dir() / "fullmodel.cfg";
    const json report = run_verify(load_config(cfg));
    const int expect = report["all_passed"].get<bool>() ? kExitOk : kExitNumerical;
    CHECK(cmd_verify({cfg, dir / "verify"}, out, err) == expect);
    CHECK(json::parse(slurp(dir / "verify" / "verify.json")) == report);
  }
  SUBCASE("design") {
    CHECK(cmd_design({"way_two", {1, 1}, std::nullopt, std::nullopt, 0.1}, out, err) == kExitValidation);
    CHECK(err.str().find("degenerate denominator") != std::string::npos);
    CHECK(cmd_design({"way_one", {0}, std::nullopt, std::nullopt, 0.1}, out, err) == kExitValidation);
    CHECK(cmd_design({"way_two", {1}, std::nullopt, std::nullopt, 0.1}, out, err) == kExitValidation);
    std::ostringstream ok;
    REQUIRE(cmd_design({"way_two", {1, 0}, std::nullopt, std::nullopt, 0.1}, ok, err) == kExitOk);
    const json j = json::parse(ok.str());
    CHECK(j["solution"]["omega21_over_omega_eff"].get<double>() == 3.0);
    CHECK(j["solution"]["transfer_time_s"].get<double>() == doctest::Approx(1.25e-6).epsilon(1e-12));
  }
  SUBCASE("design against a config evaluates the four-level model") {
    const json j = run_design({"way_one", {0}, std::string("L"), config_dir() / "fig3a.cfg", std::nullopt});
    CHECK(j["evaluation"]["discrimination"].get<double>() >= 0.999);
    CHECK(j["evaluation"]["full_model"]["discrimination"].get<double>() >= 0.95);
  }
}

TEST_CASE("verify report") {
  const json report = run_verify(load_config(config_dir() / "fig3a.cfg"));
  CHECK(report["metadata"]["version"] == kVersion);
  std::size_t passed = 0;
  for (const auto& c : report["checks"]) {
    CAPTURE(c.dump());
    if (c["name"] != "elimination_scaling") {
      CHECK(c["passed"].get<bool>());
    }
    passed += c["passed"].get<bool>() ? 1 : 0;
  }
  CHECK(passed >= report["checks"].size() - 1);
}

TEST_CASE("command-line tool") {
  if (!std::getenv("ESST_TOOL")) return;
  const fs::path dir = scratch("tool");
  const std::string cfg = (config_dir() / "fig3a.cfg").string();
  CHECK(run_tool("simulate --config " + cfg + " --out " + (dir / "a").string()) == 0);
  CHECK(fs::exists(dir / "a" / "trace_L.csv"));
  CHECK(run_tool("simulate --config " + cfg + " --out " + (dir / "b").string() + " --model full --enantiomer R") == 0);
  CHECK(slurp(dir / "b" / "trace_R.csv").rfind("t_s,p1,p2,p3p,p3m\n", 0) == 0);
  CHECK(run_tool("simulate --config " + cfg + " --out " + (dir / "c").string() + " --model quantum") == 1);
  CHECK(run_tool("simulate --out " + (dir / "d").string()) == 1);
  CHECK(run_tool("design way_two 1 0 --omega-eff 0.1") == 0);
  CHECK(run_tool("design way_two 1 1 --omega-eff 0.1") == 1);
  CHECK(run_tool("--help") == 0);
}
