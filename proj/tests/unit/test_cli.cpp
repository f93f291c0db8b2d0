#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "aniso_cli/run.hpp"

using namespace aniso;
using namespace aniso::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "aniso_cli_tests" / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

ConfigError config_error(const std::string& text) {
  try {
    parse_config(text, "cfg.json");
  } catch (const ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "no error for: " << text;
  return ConfigError("none", 0, 0, "");
}

RunOutcome run_json(const std::string& text, const fs::path& out, unsigned threads = 1) {
  RunOptions o;
  o.out = out;
  o.threads = threads;
  std::ostringstream diag;
  return run_text(text, "cfg.json", o, diag);
}

}  // namespace

TEST(CliConfig, DefaultsAndSweeps) {
  const auto c = parse_config(R"({"experiment": "harnack", "anisotropy": {"s0": 0.4},
    "sweep": {"p": [1.5, 3], "s": [[0.4, 0.4], [0.6, 0.9]], "p0": [0.5, 1]}})");
  EXPECT_EQ(c.experiment, Experiment::Harnack);
  EXPECT_EQ(c.p_sweep(), (std::vector<double>{1.5, 3}));
  EXPECT_EQ(c.orders_sweep().size(), 2u);
  EXPECT_EQ(c.p0_sweep().size(), 2u);
  EXPECT_EQ(c.f.constant, 1.0);
  EXPECT_EQ(c.g.constant, 0.0);
  const auto d = parse_config(R"({"experiment": "solve"})");
  EXPECT_EQ(d.orders_sweep(), (std::vector<std::vector<double>>{{0.5, 0.5}}));
  EXPECT_EQ(d.p0_sweep(), (std::vector<double>{0.5}));
}

TEST(CliConfig, LocatorFindsKeysAndElements) {
  const std::string text = "{\n  \"a\": {\"b\": [1,\n    2]},\n  \"c~/\": \"x\"\n}";
  const auto loc = locate_json(text);
  EXPECT_EQ(loc.at("/a"), (std::pair{2, 3}));
  EXPECT_EQ(loc.at("/a/b"), (std::pair{2, 9}));
  EXPECT_EQ(loc.at("/a/b/0"), (std::pair{2, 15}));
  EXPECT_EQ(loc.at("/a/b/1"), (std::pair{3, 5}));
  EXPECT_EQ(loc.at("/c~0~1"), (std::pair{4, 3}));
}

TEST(CliConfig, ErrorsAreLineAnchored) {
  auto e = config_error("{\n  \"experiment\": \"solve\",\n  \"grid\": {\"nodes\": 16}\n}");
  EXPECT_EQ(e.line(), 3);
  EXPECT_EQ(e.column(), 12);
  EXPECT_NE(std::string(e.what()).find("cfg.json:3:12: error: /grid/nodes"), std::string::npos) << e.what();

  e = config_error("{\"experiment\": \"solve\",\n \"sweep\": {\"p\": [2,\n   0.5]}}");
  EXPECT_EQ(e.line(), 3);
  EXPECT_EQ(e.column(), 4);

  e = config_error("{\"experiment\": \"solve\",\n\n  \"gird\": {}}");
  EXPECT_EQ(e.line(), 3);
  EXPECT_NE(e.detail().find("unknown key 'gird'"), std::string::npos);

  e = config_error("{\"experiment\": \"solve\",\n  \"grid\": {\"nodes\": 9,, }}");
  EXPECT_EQ(e.line(), 2);

  e = config_error("{\"experiment\": \"walk\"}");
  EXPECT_EQ(e.column(), 2);

  e = config_error("{\"experiment\": \"convergence\",\n \"anisotropy\": {\"s\": [0.5, 0.7]}}");
  EXPECT_EQ(e.line(), 2);
  EXPECT_NE(e.detail().find("equal orders"), std::string::npos);

  e = config_error("{\"experiment\": \"ineq\", \"lemmas\": [\"A1\",\n \"A9\"]}");
  EXPECT_EQ(e.line(), 2);
  EXPECT_EQ(e.column(), 2);

  e = config_error("{\"experiment\": \"solve\", \"sweep\": {\"s\": [[0.5, 0.5],\n [0.5]]}}");
  EXPECT_EQ(e.line(), 2);
}

TEST(CliRun, ZeroDataGivesZeroSolution) {
  const auto dir = scratch("zero");
  const auto out = run_json(R"({"experiment": "solve", "anisotropy": {"p": 2.5, "s": [0.5, 0.7]},
    "grid": {"nodes": 9, "box": 1}, "problem": {"f": 0, "g": 0}})", dir);
  ASSERT_EQ(out.exit_code, 0) << out.message;
  std::istringstream is(slurp(dir / "solve_000_u.csv"));
  const auto u = read_grid_function_csv(is);
  for (double v : u.values()) EXPECT_EQ(v, 0.0);
  const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(m["status"], "ok");
  EXPECT_EQ(m["experiment"], "solve");
  ASSERT_EQ(m["files"].size(), out.files.size());
  for (const auto& f : m["files"]) {
    EXPECT_FALSE(f["partial"].get<bool>());
    EXPECT_EQ(f["bytes"].get<std::uintmax_t>(), fs::file_size(dir / f["path"].get<std::string>()));
  }
}

TEST(CliRun, IneqWritesMarginsAndIsReproducible) {
  const std::string cfg = R"({"experiment": "ineq", "samples": 5000, "seed": 9})";
  const auto a = run_json(cfg, scratch("ineq_a"), 1);
  const auto b = run_json(cfg, scratch("ineq_b"), 4);
  ASSERT_EQ(a.exit_code, 0);
  ASSERT_EQ(b.exit_code, 0);
  EXPECT_EQ(a.reports.size(), 6u);
  for (const auto& r : a.reports) EXPECT_EQ(r.violations, 0u) << r.name;
  for (const auto& name : {"ineq_margins.csv", "ineq_reports.csv", "manifest.json"})
    EXPECT_EQ(slurp(scratch("").parent_path() / "ineq_a" / name), slurp(scratch("").parent_path() / "ineq_b" / name))
        << name;
}

TEST(CliRun, SeedChangesHashAndOutput) {
  const std::string cfg = R"({"experiment": "ineq", "samples": 2000, "lemmas": ["A2"]})";
  RunOptions o;
  std::ostringstream diag;
  o.out = scratch("seed1");
  o.seed = 1;
  const auto a = run_text(cfg, "cfg.json", o, diag);
  o.out = scratch("seed2");
  o.seed = 2;
  const auto b = run_text(cfg, "cfg.json", o, diag);
  EXPECT_NE(input_hash(cfg, 1), input_hash(cfg, 2));
  EXPECT_NE(a.files.front().fnv1a, b.files.front().fnv1a);
}

TEST(CliRun, NonConvergenceKeepsFlaggedPartialOutput) {
  const auto dir = scratch("partial");
  const auto out = run_json(R"({"experiment": "solve", "anisotropy": {"p": 3, "s": [0.5, 0.5]},
    "grid": {"nodes": 9, "box": 1}, "problem": {"f": 1, "tol": 1e-14, "max_iter": 1, "method": "gauss-seidel"},
    "sweep": {"p": [2, 3]}})", dir);
  EXPECT_EQ(out.exit_code, ExitNumeric);
  EXPECT_EQ(out.status, "numeric_failure");
  const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(m["status"], "numeric_failure");
  bool any_partial = false;
  for (const auto& f : m["files"]) {
    EXPECT_TRUE(fs::exists(dir / f["path"].get<std::string>()));
    any_partial = any_partial || f["partial"].get<bool>();
  }
  EXPECT_TRUE(any_partial);
  EXPECT_TRUE(fs::exists(dir / "solve_000_u.csv"));
}

TEST(CliRun, ConfigErrorsExitWithoutOutput) {
  const auto dir = scratch("bad");
  const auto out = run_json("{\"experiment\": \"solve\", \"grid\": {\"box\": -1}}", dir);
  EXPECT_EQ(out.exit_code, ExitConfig);
  EXPECT_EQ(out.status, "config_error");
  EXPECT_FALSE(fs::exists(dir));
  RunOptions o;
  o.config = "/nonexistent/cfg.json";
  std::ostringstream diag;
  EXPECT_EQ(run(o, diag).exit_code, ExitConfig);
}

TEST(CliRun, SmallExperimentsProduceReports) {
  struct Case {
    const char* name;
    const char* json;
  };
  for (const Case& c : {
           Case{"dyadic", R"({"experiment": "dyadic", "anisotropy": {"s": [0.5, 0.9]}, "generations": {"min": -1, "max": 3}})"},
           Case{"poincare", R"({"experiment": "poincare", "anisotropy": {"s": [0.5, 0.8]}, "grid": {"nodes": 17, "box": 2}, "count": 4})"},
           Case{"goodlambda", R"({"experiment": "goodlambda", "anisotropy": {"s": [0.5, 0.8]}, "grid": {"nodes": 17, "box": 1}, "count": 4, "gammas": [0.5, 2]})"},
           Case{"hoelder", R"({"experiment": "hoelder", "grid": {"nodes": 33, "box": 1}, "manufactured": "gauss"})"},
       }) {
    const auto dir = scratch(c.name);
    const auto out = run_json(c.json, dir);
    ASSERT_EQ(out.exit_code, 0) << c.name << ": " << out.message;
    EXPECT_FALSE(out.reports.empty());
    for (const auto& r : out.reports) EXPECT_TRUE(r.passed) << r.name;
    EXPECT_TRUE(fs::exists(dir / (std::string(c.name) + "_reports.csv")));
  }
}
