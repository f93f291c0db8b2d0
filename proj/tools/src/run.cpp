#include "aniso_cli/run.hpp"

#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "aniso/parallel.hpp"
#include "common.hpp"

namespace aniso::cli {

namespace fs = std::filesystem;

std::uint64_t fnv1a(const std::string& bytes, std::uint64_t h) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

Artifacts::Artifacts(fs::path dir) : dir_(std::move(dir)) {}

void Artifacts::write(const std::string& name, const std::string& content, bool partial) {
  const fs::path path = dir_ / name;
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::ios_base::failure("cannot open '" + path.string() + "' for writing");
  os.write(content.data(), static_cast<std::streamsize>(content.size()));
  os.close();
  if (!os) throw std::ios_base::failure("write to '" + path.string() + "' failed");
  OutputFile f{name, content.size(), fnv1a(content), partial};
  for (auto& existing : files_)
    if (existing.path == name) {
      existing = f;
      return;
    }
  files_.push_back(f);
}

std::vector<InequalityReport> run_experiment(const ExperimentConfig& cfg, Artifacts& out) {
  std::vector<InequalityReport> reports;
  switch (cfg.experiment) {
    case Experiment::Solve: reports = run_solve(cfg, out); break;
    case Experiment::Harnack: reports = run_harnack(cfg, out); break;
    case Experiment::Hoelder: reports = run_hoelder(cfg, out); break;
    case Experiment::Sobolev:
    case Experiment::Poincare: reports = run_functional(cfg, out); break;
    case Experiment::Maximal: reports = run_maximal(cfg, out); break;
    case Experiment::GoodLambda: reports = run_goodlambda(cfg, out); break;
    case Experiment::Dyadic: reports = run_dyadic(cfg, out); break;
    case Experiment::Convergence: reports = run_convergence(cfg, out); break;
    case Experiment::Ineq: reports = run_ineq(cfg, out); break;
  }
  out.write(to_string(cfg.experiment) + "_reports.csv", detail::reports_csv(reports));
  return reports;
}

std::uint64_t input_hash(const std::string& config_text, std::uint64_t seed) {
  return fnv1a(fmt::format("\nseed={}", seed), fnv1a(config_text));
}

std::string manifest_json(const std::string& experiment, std::uint64_t hash, std::uint64_t seed,
                          const std::string& status, const std::vector<OutputFile>& files) {
  nlohmann::ordered_json m;
  m["experiment"] = experiment;
  m["input_hash"] = fmt::format("{:016x}", hash);
  m["seed"] = seed;
  m["status"] = status;
  m["files"] = nlohmann::ordered_json::array();
  for (const auto& f : files) {
    nlohmann::ordered_json e;
    e["path"] = f.path;
    e["bytes"] = f.bytes;
    e["fnv1a"] = fmt::format("{:016x}", f.fnv1a);
    e["partial"] = f.partial;
    m["files"].push_back(std::move(e));
  }
  return m.dump(2) + "\n";
}

RunOutcome run_text(const std::string& text, const std::string& source, const RunOptions& opts,
                    std::ostream& diag) {
  RunOutcome outcome;
  ExperimentConfig cfg;
  try {
    cfg = parse_config(text, source);
  } catch (const ConfigError& e) {
    diag << e.what() << "\n";
    return {ExitConfig, "config_error", e.what(), {}, {}};
  }
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.threads == 0) {
    diag << "error: --threads must be at least 1\n";
    return {ExitConfig, "config_error", "threads must be at least 1", {}, {}};
  }
  const fs::path dir = opts.out.empty() ? fs::path(cfg.output) : opts.out;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    const std::string msg = "cannot create output directory '" + dir.string() + "'";
    diag << "error: " << msg << "\n";
    return {ExitConfig, "io_error", msg, {}, {}};
  }
  parallel::set_threads(opts.threads);
  parallel::set_deterministic(opts.deterministic);

  Artifacts out(dir);
  try {
    outcome.reports = run_experiment(cfg, out);
    outcome.status = "ok";
  } catch (const NumericFailure& e) {
    diag << "error: " << e.what() << "\n";
    outcome = {ExitNumeric, "numeric_failure", e.what(), {}, {}};
  } catch (const std::ios_base::failure& e) {
    diag << "error: " << e.what() << "\n";
    outcome = {ExitConfig, "io_error", e.what(), {}, {}};
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << "\n";
    outcome = {ExitNumeric, "aborted", e.what(), {}, {}};
  }
  outcome.files = out.files();
  // experiments flag their own partial files on numeric failure; any other
  // abort leaves every file incomplete
  if (outcome.status != "ok" && outcome.status != "numeric_failure")
    for (auto& f : outcome.files) f.partial = true;
  const std::string manifest =
      manifest_json(to_string(cfg.experiment), input_hash(text, cfg.seed), cfg.seed, outcome.status, outcome.files);
  std::ofstream(dir / "manifest.json", std::ios::binary) << manifest;
  return outcome;
}

RunOutcome run(const RunOptions& opts, std::ostream& diag) {
  std::ifstream is(opts.config, std::ios::binary);
  if (!is) {
    const std::string msg = "cannot read config '" + opts.config.string() + "'";
    diag << "error: " << msg << "\n";
    return {ExitConfig, "io_error", msg, {}, {}};
  }
  const std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return run_text(text, opts.config.string(), opts, diag);
}

}  // namespace aniso::cli
