#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "aniso_cli/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Anisotropic fractional p-Laplacian experiments"};
  aniso::cli::RunOptions opts;
  std::string config, out, deterministic = "on";
  std::uint64_t seed = 0;
  app.add_option("--config", config, "experiment config (JSON)")->required();
  app.add_option("--out", out, "output directory (default: the config's \"output\")");
  app.add_option("--threads", opts.threads, "worker threads")->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", seed, "seed overriding the config");
  app.add_option("--deterministic", deterministic, "deterministic reductions")
      ->check(CLI::IsMember({"on", "off"}));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : aniso::cli::ExitConfig;
  }
  opts.config = config;
  opts.out = out;
  opts.deterministic = deterministic == "on";
  if (seed_opt->count() > 0) opts.seed = seed;
  const auto outcome = aniso::cli::run(opts, std::cerr);
  for (const auto& r : outcome.reports)
    std::cout << (r.passed ? "ok   " : "FAIL ") << r.name << "  worst_margin=" << aniso::csv_number(r.worst_margin)
              << "\n";
  if (outcome.exit_code == 0) std::cout << "wrote " << outcome.files.size() << " files\n";
  return outcome.exit_code;
}
