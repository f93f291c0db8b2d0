#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "aniso/verify/report.hpp"
#include "aniso_cli/config.hpp"

namespace aniso::cli {

struct OutputFile {
  std::string path;  // relative to the output directory
  std::uintmax_t bytes = 0;
  std::uint64_t fnv1a = 0;
  bool partial = false;
};

/// Collects the files an experiment writes into one output directory.
class Artifacts {
 public:
  explicit Artifacts(std::filesystem::path dir);
  const std::filesystem::path& dir() const { return dir_; }
  void write(const std::string& name, const std::string& content, bool partial = false);
  const std::vector<OutputFile>& files() const { return files_; }

 private:
  std::filesystem::path dir_;
  std::vector<OutputFile> files_;
};

/// A numeric failure after which partial outputs were kept.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::uint64_t fnv1a(const std::string& bytes, std::uint64_t h = 1469598103934665603ULL);

/// Runs the configured experiment, writing CSV/SVG files through `out`.
/// Returns the reports also written to "<experiment>_reports.csv".
/// Throws NumericFailure when a solve fails to converge.
std::vector<InequalityReport> run_experiment(const ExperimentConfig& cfg, Artifacts& out);

/// Upper bound for lhs/(gamma rhs) in the good-lambda estimate: 2^n from
/// the overlap of maximal rectangles, 2^n for the weak (1,1) bound of M_d,
/// 2^{n/s0} from the predecessor comparison.
double good_lambda_bound(int n, double s0);

std::vector<InequalityReport> run_solve(const ExperimentConfig& cfg, Artifacts& out);
std::vector<InequalityReport> run_harnack(const ExperimentConfig& cfg, Artifacts& out);
std::vector<InequalityReport> run_hoelder(const ExperimentConfig& cfg, Artifacts& out);
std::vector<InequalityReport> run_functional(const ExperimentConfig& cfg, Artifacts& out);
std::vector<InequalityReport> run_maximal(const ExperimentConfig& cfg, Artifacts& out);
std::vector<InequalityReport> run_goodlambda(const ExperimentConfig& cfg, Artifacts& out);
std::vector<InequalityReport> run_dyadic(const ExperimentConfig& cfg, Artifacts& out);
std::vector<InequalityReport> run_convergence(const ExperimentConfig& cfg, Artifacts& out);
std::vector<InequalityReport> run_ineq(const ExperimentConfig& cfg, Artifacts& out);

}  // namespace aniso::cli
