#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "aniso/grid.hpp"
#include "aniso/solver.hpp"

namespace aniso::cli {

enum class Experiment { Solve, Harnack, Hoelder, Sobolev, Poincare, Maximal, GoodLambda, Dyadic, Convergence, Ineq };

Experiment parse_experiment(const std::string& name);
std::string to_string(Experiment e);

/// Grid data: a constant, or a catalog function (sine, gauss, atan) times a scale.
struct Profile {
  double constant = 0.0;
  std::string function;  // empty for a constant
  double scale = 1.0;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::Solve;
  // anisotropy block
  double p = 2.0;
  std::vector<double> s{0.5, 0.5};
  double s0 = 0.0;
  double ellipticity = 1.0;
  // kernel block
  std::string coefficient;  // empty: axes kernel
  // grid block
  std::size_t nodes = 33;
  double box = 1.0;
  // problem block
  Profile f{1.0, "", 1.0};
  Profile g{0.0, "", 1.0};
  ExteriorRule exterior = ExteriorRule::zero();
  double q = 0.0;  // 0 selects 2n
  double tol = 1e-8;
  int max_iter = 500;
  SolverMethod method = SolverMethod::Hybrid;
  // sweeps
  std::vector<std::vector<double>> sweep_s;
  std::vector<double> sweep_p;
  std::vector<double> sweep_p0;
  // experiment parameters
  std::uint64_t seed = 1;
  std::size_t samples = 1000000;
  std::size_t count = 24;
  double robustness = 10.0;
  std::vector<std::string> lemmas{"A1", "A2", "A3", "A4min", "A4max", "L34"};
  std::vector<double> gammas{0.05, 0.1, 0.2};
  std::vector<double> orders{0.9, 0.99, 0.999};  // convergence s-trajectory
  std::vector<std::string> functions{"gauss", "atan"};
  std::vector<std::vector<double>> points;
  std::string manufactured;  // hoelder: catalog function for a manufactured solution
  double hoelder_base = 2.0;
  int kmin = -2;
  int kmax = 5;
  std::string output = "out";

  /// Effective sweeps: the single base value when a sweep is empty.
  std::vector<std::vector<double>> orders_sweep() const { return sweep_s.empty() ? std::vector<std::vector<double>>{s} : sweep_s; }
  std::vector<double> p_sweep() const { return sweep_p.empty() ? std::vector<double>{p} : sweep_p; }
  std::vector<double> p0_sweep() const { return sweep_p0.empty() ? std::vector<double>{0.5} : sweep_p0; }
};

/// Parse or validation failure tied to a position in the config text.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, int column, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& detail() const { return detail_; }

 private:
  int line_;
  int column_;
  std::string detail_;
};

/// Maps JSON pointers ("/grid/nodes", "/sweep/s/1") to the 1-based line and
/// column of the key (or array element) in the text.
std::map<std::string, std::pair<int, int>> locate_json(const std::string& text);

/// Parses and validates the whole config. Every parameter combination of the
/// sweeps is checked against the library preconditions before returning.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "config");

}  // namespace aniso::cli
