#pragma once

#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "aniso/anisotropy.hpp"
#include "aniso/grid.hpp"
#include "aniso/kernel.hpp"
#include "aniso/solver.hpp"
#include "aniso/verify/report.hpp"
#include "aniso_cli/config.hpp"

namespace aniso::cli::detail {

struct SweepPoint {
  std::size_t index = 0;
  double p = 2.0;
  std::vector<double> s;
};

/// Cartesian product p-sweep x s-sweep, p outermost.
std::vector<SweepPoint> sweep_points(const ExperimentConfig& cfg);

Anisotropy anisotropy_of(const ExperimentConfig& cfg, const SweepPoint& sp);
KernelFamily family_of(const ExperimentConfig& cfg, const Anisotropy& a);
std::function<double(const Point&)> profile_function(const Profile& pr, int dim);

/// Dirichlet problem on M_1(0) with the configured f, g, exterior and solver settings.
DirichletProblem problem_of(const ExperimentConfig& cfg, const KernelFamily& fam, const Grid& g);

std::string label(const SweepPoint& sp);
std::string numbers_joined(const std::vector<double>& v, const char* sep = ";");

std::string reports_csv(const std::vector<InequalityReport>& reports);
std::string svg_text(const SvgPlot& plot);

/// max/min of positive values; +inf if any is non-positive or non-finite.
double spread(const std::vector<double>& v);

}  // namespace aniso::cli::detail
