#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace aniso {

using NamedValues = std::vector<std::pair<std::string, double>>;

/// Outcome of one inequality experiment. For pass/fail checks worst_margin
/// is the smallest relative margin (rhs - lhs)/scale seen; for empirical
/// constants it is the constant itself.
struct InequalityReport {
  std::string name;
  std::size_t samples = 0;
  std::size_t violations = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  bool passed = true;
  NamedValues witness;    // inputs of the worst sample
  NamedValues constants;  // constants used
  NamedValues values;     // measured quantities

  /// Looks up a measured value or constant by name; throws std::out_of_range.
  double value(const std::string& key) const;
};

/// Long-format CSV: report,field,value.
void write_reports_csv(std::ostream& os, const std::vector<InequalityReport>& reports);

/// Quotes a CSV field when needed (RFC 4180).
std::string csv_field(const std::string& s);

/// Shortest round-trip text with 17 significant digits.
std::string csv_number(double v);

struct SvgSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct SvgPlot {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool logx = false;
  bool logy = false;
  std::vector<SvgSeries> series;
};

/// Polyline plot with axes and a legend. Non-finite points (or non-positive
/// ones on log axes) are skipped.
void write_svg(std::ostream& os, const SvgPlot& plot);

}  // namespace aniso
