#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "aniso/anisotropy.hpp"
#include "aniso/geometry.hpp"

namespace aniso {

/// Uniform tensor grid over the box M_R(0). Every axis carries the same odd
/// number of nodes, so axis k has spacing 2 R^{s_max/s_k} / (N - 1) and the
/// centre is a node.
class Grid {
 public:
  Grid(Anisotropy a, std::size_t nodes_per_axis, double box_radius = 2.0);

  const Anisotropy& anisotropy() const { return a_; }
  int dim() const { return a_.dim(); }
  std::size_t nodes_per_axis() const { return n_; }
  std::size_t size() const { return size_; }
  double box_radius() const { return radius_; }
  double spacing(int k) const { return delta_[static_cast<std::size_t>(k)]; }
  double half_extent(int k) const { return half_[static_cast<std::size_t>(k)]; }
  std::size_t stride(int k) const { return stride_[static_cast<std::size_t>(k)]; }
  double cell_volume() const { return cell_volume_; }

  double coord(int k, long i) const { return -half_extent(k) + static_cast<double>(i) * spacing(k); }
  /// Index along axis k of a flat node index (row-major, last axis fastest).
  long axis_index(std::size_t flat, int k) const {
    return static_cast<long>((flat / stride(k)) % n_);
  }
  Point point(std::size_t flat) const;
  std::size_t flat_index(const std::vector<long>& idx) const;
  std::size_t center_node() const;
  bool on_boundary(std::size_t flat) const;

  Rect box() const { return Rect(Point(static_cast<std::size_t>(dim()), 0.0), radius_, a_); }
  /// Nodes strictly inside the open rectangle.
  std::vector<char> mask(const Rect& m) const;
  std::vector<std::size_t> nodes_in(const Rect& m) const;
  /// Same layout with every node included.
  std::vector<char> full_mask() const { return std::vector<char>(size_, 1); }

  bool operator==(const Grid& o) const {
    return a_ == o.a_ && n_ == o.n_ && radius_ == o.radius_;
  }

 private:
  Anisotropy a_;
  std::size_t n_;
  double radius_;
  std::size_t size_ = 1;
  std::vector<double> delta_;
  std::vector<double> half_;
  std::vector<std::size_t> stride_;
  double cell_volume_ = 1.0;
};

/// What a grid function equals beyond the computational box. Tabulated
/// data live on grid nodes only and are truncated at the box.
struct ExteriorRule {
  enum class Kind { Zero, Constant, Tabulated };
  Kind kind = Kind::Zero;
  double value = 0.0;

  static ExteriorRule zero() { return {Kind::Zero, 0.0}; }
  static ExteriorRule constant(double c) { return {Kind::Constant, c}; }
  static ExteriorRule tabulated() { return {Kind::Tabulated, 0.0}; }

  bool has_far_field() const { return kind != Kind::Tabulated; }
  double far_value() const { return kind == Kind::Constant ? value : 0.0; }
  std::string to_string() const;
  static ExteriorRule parse(const std::string& text);
  bool operator==(const ExteriorRule&) const = default;
};

class GridFunction {
 public:
  explicit GridFunction(Grid g, ExteriorRule rule = ExteriorRule::zero());
  GridFunction(Grid g, std::vector<double> values, ExteriorRule rule = ExteriorRule::zero());
  static GridFunction sample(Grid g, const std::function<double(const Point&)>& f,
                             ExteriorRule rule = ExteriorRule::zero());

  const Grid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  std::size_t size() const { return values_.size(); }
  const ExteriorRule& rule() const { return rule_; }
  void set_rule(ExteriorRule r) { rule_ = r; }

  /// Throws std::domain_error on NaN or infinity.
  void check_finite() const;

 private:
  Grid grid_;
  std::vector<double> values_;
  ExteriorRule rule_;
};

void require_same_grid(const GridFunction& u, const GridFunction& v, const char* what);

/// CSV with a commented header: axis sizes, spacing, box radius, orders, p
/// and exterior rule, followed by one value per line in row-major order.
void write_grid_function_csv(std::ostream& os, const GridFunction& u);
GridFunction read_grid_function_csv(std::istream& is);

}  // namespace aniso
