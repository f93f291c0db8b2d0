#include "aniso/grid.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace aniso {

Grid::Grid(Anisotropy a, std::size_t nodes_per_axis, double box_radius)
    : a_(std::move(a)), n_(nodes_per_axis), radius_(box_radius) {
  if (n_ < 3 || n_ % 2 == 0) throw std::invalid_argument("grid: nodes per axis must be odd and >= 3");
  if (!(radius_ > 0.0)) throw std::invalid_argument("grid: box radius must be positive");
  const int n = a_.dim();
  delta_.resize(n);
  half_.resize(n);
  stride_.resize(n);
  for (int k = 0; k < n; ++k) {
    half_[k] = std::pow(radius_, a_.axis_exponent(k));
    delta_[k] = 2.0 * half_[k] / static_cast<double>(n_ - 1);
    cell_volume_ *= delta_[k];
  }
  std::size_t s = 1;
  for (int k = n - 1; k >= 0; --k) {
    stride_[k] = s;
    s *= n_;
  }
  size_ = s;
}

Point Grid::point(std::size_t flat) const {
  Point x(static_cast<std::size_t>(dim()));
  for (int k = 0; k < dim(); ++k) x[k] = coord(k, axis_index(flat, k));
  return x;
}

std::size_t Grid::flat_index(const std::vector<long>& idx) const {
  std::size_t f = 0;
  for (int k = 0; k < dim(); ++k) {
    if (idx[k] < 0 || static_cast<std::size_t>(idx[k]) >= n_)
      throw std::out_of_range("grid: index out of range");
    f += static_cast<std::size_t>(idx[k]) * stride_[k];
  }
  return f;
}

std::size_t Grid::center_node() const {
  return flat_index(std::vector<long>(static_cast<std::size_t>(dim()), static_cast<long>(n_ / 2)));
}

bool Grid::on_boundary(std::size_t flat) const {
  for (int k = 0; k < dim(); ++k) {
    const long i = axis_index(flat, k);
    if (i == 0 || i == static_cast<long>(n_) - 1) return true;
  }
  return false;
}

std::vector<char> Grid::mask(const Rect& m) const {
  if (m.dim() != dim()) throw std::invalid_argument("grid mask: dimension mismatch");
  // Per-axis membership first, then the tensor product.
  std::vector<std::vector<char>> axis_in(dim(), std::vector<char>(n_, 0));
  for (int k = 0; k < dim(); ++k) {
    const double hw = m.half_width(k);
    for (std::size_t i = 0; i < n_; ++i) {
      const double off = coord(k, static_cast<long>(i)) - m.center()[k];
      axis_in[k][i] = std::abs(off) < hw - kGeomSlack * std::max(1.0, hw);
    }
  }
  std::vector<char> out(size_, 0);
  for (std::size_t f = 0; f < size_; ++f) {
    char in = 1;
    for (int k = 0; k < dim() && in; ++k) in = axis_in[k][axis_index(f, k)];
    out[f] = in;
  }
  return out;
}

std::vector<std::size_t> Grid::nodes_in(const Rect& m) const {
  auto msk = mask(m);
  std::vector<std::size_t> out;
  for (std::size_t f = 0; f < size_; ++f)
    if (msk[f]) out.push_back(f);
  return out;
}

std::string ExteriorRule::to_string() const {
  switch (kind) {
    case Kind::Zero: return "zero";
    case Kind::Constant: return fmt::format("constant:{:.17g}", value);
    case Kind::Tabulated: return "tabulated";
  }
  return "zero";
}

ExteriorRule ExteriorRule::parse(const std::string& text) {
  if (text == "zero") return zero();
  if (text == "tabulated") return tabulated();
  const std::string prefix = "constant:";
  if (text.rfind(prefix, 0) == 0) {
    std::size_t used = 0;
    const std::string rest = text.substr(prefix.size());
    double v = 0.0;
    try {
      v = std::stod(rest, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == rest.size() && used > 0 && std::isfinite(v)) return constant(v);
  }
  throw std::invalid_argument("exterior rule must be zero, tabulated or constant:<value>, got '" +
                              text + "'");
}

GridFunction::GridFunction(Grid g, ExteriorRule rule)
    : grid_(std::move(g)), values_(grid_.size(), 0.0), rule_(rule) {}

GridFunction::GridFunction(Grid g, std::vector<double> values, ExteriorRule rule)
    : grid_(std::move(g)), values_(std::move(values)), rule_(rule) {
  if (values_.size() != grid_.size())
    throw std::invalid_argument(
        fmt::format("grid function: {} values for {} nodes", values_.size(), grid_.size()));
  check_finite();
}

GridFunction GridFunction::sample(Grid g, const std::function<double(const Point&)>& f,
                                  ExteriorRule rule) {
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = f(g.point(i));
  return GridFunction(std::move(g), std::move(v), rule);
}

void GridFunction::check_finite() const {
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (!std::isfinite(values_[i]))
      throw std::domain_error(fmt::format("grid function: non-finite value at node {}", i));
  if (!std::isfinite(rule_.value)) throw std::domain_error("grid function: non-finite exterior value");
}

void require_same_grid(const GridFunction& u, const GridFunction& v, const char* what) {
  if (!(u.grid() == v.grid())) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

void write_grid_function_csv(std::ostream& os, const GridFunction& u) {
  const Grid& g = u.grid();
  const int n = g.dim();
  std::string nodes = "nodes", spacing = "spacing", orders = "orders";
  for (int k = 0; k < n; ++k) {
    nodes += fmt::format(",{}", g.nodes_per_axis());
    spacing += fmt::format(",{:.17g}", g.spacing(k));
    orders += fmt::format(",{:.17g}", g.anisotropy().order(k));
  }
  os << "dim," << n << "\r\n" << nodes << "\r\n" << spacing << "\r\n";
  os << fmt::format("box_radius,{:.17g}\r\n", g.box_radius());
  os << fmt::format("p,{:.17g}\r\n", g.anisotropy().p());
  os << fmt::format("s0,{:.17g}\r\n", g.anisotropy().s0());
  os << orders << "\r\n";
  const auto& r = u.rule();
  if (r.kind == ExteriorRule::Kind::Constant) os << fmt::format("exterior,constant,{:.17g}\r\n", r.value);
  else os << "exterior," << r.to_string() << "\r\n";
  os << "values\r\n";
  for (double v : u.values()) os << fmt::format("{:.17g}\r\n", v);
}

namespace {

std::vector<std::string> split_csv(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

double to_double(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw std::runtime_error(fmt::format("grid csv line {}: '{}' is not a number", line, s));
}

}  // namespace

GridFunction read_grid_function_csv(std::istream& is) {
  std::string line;
  std::size_t lineno = 0;
  int dim = 0;
  std::size_t nodes = 0;
  double radius = 0.0, p = 0.0, s0 = 0.0;
  std::vector<double> orders;
  ExteriorRule rule;
  bool seen_values = false;
  while (!seen_values && std::getline(is, line)) {
    ++lineno;
    auto f = split_csv(line);
    if (f.empty()) continue;
    const std::string& key = f[0];
    if (key == "dim" && f.size() == 2) dim = static_cast<int>(to_double(f[1], lineno));
    else if (key == "nodes" && f.size() >= 2) nodes = static_cast<std::size_t>(to_double(f[1], lineno));
    else if (key == "spacing") continue;
    else if (key == "box_radius" && f.size() == 2) radius = to_double(f[1], lineno);
    else if (key == "p" && f.size() == 2) p = to_double(f[1], lineno);
    else if (key == "s0" && f.size() == 2) s0 = to_double(f[1], lineno);
    else if (key == "orders") {
      for (std::size_t i = 1; i < f.size(); ++i) orders.push_back(to_double(f[i], lineno));
    } else if (key == "exterior" && f.size() >= 2) {
      if (f[1] == "constant" && f.size() == 3) rule = ExteriorRule::constant(to_double(f[2], lineno));
      else rule = ExteriorRule::parse(f[1]);
    } else if (key == "values") seen_values = true;
    else throw std::runtime_error(fmt::format("grid csv line {}: unexpected record '{}'", lineno, key));
  }
  if (!seen_values || dim < 1 || static_cast<int>(orders.size()) != dim || nodes == 0)
    throw std::runtime_error("grid csv: incomplete header");
  Grid g(Anisotropy(p, orders, s0), nodes, radius);
  std::vector<double> values;
  values.reserve(g.size());
  while (std::getline(is, line)) {
    ++lineno;
    auto f = split_csv(line);
    if (f.empty() || (f.size() == 1 && f[0].empty())) continue;
    values.push_back(to_double(f[0], lineno));
  }
  return GridFunction(std::move(g), std::move(values), rule);
}

}  // namespace aniso
