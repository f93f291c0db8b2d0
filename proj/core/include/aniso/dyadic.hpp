#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "aniso/anisotropy.hpp"
#include "aniso/geometry.hpp"

namespace aniso {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

/// One generation of the 1-D construction along a single axis, sorted by lo.
/// predecessor[i] indexes the previous generation (-1 if absent or first).
struct LineGeneration {
  int k = 0;
  std::vector<Interval> intervals;
  std::vector<int> predecessor;
};

/// Builds generations kmin..kmax of the 1-D overlapping construction with
/// exponent `a` (= s_max/s_k), restricted to intervals meeting [range_lo, range_hi).
/// `base` is the generation-0 length.
std::vector<LineGeneration> dyadic_line(double a, int kmin, int kmax, double range_lo,
                                        double range_hi, double base = 2.0);

/// Half-open axis-aligned rectangle [lo, hi).
struct BoxRect {
  std::vector<double> lo;
  std::vector<double> hi;
  bool contains_point(const Point& x) const;
};

struct Generation {
  int k = 0;
  std::vector<BoxRect> rects;
  std::vector<long> predecessor;  // index into the previous generation, -1 if none
};

struct DyadicTree {
  std::vector<double> box_lo;
  std::vector<double> box_hi;
  std::vector<Generation> generations;  // ascending k
  double base = 2.0;

  int kmin() const { return generations.front().k; }
  int kmax() const { return generations.back().k; }
  const Generation& generation(int k) const;
  std::size_t size() const;
};

/// Tensor product of the per-axis constructions. With the default base 2,
/// a generation-k rectangle has half-widths 2^{-k s_max/s_j}, so its interior
/// is M_{2^{-k}} of its midpoint.
DyadicTree build_dyadic_tree(const Anisotropy& a, const Rect& box, int kmin, int kmax,
                             double base = 2.0);

/// Just one generation of the tree over `box`.
std::vector<BoxRect> dyadic_generation(int k, const Anisotropy& a, const Rect& box,
                                       double base = 2.0);

struct DyadicReport {
  bool covers = true;          // (i)
  bool radius = true;          // (ii)
  bool nested = true;          // (iii)
  bool bounded_overlap = true; // (iv)
  bool chain = true;           // (v)
  std::size_t cells_checked = 0;
  std::vector<std::string> witnesses;

  bool ok() const { return covers && radius && nested && bounded_overlap && chain; }
};

/// Exhaustive check of properties (i)-(v) on the finite tree. Points are
/// probed at midpoints of the arrangement cells cut out by all rectangle
/// faces inside the bounding box.
DyadicReport dyadic_check(const DyadicTree& tree, const Anisotropy& a,
                          std::size_t max_witnesses = 8);

void write_dyadic_tree(std::ostream& os, const DyadicTree& tree);
/// Reads rectangles back; predecessor links are recomputed by containment.
DyadicTree read_dyadic_tree(std::istream& is, const std::vector<double>& box_lo,
                            const std::vector<double>& box_hi);

}  // namespace aniso
