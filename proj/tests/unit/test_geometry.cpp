#include <cmath>

#include <gtest/gtest.h>

#include "aniso/geometry.hpp"
#include "oracles.hpp"

using namespace aniso;

TEST(Anisotropy, DerivedFields) {
  Anisotropy a(2.0, {0.25, 0.5});
  EXPECT_DOUBLE_EQ(a.s_max(), 0.5);
  EXPECT_DOUBLE_EQ(a.s_bar(), 2.0 / (4.0 + 2.0));
  EXPECT_DOUBLE_EQ(a.s0(), 0.25);
  EXPECT_DOUBLE_EQ(a.axis_exponent(0), 2.0);
  EXPECT_TRUE(a.has_sobolev_exponent());
  EXPECT_NEAR(a.sobolev_exponent(), 2.0 * 2.0 / (2.0 - 2.0 / 3.0), 1e-15);
}

TEST(Anisotropy, RejectsBadParameters) {
  EXPECT_THROW(Anisotropy(1.0, {0.5}), std::invalid_argument);
  EXPECT_THROW(Anisotropy(2.0, {1.0}), std::invalid_argument);
  EXPECT_THROW(Anisotropy(2.0, {0.0}), std::invalid_argument);
  EXPECT_THROW(Anisotropy(2.0, {}), std::invalid_argument);
  EXPECT_THROW(Anisotropy(2.0, {0.5, 0.6}, 0.55), std::invalid_argument);
  EXPECT_THROW(Anisotropy(2.0, {0.5}, 0.0, 0.5), std::invalid_argument);
  Anisotropy big(3.0, {0.9});
  EXPECT_FALSE(big.has_sobolev_exponent());
  EXPECT_THROW(big.sobolev_exponent(), std::domain_error);
}

TEST(Metric, HandValues) {
  Anisotropy a(2.0, {0.25, 0.5});
  EXPECT_EQ(metric_d({0.3, -1.0}, {0.3, -1.0}, a), 0.0);
  EXPECT_DOUBLE_EQ(metric_d({0, 0}, {0.25, 0}, a), 0.5);
}

TEST(Metric, AgreesWithBisection) {
  oracle::Rng rng(11);
  for (int t = 0; t < 2000; ++t) {
    const int n = rng.integer(1, 3);
    auto a = oracle::random_anisotropy(rng, n);
    Point x(n), y(n);
    for (int k = 0; k < n; ++k) {
      x[k] = rng.uniform(-2, 2);
      y[k] = rng.uniform(-2, 2);
    }
    const double d = metric_d(x, y, a);
    EXPECT_NEAR(d, oracle::metric_by_bisection(x, y, a), 1e-12 * std::max(1.0, d));
    EXPECT_EQ(d, metric_d(y, x, a));
  }
}

TEST(Metric, TriangleInequalityOnSamples) {
  oracle::Rng rng(12);
  for (int t = 0; t < 20000; ++t) {
    auto a = oracle::random_anisotropy(rng, 3);
    Point x(3), y(3), z(3);
    for (int k = 0; k < 3; ++k) {
      x[k] = rng.uniform(-1, 1);
      y[k] = rng.uniform(-1, 1);
      z[k] = rng.uniform(-1, 1);
    }
    EXPECT_LE(metric_d(x, z, a), metric_d(x, y, a) + metric_d(y, z, a) + 1e-14);
  }
}

TEST(Rect, Volumes) {
  EXPECT_DOUBLE_EQ(rect({0, 0}, 0.5, Anisotropy(2.0, {0.5, 0.5})).volume(), 1.0);
  EXPECT_DOUBLE_EQ(rect({0, 0}, 0.5, Anisotropy(2.0, {0.25, 0.5})).volume(), 0.5);
  EXPECT_DOUBLE_EQ(rect_volume(0.5, Anisotropy(2.0, {0.25, 0.5})), 0.5);
  EXPECT_THROW(rect({0, 0}, 0.0, Anisotropy(2.0, {0.25, 0.5})), std::invalid_argument);
  EXPECT_THROW(rect({0, 0}, -1.0, Anisotropy(2.0, {0.25, 0.5})), std::invalid_argument);
}

TEST(Rect, DoublingRatioBoundedByS0Bound) {
  oracle::Rng rng(13);
  for (int t = 0; t < 1000; ++t) {
    const int n = rng.integer(1, 4);
    auto a = oracle::random_anisotropy(rng, n);
    const double r = rng.log_uniform(1e-3, 1e3);
    Point c(n, 0.0);
    const double ratio = rect(c, 2 * r, a).volume() / rect(c, r, a).volume();
    EXPECT_NEAR(ratio, doubling_ratio(a), 1e-12 * ratio);
    EXPECT_LE(doubling_ratio(a), doubling_bound(a) * (1 + 1e-15));
  }
}

TEST(Rect, EqualsIntersectionOfSlabsAndMetricBall) {
  oracle::Rng rng(14);
  auto a = Anisotropy(2.5, {0.3, 0.7, 0.9});
  const Point c{0.1, -0.2, 0.3};
  const double r = 0.6;
  Rect m(c, r, a);
  for (int t = 0; t < 100000; ++t) {
    Point y(3);
    for (int k = 0; k < 3; ++k) y[k] = c[k] + rng.uniform(-1.5, 1.5);
    bool in_slabs = true;
    for (int k = 0; k < 3; ++k) in_slabs = in_slabs && Slab(c, r, k, a).contains(y);
    ASSERT_EQ(m.contains(y), in_slabs);
    const double d = metric_d(c, y, a);
    if (std::abs(d - r) > 1e-9) ASSERT_EQ(m.contains(y), d < r);
  }
}

TEST(Scaling, IdentityAndEqualOrders) {
  auto a = Anisotropy(2.0, {0.3, 0.8});
  Point x{0.7, -0.4};
  EXPECT_EQ(scaling_map(1.0, a)(x), x);
  auto e = Anisotropy(2.0, {0.6, 0.6});
  auto y = scaling_map(0.25, e)(x);
  EXPECT_DOUBLE_EQ(y[0], x[0] / 4);
  EXPECT_DOUBLE_EQ(y[1], x[1] / 4);
  EXPECT_THROW(scaling_map(0.0, a), std::invalid_argument);
  EXPECT_THROW(scaling_map(-2.0, a), std::invalid_argument);
}

TEST(Scaling, MapsCornersOfUnitRectToScaledRect) {
  auto a = Anisotropy(2.0, {0.35, 0.6, 0.95});
  const Point zero(3, 0.0);
  Rect unit(zero, 1.0, a);
  for (int k = 1; k <= 4; ++k) {
    const double lambda = std::pow(4.0, -k);
    Rect target(zero, lambda, a);
    auto psi = scaling_map(lambda, a);
    for (int mask = 0; mask < 8; ++mask) {
      Point corner(3);
      for (int j = 0; j < 3; ++j) corner[j] = ((mask >> j) & 1) ? unit.upper(j) : unit.lower(j);
      auto img = psi(corner);
      for (int j = 0; j < 3; ++j) {
        const double expect = ((mask >> j) & 1) ? target.upper(j) : target.lower(j);
        EXPECT_NEAR(img[j], expect, 1e-12);
      }
    }
  }
}

TEST(Scaling, InverseRoundTrip) {
  oracle::Rng rng(15);
  for (int t = 0; t < 1000; ++t) {
    auto a = oracle::random_anisotropy(rng, 3);
    const double lambda = rng.log_uniform(1e-2, 1e2);
    auto psi = scaling_map(lambda, a);
    auto inv = psi.inverse();
    Point x{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    auto y = psi(inv(x));
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(y[k], x[k], 1e-12);
  }
}
