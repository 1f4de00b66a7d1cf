#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "contact/errors.hpp"
#include "contact/geometry.hpp"
#include "oracles.hpp"

using namespace contact::geom;

namespace {

Quadrilateral quad(std::array<Point, 4> v) { return Quadrilateral{v}; }

Quadrilateral random_quad(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coord(0.0, 100.0);
  Quadrilateral q;
  for (auto& v : q.vertices) v = {coord(rng), coord(rng)};
  return normalize_quad(q, 100.0, 100.0);
}

const Quadrilateral kDiamond = quad({{{1, 0}, {2, 1}, {1, 2}, {0, 1}}});

}  // namespace

TEST(Envelope, Cases) {
  EXPECT_EQ(envelope(quad({{{0, 0}, {3, 0}, {3, 3}, {0, 3}}})), (AxisBox{0, 0, 3, 3}));
  EXPECT_EQ(envelope(kDiamond), (AxisBox{0, 0, 2, 2}));
}

TEST(Envelope, CoversShoelaceArea) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    const auto q = random_quad(rng);
    EXPECT_GE(envelope(q).area(), oracle::shoelace(q.vertices) - 1e-9);
    EXPECT_NEAR(polygon_area(q.vertices), oracle::shoelace(q.vertices), 1e-9);
  }
}

TEST(NormalizeQuad, ClampsReordersAndOrients) {
  int warnings = 0;
  const auto bowtie = quad({{{0, 0}, {2, 2}, {2, 0}, {0, 2}}});
  const auto fixed = normalize_quad(bowtie, 10, 10, [&](const std::string&) { ++warnings; });
  EXPECT_EQ(warnings, 1);
  EXPECT_TRUE(is_simple(fixed));
  EXPECT_GT(signed_polygon_area(fixed.vertices), 0.0);
  EXPECT_NEAR(polygon_area(fixed.vertices), 4.0, 1e-12);

  const auto clockwise = quad({{{0, 0}, {0, 2}, {2, 2}, {2, 0}}});
  EXPECT_GT(signed_polygon_area(normalize_quad(clockwise, 10, 10).vertices), 0.0);

  const auto outside = normalize_quad(quad({{{-5, -5}, {20, 0}, {20, 20}, {0, 20}}}), 10, 10);
  for (const auto& v : outside.vertices) {
    EXPECT_GE(v.x, 0.0);
    EXPECT_LE(v.x, 10.0);
    EXPECT_GE(v.y, 0.0);
    EXPECT_LE(v.y, 10.0);
  }
}

TEST(MinAreaRect, AxisAlignedRectangleIsFixedPoint) {
  const auto r = min_area_rect(quad({{{1, 1}, {5, 1}, {5, 3}, {1, 3}}}));
  EXPECT_NEAR(r.area(), 8.0, 1e-12);
  EXPECT_NEAR(std::fmod(r.angle, std::numbers::pi / 2), 0.0, 1e-12);
  EXPECT_NEAR(r.center.x, 3.0, 1e-12);
  EXPECT_NEAR(r.center.y, 2.0, 1e-12);
}

TEST(MinAreaRect, DiamondIsRotatedSquare) {
  const auto r = min_area_rect(kDiamond);
  EXPECT_NEAR(r.area(), 2.0, 1e-12);
  EXPECT_NEAR(r.width, std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(r.height, std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(r.angle, std::numbers::pi / 4, 1e-12);
  EXPECT_EQ(envelope(kDiamond).area(), 4.0);
}

TEST(MinAreaRect, CollinearGivesZeroHeight) {
  const auto r = min_area_rect(quad({{{0, 0}, {1, 1}, {2, 2}, {3, 3}}}));
  EXPECT_NEAR(r.area(), 0.0, 1e-12);
  EXPECT_NEAR(std::max(r.width, r.height), 3 * std::sqrt(2.0), 1e-12);
}

TEST(MinAreaRect, EnclosesAndBeatsAngleSweep) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 100; ++i) {
    const auto q = random_quad(rng);
    const auto r = min_area_rect(q);
    EXPECT_LE(r.area(), envelope(q).area() + 1e-9);
    EXPECT_LE(r.area(), oracle::angle_sweep_min_area(q.vertices) + 1e-9);
    const double fine = oracle::angle_sweep_min_area(q.vertices, 18000);
    EXPECT_LE(r.area(), fine + 1e-9);
    EXPECT_GE(r.area(), fine * 0.99);
    // Every vertex lies inside the rectangle.
    const double c = std::cos(r.angle), s = std::sin(r.angle);
    for (const auto& v : q.vertices) {
      const double u = (v.x - r.center.x) * c + (v.y - r.center.y) * s;
      const double w = -(v.x - r.center.x) * s + (v.y - r.center.y) * c;
      EXPECT_LE(std::abs(u), r.width / 2 + 1e-9);
      EXPECT_LE(std::abs(w), r.height / 2 + 1e-9);
    }
  }
}

TEST(ExtendBox, AreaFactor) {
  const auto e = extend_box({0, 0, 2, 2}, 1.5);
  EXPECT_EQ(e, (AxisBox{-0.5, -0.5, 2.5, 2.5}));
  EXPECT_EQ(e.area(), 9.0);
  EXPECT_EQ(e.area(), 2.25 * 4.0);
  EXPECT_EQ(extend_box({1, 2, 4, 7}, 1.0), (AxisBox{1, 2, 4, 7}));
  EXPECT_EQ(extend_box({3, 3, 3, 3}).area(), 0.0);
  EXPECT_EQ(extend_box({0, 0, 2, 2}, 1.5, AxisBox{0, 0, 10, 10}), (AxisBox{0, 0, 2.5, 2.5}));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 50);
  for (int i = 0; i < 100; ++i) {
    const double x = u(rng), y = u(rng);
    const AxisBox b{x, y, x + 8, y + 4};
    EXPECT_NEAR(extend_box(b).area(), 2.25 * b.area(), 1e-12 * b.area());
  }
}

TEST(Iou, Cases) {
  const AxisBox b{1, 2, 5, 9};
  EXPECT_EQ(iou(b, b), 1.0);
  EXPECT_EQ(iou({0, 0, 1, 1}, {2, 2, 3, 3}), 0.0);
  EXPECT_EQ(iou({0, 0, 1, 1}, {0.5, 0, 1.5, 1}), 0.5 / 1.5);
  EXPECT_EQ(iou({1, 1, 1, 1}, {1, 1, 1, 1}), 0.0);
}

TEST(Iou, SymmetricBoundedAndMonotone) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 20);
  for (int i = 0; i < 200; ++i) {
    AxisBox a{u(rng), u(rng), 0, 0}, b{u(rng), u(rng), 0, 0};
    a.x_max = a.x_min + u(rng);
    a.y_max = a.y_min + u(rng);
    b.x_max = b.x_min + u(rng);
    b.y_max = b.y_min + u(rng);
    EXPECT_EQ(iou(a, b), iou(b, a));
    EXPECT_GE(iou(a, b), 0.0);
    EXPECT_LE(iou(a, b), 1.0);
    AxisBox shrunk{a.x_min + 0.5, a.y_min + 0.5, std::max(a.x_min + 0.5, a.x_max - 0.5), std::max(a.y_min + 0.5, a.y_max - 0.5)};
    EXPECT_LE(intersection_area(shrunk, b), intersection_area(a, b));
  }
}

TEST(OverlapFraction, Cases) {
  EXPECT_EQ(overlap_fraction({1, 1, 2, 2}, {0, 0, 5, 5}), 1.0);
  EXPECT_EQ(overlap_fraction({0, 0, 1, 1}, {2, 2, 3, 3}), 0.0);
  EXPECT_EQ(overlap_fraction({0, 0, 2, 2}, {1, 1, 3, 3}), 0.25);
  EXPECT_THROW(overlap_fraction({1, 1, 1, 4}, {0, 0, 5, 5}), contact::ContractError);
}

TEST(UnionBox, Laws) {
  const AxisBox b{1, 2, 3, 4};
  EXPECT_EQ(union_box(b, b), b);
  EXPECT_EQ(union_box({0, 0, 1, 1}, {2, 2, 3, 3}), (AxisBox{0, 0, 3, 3}));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 20);
  auto rnd = [&] {
    AxisBox r{u(rng), u(rng), 0, 0};
    r.x_max = r.x_min + u(rng);
    r.y_max = r.y_min + u(rng);
    return r;
  };
  for (int i = 0; i < 100; ++i) {
    const auto x = rnd(), y = rnd(), z = rnd();
    EXPECT_EQ(union_box(x, y), union_box(y, x));
    EXPECT_EQ(union_box(union_box(x, y), z), union_box(x, union_box(y, z)));
  }
  EXPECT_EQ(fallback_union(b), b);
}

TEST(SizeFilter, ThresholdArithmetic) {
  auto box_quad = [](double w, double h) { return quad({{{0, 0}, {w, 0}, {w, h}, {0, h}}}); };
  EXPECT_TRUE(size_filter(box_quad(4, 50), 100, 100));
  EXPECT_FALSE(size_filter(box_quad(3, 50), 100, 100));
  EXPECT_FALSE(size_filter(box_quad(10, 50), 300, 600));
  EXPECT_TRUE(size_filter(box_quad(10.5, 50), 300, 600));
  EXPECT_FALSE(size_filter(box_quad(10, 50), 600, 300));
  EXPECT_FALSE(size_filter(box_quad(1, 1), 30, 30));
}

TEST(SizeFilter, ScaleInvariant) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 100; ++i) {
    const auto q = random_quad(rng);
    const bool base = size_filter(q, 100, 120);
    for (double f : {0.5, 2.0, 4.0, 0.25}) {
      Quadrilateral s = q;
      for (auto& v : s.vertices) v = {v.x * f, v.y * f};
      EXPECT_EQ(size_filter(s, 100 * f, 120 * f), base);
    }
  }
}

TEST(HandCrop, Kinds) {
  EXPECT_EQ(hand_crop(kDiamond, CropKind::kAxisParallel, false), (AxisBox{0, 0, 2, 2}));
  EXPECT_EQ(hand_crop(kDiamond, CropKind::kAxisParallel, true).area(), 9.0);
  const auto rotated = hand_crop(kDiamond, CropKind::kQuadrilateral, false);
  EXPECT_NEAR(rotated.area(), 4.0, 1e-12);
  const auto rotated_ext = hand_crop(kDiamond, CropKind::kQuadrilateral, true);
  EXPECT_NEAR(rotated_ext.area(), 9.0, 1e-12);
  EXPECT_EQ(hand_crop(kDiamond, CropKind::kAxisParallel, true, AxisBox{0, 0, 2, 2}), (AxisBox{0, 0, 2, 2}));
}
