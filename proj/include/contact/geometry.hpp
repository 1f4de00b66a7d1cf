#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace contact::geom {

// Continuous pixel coordinates.
struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

struct AxisBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
  Point center() const { return {(x_min + x_max) / 2.0, (y_min + y_max) / 2.0}; }
  bool valid() const { return x_min <= x_max && y_min <= y_max; }
  bool operator==(const AxisBox&) const = default;
};

struct RotatedBox {
  Point center;
  double width = 0.0;
  double height = 0.0;
  double angle = 0.0;  // radians, direction of the width side

  double area() const { return width * height; }
  std::array<Point, 4> corners() const;
};

struct Quadrilateral {
  std::array<Point, 4> vertices;
};

double polygon_area(std::span<const Point> polygon);         // shoelace, absolute
double signed_polygon_area(std::span<const Point> polygon);  // > 0 when counter-clockwise
bool is_simple(const Quadrilateral& q);

// Clamps into [0,width] x [0,height], repairs self-intersecting vertex orders
// by sorting around the centroid, and orients counter-clockwise. `warn`, when
// set, is told about repairs.
Quadrilateral normalize_quad(const Quadrilateral& q, double image_width, double image_height,
                             const std::function<void(const std::string&)>& warn = {});

AxisBox envelope(const Quadrilateral& q);
AxisBox envelope(std::span<const Point> points);

// Andrew's monotone chain, counter-clockwise, collinear points dropped.
std::vector<Point> convex_hull(std::vector<Point> points);

// Minimum-area enclosing rectangle. Some optimal rectangle has a side along a
// hull edge, so every edge direction of the hull is tried.
RotatedBox min_area_rect(std::span<const Point> points);
RotatedBox min_area_rect(const Quadrilateral& q);

// Same center, each side scaled by `factor`; clamped to `bounds` if given.
AxisBox extend_box(const AxisBox& b, double factor = 1.5, const std::optional<AxisBox>& bounds = std::nullopt);
AxisBox clamp_box(const AxisBox& b, const AxisBox& bounds);

double intersection_area(const AxisBox& a, const AxisBox& b);
double iou(const AxisBox& a, const AxisBox& b);
// Intersection area over the hand's area. Zero-area hand is a ContractError.
double overlap_fraction(const AxisBox& hand, const AxisBox& obj);
AxisBox union_box(const AxisBox& a, const AxisBox& b);
// Union region used when no objects were detected: the hand box itself.
AxisBox fallback_union(const AxisBox& hand);

// Annotation size rule: the envelope's shorter side must exceed
// min(image_height, image_width) / 30.
bool size_filter(const Quadrilateral& q, double image_height, double image_width);

enum class CropKind { kAxisParallel, kQuadrilateral };

// Axis-parallel crop for a hand: either the quad's envelope, or the envelope
// of its minimum-area rotated rectangle. `extended` grows each side by 50%
// (area x2.25) before taking the envelope; `bounds` clamps the result.
AxisBox hand_crop(const Quadrilateral& q, CropKind kind, bool extended,
                  const std::optional<AxisBox>& bounds = std::nullopt);

}  // namespace contact::geom
