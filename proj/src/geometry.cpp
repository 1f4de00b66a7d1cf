#include "contact/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "contact/errors.hpp"

namespace contact::geom {

namespace {

double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

int orientation(const Point& o, const Point& a, const Point& b) {
  const double c = cross(o, a, b);
  return (c > 0.0) - (c < 0.0);
}

bool segments_cross(const Point& p1, const Point& p2, const Point& q1, const Point& q2) {
  const int o1 = orientation(p1, p2, q1), o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1), o4 = orientation(q1, q2, p2);
  return o1 * o2 < 0 && o3 * o4 < 0;
}

}  // namespace

std::array<Point, 4> RotatedBox::corners() const {
  const double ux = std::cos(angle), uy = std::sin(angle);
  const double hw = width / 2.0, hh = height / 2.0;
  // Counter-clockwise from the (-u, -v) corner.
  return {Point{center.x - hw * ux + hh * uy, center.y - hw * uy - hh * ux},
          Point{center.x + hw * ux + hh * uy, center.y + hw * uy - hh * ux},
          Point{center.x + hw * ux - hh * uy, center.y + hw * uy + hh * ux},
          Point{center.x - hw * ux - hh * uy, center.y - hw * uy + hh * ux}};
}

double signed_polygon_area(std::span<const Point> polygon) {
  double twice = 0.0;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const Point& a = polygon[i];
    const Point& b = polygon[(i + 1) % polygon.size()];
    twice += a.x * b.y - b.x * a.y;
  }
  return twice / 2.0;
}

double polygon_area(std::span<const Point> polygon) { return std::abs(signed_polygon_area(polygon)); }

bool is_simple(const Quadrilateral& q) {
  const auto& v = q.vertices;
  return !segments_cross(v[0], v[1], v[2], v[3]) && !segments_cross(v[1], v[2], v[3], v[0]);
}

Quadrilateral normalize_quad(const Quadrilateral& q, double image_width, double image_height,
                             const std::function<void(const std::string&)>& warn) {
  Quadrilateral out = q;
  for (auto& p : out.vertices) {
    p.x = std::clamp(p.x, 0.0, image_width);
    p.y = std::clamp(p.y, 0.0, image_height);
  }
  if (!is_simple(out)) {
    if (warn) warn("self-intersecting quadrilateral reordered around its centroid");
    Point c;
    for (const auto& p : out.vertices) {
      c.x += p.x / 4.0;
      c.y += p.y / 4.0;
    }
    std::sort(out.vertices.begin(), out.vertices.end(), [&](const Point& a, const Point& b) {
      return std::atan2(a.y - c.y, a.x - c.x) < std::atan2(b.y - c.y, b.x - c.x);
    });
  }
  if (signed_polygon_area(out.vertices) < 0.0) std::reverse(out.vertices.begin(), out.vertices.end());
  return out;
}

AxisBox envelope(std::span<const Point> points) {
  if (points.empty()) throw ContractError("envelope of an empty point set");
  AxisBox b{points[0].x, points[0].y, points[0].x, points[0].y};
  for (const auto& p : points) {
    b.x_min = std::min(b.x_min, p.x);
    b.y_min = std::min(b.y_min, p.y);
    b.x_max = std::max(b.x_max, p.x);
    b.y_max = std::max(b.y_max, p.y);
  }
  return b;
}

AxisBox envelope(const Quadrilateral& q) { return envelope(std::span<const Point>(q.vertices)); }

std::vector<Point> convex_hull(std::vector<Point> points) {
  std::sort(points.begin(), points.end(),
            [](const Point& a, const Point& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 3) return points;
  std::vector<Point> hull(2 * points.size());
  std::size_t k = 0;
  for (const auto& p : points) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = points.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], points[i]) <= 0.0) --k;
    hull[k++] = points[i];
  }
  hull.resize(k - 1);
  return hull;
}

namespace {

// Rotates the rectangle's reference side into [0, pi/2), swapping extents.
RotatedBox canonical(RotatedBox r) {
  double a = std::fmod(r.angle, std::numbers::pi);
  if (a < 0.0) a += std::numbers::pi;
  if (a >= std::numbers::pi / 2.0) {
    a -= std::numbers::pi / 2.0;
    std::swap(r.width, r.height);
  }
  r.angle = a;
  return r;
}

}  // namespace

RotatedBox min_area_rect(std::span<const Point> points) {
  if (points.empty()) throw ContractError("min_area_rect of an empty point set");
  const auto hull = convex_hull(std::vector<Point>(points.begin(), points.end()));
  if (hull.size() == 1) return RotatedBox{hull[0], 0.0, 0.0, 0.0};
  if (hull.size() == 2) {
    const double dx = hull[1].x - hull[0].x, dy = hull[1].y - hull[0].y;
    return canonical({{(hull[0].x + hull[1].x) / 2.0, (hull[0].y + hull[1].y) / 2.0},
                      std::hypot(dx, dy),
                      0.0,
                      std::atan2(dy, dx)});
  }
  RotatedBox best;
  double best_area = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Point& a = hull[i];
    const Point& b = hull[(i + 1) % hull.size()];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    const double ux = (b.x - a.x) / len, uy = (b.y - a.y) / len;
    double umin = std::numeric_limits<double>::infinity(), umax = -umin;
    double vmin = umin, vmax = -umin;
    for (const auto& p : hull) {
      const double pu = p.x * ux + p.y * uy;
      const double pv = -p.x * uy + p.y * ux;
      umin = std::min(umin, pu);
      umax = std::max(umax, pu);
      vmin = std::min(vmin, pv);
      vmax = std::max(vmax, pv);
    }
    const double area = (umax - umin) * (vmax - vmin);
    if (area < best_area) {
      best_area = area;
      const double cu = (umin + umax) / 2.0, cv = (vmin + vmax) / 2.0;
      best = {{cu * ux - cv * uy, cu * uy + cv * ux}, umax - umin, vmax - vmin, std::atan2(uy, ux)};
    }
  }
  return canonical(best);
}

RotatedBox min_area_rect(const Quadrilateral& q) { return min_area_rect(std::span<const Point>(q.vertices)); }

AxisBox clamp_box(const AxisBox& b, const AxisBox& bounds) {
  AxisBox c{std::clamp(b.x_min, bounds.x_min, bounds.x_max), std::clamp(b.y_min, bounds.y_min, bounds.y_max),
            std::clamp(b.x_max, bounds.x_min, bounds.x_max), std::clamp(b.y_max, bounds.y_min, bounds.y_max)};
  return c;
}

AxisBox extend_box(const AxisBox& b, double factor, const std::optional<AxisBox>& bounds) {
  if (!(factor > 0.0)) throw ContractError("extend_box: factor must be positive");
  const Point c = b.center();
  const double hw = b.width() * factor / 2.0, hh = b.height() * factor / 2.0;
  AxisBox out{c.x - hw, c.y - hh, c.x + hw, c.y + hh};
  return bounds ? clamp_box(out, *bounds) : out;
}

double intersection_area(const AxisBox& a, const AxisBox& b) {
  const double w = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double h = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  return (w > 0.0 && h > 0.0) ? w * h : 0.0;
}

double iou(const AxisBox& a, const AxisBox& b) {
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

double overlap_fraction(const AxisBox& hand, const AxisBox& obj) {
  const double area = hand.area();
  if (!(area > 0.0)) throw ContractError("overlap_fraction: hand box has zero area");
  return intersection_area(hand, obj) / area;
}

AxisBox union_box(const AxisBox& a, const AxisBox& b) {
  return {std::min(a.x_min, b.x_min), std::min(a.y_min, b.y_min), std::max(a.x_max, b.x_max),
          std::max(a.y_max, b.y_max)};
}

AxisBox fallback_union(const AxisBox& hand) { return hand; }

bool size_filter(const Quadrilateral& q, double image_height, double image_width) {
  if (!(image_height > 0.0 && image_width > 0.0)) throw ContractError("size_filter: image dimensions must be positive");
  const AxisBox b = envelope(q);
  const double min_side = std::min(b.width(), b.height());
  return 30.0 * min_side > std::min(image_height, image_width);
}

AxisBox hand_crop(const Quadrilateral& q, CropKind kind, bool extended, const std::optional<AxisBox>& bounds) {
  const double factor = extended ? 1.5 : 1.0;
  AxisBox out;
  if (kind == CropKind::kAxisParallel) {
    out = extend_box(envelope(q), factor);
  } else {
    RotatedBox r = min_area_rect(q);
    r.width *= factor;
    r.height *= factor;
    const auto corners = r.corners();
    out = envelope(std::span<const Point>(corners));
  }
  return bounds ? clamp_box(out, *bounds) : out;
}

}  // namespace contact::geom
