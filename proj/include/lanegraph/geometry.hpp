#pragma once

#include <cmath>
#include <compare>

namespace lanegraph {

/// 2-D point. Pixel space (x right, y down) inside graphs, [0,1]^2 inside
/// proposals.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend constexpr auto operator<=>(const Point&, const Point&) = default;
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }
inline double manhattan(Point a, Point b) {
  return std::abs(a.x - b.x) + std::abs(a.y - b.y);
}
inline bool is_finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

/// Euclidean distance from p to the closed segment [a, b].
inline double distance_to_segment(Point p, Point a, Point b) {
  const Point ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return distance(p, a);
  double t = dot(p - a, ab) / len2;
  t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
  return distance(p, a + t * ab);
}

/// Image extent in pixels.
struct Extent {
  double width = 0.0;
  double height = 0.0;

  friend constexpr bool operator==(const Extent&, const Extent&) = default;
};

}  // namespace lanegraph
