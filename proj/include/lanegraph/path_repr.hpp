#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lanegraph/geometry.hpp"

namespace lanegraph {

inline constexpr int kDefaultBezierDegree = 10;
inline constexpr std::size_t kDefaultPolylinePoints = 20;

/// Piecewise-linear path: at least two finite points, positive arc length.
class Polyline {
 public:
  /// Throws Error(kInvalidArgument) for < 2 points or non-finite
  /// coordinates, Error(kDegenerate) for zero total length.
  explicit Polyline(std::vector<Point> points);

  const std::vector<Point>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  double length() const;

  friend bool operator==(const Polyline&, const Polyline&) = default;

 private:
  std::vector<Point> points_;
};

/// Bezier curve of degree control_points().size() - 1 >= 1.
class BezierCurve {
 public:
  /// Throws Error(kInvalidArgument) for < 2 points or non-finite coordinates.
  explicit BezierCurve(std::vector<Point> control_points);

  const std::vector<Point>& control_points() const { return control_points_; }
  int degree() const { return static_cast<int>(control_points_.size()) - 1; }

  friend bool operator==(const BezierCurve&, const BezierCurve&) = default;

 private:
  std::vector<Point> control_points_;
};

/// B_{i,n}(t) = C(n,i) t^i (1-t)^(n-i). Requires 0 <= i <= n and t in [0,1].
double bernstein(int i, int n, double t);

/// Curve point at t in [0,1] via De Casteljau; exact endpoints at t = 0, 1.
Point bezier_eval(const BezierCurve& c, double t);

/// Curve point at t as the explicit Bernstein sum. Less stable than
/// bezier_eval for high degrees; kept for cross-checking.
Point bezier_eval_bernstein(const BezierCurve& c, double t);

/// k >= 2 points at t = j / (k - 1).
Polyline bezier_sample(const BezierCurve& c, std::size_t k);

/// Cumulative arc length at every vertex, starting at 0.
std::vector<double> cumulative_length(std::span<const Point> points);

/// k >= 2 points equally spaced by arc length; endpoints copied exactly.
Polyline resample_polyline(const Polyline& p, std::size_t k);

enum class Parametrization {
  kChordLength,  // t_j proportional to cumulative chord length
  kUniform,      // t_j = j / (m - 1), the inverse of bezier_sample
};

struct BezierFit {
  BezierCurve curve;
  double rmse = 0.0;  // root-mean-square point distance at the assigned t_j
};

/// Least-squares Bezier fit with b_0 and b_n clamped to the polyline
/// endpoints; only interior control points are solved for.
///
/// Throws Error(kInvalidArgument) for degree < 1 or fewer than degree + 1
/// points, Error(kDegenerate) when the reduced system is rank deficient.
BezierFit fit_bezier(const Polyline& p, int degree,
                     Parametrization param = Parametrization::kChordLength);

/// Parameter values the fit assigns to the polyline's vertices.
std::vector<double> assign_parameters(const Polyline& p, Parametrization param);

}  // namespace lanegraph
