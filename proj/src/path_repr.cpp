#include "lanegraph/path_repr.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <string>

#include "lanegraph/error.hpp"

namespace lanegraph {
namespace {

void require_finite(const std::vector<Point>& pts, const char* what) {
  if (pts.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, std::string(what) + " needs at least 2 points");
  }
  for (const Point& p : pts) {
    if (!is_finite(p)) {
      throw Error(ErrorCode::kInvalidArgument, std::string(what) + " has non-finite coordinates");
    }
  }
}

void require_unit(double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "parameter t=" + std::to_string(t) + " outside [0,1]");
  }
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

}  // namespace

Polyline::Polyline(std::vector<Point> points) : points_(std::move(points)) {
  require_finite(points_, "polyline");
  if (length() <= 0.0) throw Error(ErrorCode::kDegenerate, "degenerate zero-length polyline");
}

double Polyline::length() const { return cumulative_length(points_).back(); }

BezierCurve::BezierCurve(std::vector<Point> control_points)
    : control_points_(std::move(control_points)) {
  require_finite(control_points_, "bezier curve");
}

double bernstein(int i, int n, double t) {
  if (n < 0 || i < 0 || i > n) {
    throw Error(ErrorCode::kInvalidArgument,
                "bernstein index i=" + std::to_string(i) + " outside [0," + std::to_string(n) + "]");
  }
  require_unit(t);
  return binomial(n, i) * std::pow(t, i) * std::pow(1.0 - t, n - i);
}

Point bezier_eval(const BezierCurve& c, double t) {
  require_unit(t);
  std::vector<Point> work = c.control_points();
  const double s = 1.0 - t;
  for (std::size_t level = work.size() - 1; level > 0; --level) {
    for (std::size_t i = 0; i < level; ++i) {
      work[i] = Point{s * work[i].x + t * work[i + 1].x, s * work[i].y + t * work[i + 1].y};
    }
  }
  return work.front();
}

Point bezier_eval_bernstein(const BezierCurve& c, double t) {
  const int n = c.degree();
  Point acc;
  for (int i = 0; i <= n; ++i) acc = acc + bernstein(i, n, t) * c.control_points()[i];
  return acc;
}

Polyline bezier_sample(const BezierCurve& c, std::size_t k) {
  if (k < 2) throw Error(ErrorCode::kInvalidArgument, "bezier_sample needs k >= 2");
  std::vector<Point> pts;
  pts.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    pts.push_back(bezier_eval(c, static_cast<double>(j) / static_cast<double>(k - 1)));
  }
  return Polyline(std::move(pts));
}

std::vector<double> cumulative_length(std::span<const Point> points) {
  std::vector<double> cum(points.size(), 0.0);
  for (std::size_t i = 1; i < points.size(); ++i) {
    cum[i] = cum[i - 1] + distance(points[i - 1], points[i]);
  }
  return cum;
}

Polyline resample_polyline(const Polyline& p, std::size_t k) {
  if (k < 2) throw Error(ErrorCode::kInvalidArgument, "resample_polyline needs k >= 2");
  const auto& src = p.points();
  const auto cum = cumulative_length(src);
  const double total = cum.back();

  std::vector<Point> out;
  out.reserve(k);
  out.push_back(src.front());
  std::size_t seg = 0;
  for (std::size_t j = 1; j + 1 < k; ++j) {
    const double target = total * static_cast<double>(j) / static_cast<double>(k - 1);
    while (seg + 2 < src.size() && cum[seg + 1] < target) ++seg;
    const double seg_len = cum[seg + 1] - cum[seg];
    const double u = seg_len > 0.0 ? std::clamp((target - cum[seg]) / seg_len, 0.0, 1.0) : 0.0;
    out.push_back(src[seg] + u * (src[seg + 1] - src[seg]));
  }
  out.push_back(src.back());
  return Polyline(std::move(out));
}

std::vector<double> assign_parameters(const Polyline& p, Parametrization param) {
  const std::size_t m = p.size();
  std::vector<double> t(m);
  if (param == Parametrization::kUniform) {
    for (std::size_t j = 0; j < m; ++j) t[j] = static_cast<double>(j) / static_cast<double>(m - 1);
  } else {
    const auto cum = cumulative_length(p.points());
    for (std::size_t j = 0; j < m; ++j) t[j] = cum[j] / cum.back();
  }
  t.front() = 0.0;
  t.back() = 1.0;
  return t;
}

BezierFit fit_bezier(const Polyline& p, int degree, Parametrization param) {
  if (degree < 1) throw Error(ErrorCode::kInvalidArgument, "bezier degree must be >= 1");
  const auto& pts = p.points();
  const std::size_t m = pts.size();
  const auto n = static_cast<std::size_t>(degree);
  if (m < n + 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "underdetermined fit: " + std::to_string(m) + " points for degree " +
                    std::to_string(degree));
  }

  const auto t = assign_parameters(p, param);
  std::vector<Point> ctrl(n + 1);
  ctrl.front() = pts.front();
  ctrl.back() = pts.back();

  if (n >= 2) {
    const auto interior = static_cast<Eigen::Index>(n - 1);
    Eigen::MatrixXd basis(static_cast<Eigen::Index>(m), interior);
    Eigen::MatrixXd rhs(static_cast<Eigen::Index>(m), 2);
    for (std::size_t j = 0; j < m; ++j) {
      const auto row = static_cast<Eigen::Index>(j);
      for (std::size_t i = 1; i < n; ++i) {
        basis(row, static_cast<Eigen::Index>(i - 1)) = bernstein(static_cast<int>(i), degree, t[j]);
      }
      const double b0 = bernstein(0, degree, t[j]);
      const double bn = bernstein(degree, degree, t[j]);
      rhs(row, 0) = pts[j].x - b0 * pts.front().x - bn * pts.back().x;
      rhs(row, 1) = pts[j].y - b0 * pts.front().y - bn * pts.back().y;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis);
    qr.setThreshold(1e-12);
    if (qr.rank() < interior) {
      throw Error(ErrorCode::kDegenerate,
                  "rank-deficient bezier fit (rank " + std::to_string(qr.rank()) + " < " +
                      std::to_string(interior) + ")");
    }
    const Eigen::MatrixXd sol = qr.solve(rhs);
    for (std::size_t i = 1; i < n; ++i) {
      const auto r = static_cast<Eigen::Index>(i - 1);
      ctrl[i] = Point{sol(r, 0), sol(r, 1)};
    }
  }

  BezierCurve curve(std::move(ctrl));
  double sq = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double d = distance(bezier_eval(curve, t[j]), pts[j]);
    sq += d * d;
  }
  return {std::move(curve), std::sqrt(sq / static_cast<double>(m))};
}

}  // namespace lanegraph
