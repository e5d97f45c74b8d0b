#include "sparsecurve/geometry.hpp"

#include <cmath>
#include <string>

#include "sparsecurve/errors.hpp"

namespace sparsecurve {

ContourPoints::ContourPoints(std::vector<Point2> points) : points_(std::move(points)) {
  if (points_.size() < 3) {
    throw UsageError("a contour needs at least 3 points, got " +
                     std::to_string(points_.size()));
  }
  for (std::size_t m = 0; m < points_.size(); ++m) {
    if (!std::isfinite(points_[m].x) || !std::isfinite(points_[m].y)) {
      throw UsageError("contour point " + std::to_string(m) + " is not finite");
    }
  }
}

Eigen::VectorXd ContourPoints::xs() const {
  Eigen::VectorXd v(size());
  for (int m = 0; m < size(); ++m) v[m] = points_[m].x;
  return v;
}

Eigen::VectorXd ContourPoints::ys() const {
  Eigen::VectorXd v(size());
  for (int m = 0; m < size(); ++m) v[m] = points_[m].y;
  return v;
}

Point2 ContourPoints::centroid() const noexcept {
  Point2 c;
  for (const auto& p : points_) {
    c.x += p.x;
    c.y += p.y;
  }
  c.x /= size();
  c.y /= size();
  return c;
}

double ContourPoints::centroid_variance() const noexcept {
  const Point2 c = centroid();
  double acc = 0.0;
  for (const auto& p : points_) {
    acc += (p.x - c.x) * (p.x - c.x) + (p.y - c.y) * (p.y - c.y);
  }
  return acc / size();
}

Point2 rotate(Point2 p, double theta) noexcept {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c * p.x - s * p.y, s * p.x + c * p.y};
}

ContourPoints rotate_points(const ContourPoints& points, double theta) {
  std::vector<Point2> out;
  out.reserve(points.points().size());
  for (const auto& p : points.points()) out.push_back(rotate(p, theta));
  return ContourPoints(std::move(out));
}

ContourPoints rotate_points_about(const ContourPoints& points, Point2 center, double theta) {
  if (theta == 0.0) return points;
  std::vector<Point2> out;
  out.reserve(points.points().size());
  for (const auto& p : points.points()) {
    const Point2 r = rotate({p.x - center.x, p.y - center.y}, theta);
    out.push_back({r.x + center.x, r.y + center.y});
  }
  return ContourPoints(std::move(out));
}

}  // namespace sparsecurve
