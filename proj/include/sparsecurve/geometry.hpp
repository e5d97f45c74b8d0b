#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace sparsecurve {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point2&) const = default;
};

/// One period of an ordered, closed contour: p[0..M-1], M >= 3, all finite.
class ContourPoints {
 public:
  /// Throws UsageError if fewer than three points or any coordinate is not finite.
  explicit ContourPoints(std::vector<Point2> points);

  [[nodiscard]] int size() const noexcept { return static_cast<int>(points_.size()); }
  [[nodiscard]] const Point2& operator[](std::size_t m) const { return points_[m]; }
  [[nodiscard]] const std::vector<Point2>& points() const noexcept { return points_; }

  [[nodiscard]] Eigen::VectorXd xs() const;
  [[nodiscard]] Eigen::VectorXd ys() const;

  [[nodiscard]] Point2 centroid() const noexcept;
  /// Mean squared distance of the points to their centroid.
  [[nodiscard]] double centroid_variance() const noexcept;

  bool operator==(const ContourPoints&) const = default;

 private:
  std::vector<Point2> points_;
};

/// Rotation by theta (radians) about the origin.
[[nodiscard]] Point2 rotate(Point2 p, double theta) noexcept;
[[nodiscard]] ContourPoints rotate_points(const ContourPoints& points, double theta);

/// Rotation by theta about `center`. theta == 0 returns the input unchanged,
/// bit for bit.
[[nodiscard]] ContourPoints rotate_points_about(const ContourPoints& points, Point2 center,
                                                double theta);

}  // namespace sparsecurve
