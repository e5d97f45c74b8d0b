#include "fixtures.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace fixtures {

ContourPoints square(int per_side, double side) {
  const std::vector<Point2> v{{0.0, 0.0}, {side, 0.0}, {side, side}, {0.0, side}};
  return polygon(v, std::vector<int>(4, per_side));
}

ContourPoints polygon(const std::vector<Point2>& vertices, const std::vector<int>& samples) {
  std::vector<Point2> pts;
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    const Point2 a = vertices[k];
    const Point2 b = vertices[(k + 1) % vertices.size()];
    for (int j = 0; j < samples[k]; ++j) {
      const double s = static_cast<double>(j) / samples[k];
      pts.push_back({a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)});
    }
  }
  return ContourPoints(std::move(pts));
}

ContourPoints reference_polygon() {
  const std::vector<Point2> v{{0.0, 0.0},   {26.0, -6.0}, {41.0, 10.0},
                              {34.0, 31.0}, {12.0, 36.0}, {-4.0, 18.0}};
  return polygon(v, {14, 12, 12, 12, 12, 10});
}

ContourPoints rounded_rectangle(int m, double width, double height, double radius) {
  const double sx = width - 2 * radius;
  const double sy = height - 2 * radius;
  const double arc = 0.5 * std::numbers::pi * radius;
  const double perimeter = 2 * sx + 2 * sy + 4 * arc;
  // Segments in order: bottom, corner, right, corner, top, corner, left, corner.
  const double lengths[8] = {sx, arc, sy, arc, sx, arc, sy, arc};
  const Point2 centers[4] = {{width - radius, radius},
                             {width - radius, height - radius},
                             {radius, height - radius},
                             {radius, radius}};
  std::vector<Point2> pts;
  for (int j = 0; j < m; ++j) {
    double s = perimeter * j / m;
    int seg = 0;
    while (seg < 7 && s >= lengths[seg]) s -= lengths[seg++];
    const int side = seg / 2;
    if (seg % 2 == 0) {
      switch (side) {
        case 0: pts.push_back({radius + s, 0.0}); break;
        case 1: pts.push_back({width, radius + s}); break;
        case 2: pts.push_back({width - radius - s, height}); break;
        default: pts.push_back({0.0, height - radius - s}); break;
      }
    } else {
      const double phi = -0.5 * std::numbers::pi + side * 0.5 * std::numbers::pi + s / radius;
      const Point2 c = centers[side];
      pts.push_back({c.x + radius * std::cos(phi), c.y + radius * std::sin(phi)});
    }
  }
  return ContourPoints(std::move(pts));
}

ContourPoints spline_contour(const sparsecurve::SplineSpace& space,
                             const sparsecurve::CoefficientPair& coeffs) {
  std::vector<Point2> pts;
  for (int m = 0; m < space.period(); ++m) {
    pts.push_back({sparsecurve::eval_spline(space, coeffs.cx, m),
                   sparsecurve::eval_spline(space, coeffs.cy, m)});
  }
  return ContourPoints(std::move(pts));
}

sparsecurve::CoefficientPair loop_coefficients(const sparsecurve::SplineSpace& space,
                                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.15, 0.15);
  const int n = space.num_coeffs();
  Eigen::VectorXd cx(n);
  Eigen::VectorXd cy(n);
  for (int k = 0; k < n; ++k) {
    const double phi = 2 * std::numbers::pi * k / n;
    const double r = 10.0 * (1.0 + jitter(rng));
    cx[k] = 3.0 + r * std::cos(phi);
    cy[k] = -2.0 + r * std::sin(phi);
  }
  return {cx, cy};
}

sparsecurve::CoefficientPair random_pair(int n, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, scale);
  Eigen::VectorXd cx(n);
  Eigen::VectorXd cy(n);
  for (int k = 0; k < n; ++k) {
    cx[k] = g(rng);
    cy[k] = g(rng);
  }
  return {cx, cy};
}

ContourPoints random_points(int m, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, scale);
  std::vector<Point2> pts;
  for (int k = 0; k < m; ++k) {
    const double x = g(rng);
    pts.push_back({x, g(rng)});
  }
  return ContourPoints(std::move(pts));
}

std::vector<Point2> to_vector(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  std::vector<Point2> out;
  for (Eigen::Index i = 0; i < x.size(); ++i) out.push_back({x[i], y[i]});
  return out;
}

}  // namespace fixtures
