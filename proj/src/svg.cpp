#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "sparsecurve/errors.hpp"
#include "sparsecurve/io.hpp"

namespace sparsecurve::io {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

double circular_distance(double a, double b, double period) {
  const double d = std::fmod(std::abs(a - b), period);
  return std::min(d, period - d);
}

}  // namespace

std::string render_svg(const CurveModel& model, const KnotList& knots, const SvgOptions& options) {
  if (options.samples_per_unit < 1) throw UsageError("samples per unit must be >= 1");
  const auto samples = sample_curve(model, options.samples_per_unit);

  double xmin = std::numeric_limits<double>::infinity();
  double ymin = xmin;
  double xmax = -xmin;
  double ymax = -xmin;
  for (const auto& s : samples) {
    xmin = std::min(xmin, s.x);
    xmax = std::max(xmax, s.x);
    ymin = std::min(ymin, s.y);
    ymax = std::max(ymax, s.y);
  }
  double w = xmax - xmin;
  double h = ymax - ymin;
  double extent = std::max(w, h);
  if (!(extent > 0.0)) extent = 1.0;
  // A flat box still gets a visible margin.
  const double mx = 0.05 * (w > 0.0 ? w : extent);
  const double my = 0.05 * (h > 0.0 ? h : extent);
  const double vx = xmin - mx;
  const double vy = ymin - my;
  const double vw = w + 2 * mx;
  const double vh = h + 2 * my;
  const double stroke = 0.004 * extent;
  const double marker = 0.012 * extent;

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << fmt(vx) << ' ' << fmt(vy) << ' '
      << fmt(vw) << ' ' << fmt(vh) << "\">\n";
  out << "  <path fill=\"none\" stroke=\"black\" stroke-width=\"" << fmt(stroke) << "\" d=\"";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out << (i == 0 ? "M" : " L") << fmt(samples[i].x) << ',' << fmt(samples[i].y);
  }
  out << " Z\"/>\n";

  if (options.show_knots && !knots.empty()) {
    const double period = model.period();
    const double step = model.blocks().front().space.step();
    std::vector<bool> paired(knots.size(), false);
    struct Marker {
      char shape;
      double t;
    };
    std::vector<Marker> markers;
    for (std::size_t i = 0; i < knots.size(); ++i) {
      if (knots[i].block != 1) continue;
      for (std::size_t j = 0; j < knots.size(); ++j) {
        if (knots[j].block == 1 || paired[j]) continue;
        if (circular_distance(knots[i].location, knots[j].location, period) <= 0.5 * step) {
          paired[i] = paired[j] = true;
          break;
        }
      }
    }
    for (std::size_t i = 0; i < knots.size(); ++i) {
      if (paired[i]) {
        if (knots[i].block == 1) markers.push_back({'d', knots[i].location});
        continue;
      }
      markers.push_back({knots[i].block == 1 ? 'c' : 't', knots[i].location});
    }
    out << "  <g fill=\"none\" stroke=\"red\" stroke-width=\"" << fmt(stroke) << "\">\n";
    for (const Marker& m : markers) {
      const Point2 p = model.eval(m.t);
      const double r = marker;
      switch (m.shape) {
        case 'c':
          out << "    <circle cx=\"" << fmt(p.x) << "\" cy=\"" << fmt(p.y) << "\" r=\"" << fmt(r)
              << "\"/>\n";
          break;
        case 't':
          out << "    <polygon points=\"" << fmt(p.x) << ',' << fmt(p.y - r) << ' '
              << fmt(p.x - 0.866 * r) << ',' << fmt(p.y + 0.5 * r) << ' ' << fmt(p.x + 0.866 * r)
              << ',' << fmt(p.y + 0.5 * r) << "\"/>\n";
          break;
        default:
          out << "    <polygon points=\"" << fmt(p.x) << ',' << fmt(p.y - r) << ' '
              << fmt(p.x + r) << ',' << fmt(p.y) << ' ' << fmt(p.x) << ',' << fmt(p.y + r) << ' '
              << fmt(p.x - r) << ',' << fmt(p.y) << "\"/>\n";
          break;
      }
    }
    out << "  </g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace sparsecurve::io
