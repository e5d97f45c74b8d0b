#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "sparsecurve/errors.hpp"
#include "sparsecurve/io.hpp"

namespace sparsecurve::io {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_double(const std::string& text, double& value) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  std::istringstream ss(t);
  ss.imbue(std::locale::classic());
  ss >> value;
  return ss && ss.eof();
}

}  // namespace

ContourPoints parse_points(std::istream& in) {
  std::vector<Point2> pts;
  std::string line;
  int line_no = 0;
  bool seen_data = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto comma = t.find(',');
    if (comma == std::string::npos) {
      throw UsageError("line " + std::to_string(line_no) + ": expected \"x,y\"");
    }
    const std::string xs = trim(t.substr(0, comma));
    const std::string ys = trim(t.substr(comma + 1));
    if (!seen_data && xs == "x" && ys == "y") {
      seen_data = true;
      continue;
    }
    seen_data = true;
    Point2 p;
    if (!parse_double(xs, p.x) || !parse_double(ys, p.y)) {
      throw UsageError("line " + std::to_string(line_no) + ": cannot parse \"" + t + "\"");
    }
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw UsageError("line " + std::to_string(line_no) + ": non-finite coordinate");
    }
    pts.push_back(p);
  }
  return ContourPoints(std::move(pts));
}

ContourPoints read_points(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open point file " + path.string());
  try {
    return parse_points(in);
  } catch (const UsageError& e) {
    throw UsageError(path.string() + ": " + e.what());
  }
}

void write_points(std::ostream& out, const ContourPoints& points) {
  out << "x,y\n";
  out << std::setprecision(17);
  for (const auto& p : points.points()) out << p.x << ',' << p.y << '\n';
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw UsageError("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw UsageError("cannot move output into place at " + path.string());
  }
}

}  // namespace sparsecurve::io
