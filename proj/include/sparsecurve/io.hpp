#pragma once

// File formats: contour point CSV in, model document (JSON) and SVG out.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sparsecurve/curvefit.hpp"

namespace sparsecurve::io {

/// Parses "x,y" rows (optional "x,y" header, blank lines ignored). Throws
/// UsageError naming the line on malformed input.
[[nodiscard]] ContourPoints parse_points(std::istream& in);
[[nodiscard]] ContourPoints read_points(const std::filesystem::path& path);
void write_points(std::ostream& out, const ContourPoints& points);

inline constexpr int kModelFormatVersion = 1;

/// Parameters and report of the fit that produced a model.
struct FitMetadata {
  std::vector<double> lambdas;  ///< lambda, or (lambda1, lambda2)
  Regularizer regularizer = Regularizer::GroupL2;
  AdmmConfig admm;
  FitReport report;
};

struct ModelDocument {
  CurveModel model;
  std::optional<FitMetadata> fit;
};

[[nodiscard]] std::string serialize_model(const ModelDocument& doc);
/// Throws UsageError on malformed documents or unknown format versions.
[[nodiscard]] ModelDocument parse_model(const std::string& text);
[[nodiscard]] ModelDocument read_model(const std::filesystem::path& path);

/// Writes `contents` to a sibling temporary file and renames it over `path`,
/// so readers never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

struct SvgOptions {
  int samples_per_unit = 8;
  bool show_knots = true;
};

/// Standalone SVG: the closed sampled curve plus optional knot markers
/// (circles for block 1, triangles for block 2, diamonds where knots of both
/// blocks lie within h/2 of each other).
[[nodiscard]] std::string render_svg(const CurveModel& model, const KnotList& knots,
                                     const SvgOptions& options = {});

[[nodiscard]] std::string regularizer_name(Regularizer r);
/// "ritv" or "tvl1"; throws UsageError otherwise.
[[nodiscard]] Regularizer parse_regularizer(const std::string& name);

}  // namespace sparsecurve::io
