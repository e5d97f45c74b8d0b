#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sparsecurve/errors.hpp"
#include "sparsecurve/io.hpp"

namespace sparsecurve::io {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kFormatName = "sparsecurve-model";

Json vector_to_json(const Eigen::VectorXd& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd json_to_vector(const Json& arr, const char* what) {
  if (!arr.is_array()) throw UsageError(std::string("model: '") + what + "' must be an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) {
      throw UsageError(std::string("model: '") + what + "' has a non-numeric entry");
    }
    v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
  }
  return v;
}

// JSON has no infinities; non-finite report values are stored as null.
Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double number_from(const Json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

Json report_to_json(const FitReport& r) {
  Json j;
  j["qfe"] = number_or_null(r.qfe);
  j["num_knots"] = r.num_knots;
  j["knots_per_block"] = r.knots_per_block;
  j["knot_eps"] = r.knot_eps;
  j["objective"] = number_or_null(r.objective);
  j["data_term"] = number_or_null(r.data_term);
  Json pens = Json::array();
  for (double p : r.penalty_terms) pens.push_back(number_or_null(p));
  j["penalty_terms"] = pens;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["r_primal"] = number_or_null(r.r_primal);
  j["r_dual"] = number_or_null(r.r_dual);
  Json knots = Json::array();
  for (const Knot& k : r.knots) {
    Json kj;
    kj["block"] = k.block;
    kj["t"] = k.location;
    kj["ax"] = k.ax;
    kj["ay"] = k.ay;
    knots.push_back(kj);
  }
  j["knots"] = knots;
  return j;
}

FitReport report_from_json(const Json& j) {
  FitReport r;
  r.qfe = number_from(j.at("qfe"));
  r.num_knots = j.at("num_knots").get<int>();
  r.knots_per_block = j.at("knots_per_block").get<std::vector<int>>();
  r.knot_eps = j.at("knot_eps").get<double>();
  r.objective = number_from(j.at("objective"));
  r.data_term = number_from(j.at("data_term"));
  for (const auto& p : j.at("penalty_terms")) r.penalty_terms.push_back(number_from(p));
  r.iterations = j.at("iterations").get<int>();
  r.converged = j.at("converged").get<bool>();
  r.r_primal = number_from(j.at("r_primal"));
  r.r_dual = number_from(j.at("r_dual"));
  for (const auto& kj : j.at("knots")) {
    Knot k;
    k.block = kj.at("block").get<int>();
    k.location = kj.at("t").get<double>();
    k.ax = kj.at("ax").get<double>();
    k.ay = kj.at("ay").get<double>();
    r.knots.push_back(k);
  }
  return r;
}

SplineBlock block_from_json(const Json& b) {
  const Degree degree(b.at("degree").get<int>());
  const int period = b.at("period").get<int>();
  const int n = b.at("num_coeffs").get<int>();
  SplineSpace space(degree, period, n);
  Eigen::VectorXd cx = json_to_vector(b.at("cx"), "cx");
  Eigen::VectorXd cy = json_to_vector(b.at("cy"), "cy");
  if (cx.size() != n || cy.size() != n) {
    throw UsageError("model: coefficient arrays must have num_coeffs entries");
  }
  return SplineBlock{space, CoefficientPair(std::move(cx), std::move(cy))};
}

}  // namespace

std::string regularizer_name(Regularizer r) {
  return r == Regularizer::GroupL2 ? "ritv" : "tvl1";
}

Regularizer parse_regularizer(const std::string& name) {
  if (name == "ritv") return Regularizer::GroupL2;
  if (name == "tvl1") return Regularizer::SeparableL1;
  throw UsageError("unknown regularizer '" + name + "' (expected ritv or tvl1)");
}

std::string serialize_model(const ModelDocument& doc) {
  Json j;
  j["format"] = kFormatName;
  j["version"] = kModelFormatVersion;
  j["kind"] = doc.model.kind() == ModelKind::Single ? "single" : "hybrid";
  Json blocks = Json::array();
  for (const SplineBlock& b : doc.model.blocks()) {
    Json bj;
    bj["degree"] = b.space.degree().value();
    bj["period"] = b.space.period();
    bj["num_coeffs"] = b.space.num_coeffs();
    bj["cx"] = vector_to_json(b.coeffs.cx);
    bj["cy"] = vector_to_json(b.coeffs.cy);
    blocks.push_back(bj);
  }
  j["blocks"] = blocks;
  if (doc.fit) {
    const FitMetadata& f = *doc.fit;
    Json fj;
    fj["lambdas"] = f.lambdas;
    fj["regularizer"] = regularizer_name(f.regularizer);
    Json aj;
    aj["rho"] = f.admm.rho;
    aj["max_iters"] = f.admm.max_iters;
    aj["tol_abs"] = f.admm.tol_abs;
    aj["tol_rel"] = f.admm.tol_rel;
    fj["admm"] = aj;
    fj["report"] = report_to_json(f.report);
    j["fit"] = fj;
  }
  return j.dump(2) + "\n";
}

ModelDocument parse_model(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw UsageError(std::string("model: invalid JSON: ") + e.what());
  }
  try {
    if (j.value("format", std::string()) != kFormatName) {
      throw UsageError("model: not a sparsecurve model document");
    }
    const int version = j.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw UsageError("model: unsupported format version " + std::to_string(version));
    }
    const std::string kind = j.at("kind").get<std::string>();
    const Json& blocks = j.at("blocks");
    std::optional<CurveModel> model;
    if (kind == "single") {
      if (blocks.size() != 1) throw UsageError("model: single model needs exactly one block");
      SplineBlock b = block_from_json(blocks[0]);
      model = CurveModel::single(b.space, std::move(b.coeffs));
    } else if (kind == "hybrid") {
      if (blocks.size() != 2) throw UsageError("model: hybrid model needs exactly two blocks");
      model = CurveModel::hybrid(block_from_json(blocks[0]), block_from_json(blocks[1]));
    } else {
      throw UsageError("model: unknown kind '" + kind + "'");
    }
    ModelDocument doc{std::move(*model), std::nullopt};
    if (j.contains("fit")) {
      const Json& fj = j.at("fit");
      FitMetadata f;
      f.lambdas = fj.at("lambdas").get<std::vector<double>>();
      f.regularizer = parse_regularizer(fj.at("regularizer").get<std::string>());
      const Json& aj = fj.at("admm");
      f.admm.rho = aj.at("rho").get<double>();
      f.admm.max_iters = aj.at("max_iters").get<int>();
      f.admm.tol_abs = aj.at("tol_abs").get<double>();
      f.admm.tol_rel = aj.at("tol_rel").get<double>();
      f.admm.regularizer = f.regularizer;
      f.report = report_from_json(fj.at("report"));
      doc.fit = std::move(f);
    }
    return doc;
  } catch (const Json::exception& e) {
    throw UsageError(std::string("model: ") + e.what());
  } catch (const ConfigError& e) {
    throw UsageError(std::string("model: ") + e.what());
  }
}

ModelDocument read_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open model file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_model(ss.str());
  } catch (const UsageError& e) {
    throw UsageError(path.string() + ": " + e.what());
  }
}

}  // namespace sparsecurve::io
