#include "sparsecurve/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "sparsecurve/errors.hpp"
#include "sparsecurve/io.hpp"

namespace sparsecurve::cli {

namespace {

namespace fs = std::filesystem;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void line(std::ostream& out, const std::string& label, const std::string& value) {
  out << label << ": " << value << '\n';
}

struct SolverFlags {
  double rho = 1.0;
  int max_iters = 10000;
  double tol_abs = 1e-6;
  double tol_rel = 1e-4;
  std::string reg = "ritv";
  double knot_eps = kDefaultKnotEps;

  void attach(CLI::App* cmd, bool with_reg) {
    cmd->add_option("--rho", rho, "ADMM penalty parameter")->capture_default_str();
    cmd->add_option("--max-iters", max_iters, "ADMM iteration cap")->capture_default_str();
    cmd->add_option("--tol-abs", tol_abs, "absolute stopping tolerance")->capture_default_str();
    cmd->add_option("--tol-rel", tol_rel, "relative stopping tolerance")->capture_default_str();
    cmd->add_option("--knot-eps", knot_eps, "relative knot threshold")->capture_default_str();
    if (with_reg) {
      cmd->add_option("--reg", reg, "regularizer: ritv or tvl1")
          ->check(CLI::IsMember({"ritv", "tvl1"}))
          ->capture_default_str();
    }
  }

  [[nodiscard]] FitOptions options() const {
    FitOptions o;
    o.admm.rho = rho;
    o.admm.max_iters = max_iters;
    o.admm.tol_abs = tol_abs;
    o.admm.tol_rel = tol_rel;
    o.admm.regularizer = io::parse_regularizer(reg);
    o.admm.validate();
    if (!(knot_eps > 0.0) || !(knot_eps < 1.0)) throw UsageError("--knot-eps must be in (0, 1)");
    o.knot_eps = knot_eps;
    return o;
  }
};

struct RenderFlags {
  int samples_per_unit = 8;
  bool show_knots = true;

  void attach(CLI::App* cmd) {
    cmd->add_option("--samples-per-unit", samples_per_unit, "curve samples per parameter unit")
        ->capture_default_str();
    cmd->add_flag("--show-knots,!--no-show-knots", show_knots, "draw knot markers");
  }

  [[nodiscard]] io::SvgOptions options() const {
    if (samples_per_unit < 1) throw UsageError("--samples-per-unit must be >= 1");
    return io::SvgOptions{samples_per_unit, show_knots};
  }
};

io::ModelDocument make_document(const FitResult& fit, std::vector<double> lambdas,
                                const FitOptions& opts) {
  io::FitMetadata meta;
  meta.lambdas = std::move(lambdas);
  meta.regularizer = opts.admm.regularizer;
  meta.admm = opts.admm;
  meta.report = fit.report;
  return io::ModelDocument{fit.model, std::move(meta)};
}

void write_outputs(const io::ModelDocument& doc, const std::string& model_path,
                   const std::string& svg_path, const io::SvgOptions& svg_opts) {
  // Render first so a failure leaves neither file behind.
  std::string svg;
  if (!svg_path.empty()) svg = io::render_svg(doc.model, doc.fit->report.knots, svg_opts);
  if (!model_path.empty()) io::write_file_atomic(model_path, io::serialize_model(doc));
  if (!svg_path.empty()) io::write_file_atomic(svg_path, svg);
}

void print_report(std::ostream& out, const FitReport& r) {
  line(out, "QFE", num(r.qfe));
  line(out, "K", std::to_string(r.num_knots));
  line(out, "objective", num(r.objective));
  line(out, "data term", num(r.data_term));
  line(out, "iterations", std::to_string(r.iterations));
  line(out, "converged", r.converged ? "true" : "false");
  line(out, "primal residual", num(r.r_primal));
  line(out, "dual residual", num(r.r_dual));
}

void prepare_output_dir(const std::string& dir) {
  if (dir.empty()) return;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw UsageError("cannot create output directory " + dir);
}

std::string row_path(const std::string& dir, const std::string& stem, std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%03zu", index);
  return (fs::path(dir) / (stem + "_" + buf + ".json")).string();
}

double parse_snr(const std::string& text) {
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "inf" || t == "+inf" || t == "infinity" || t == "+infinity") {
    return std::numeric_limits<double>::infinity();
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw UsageError("--snr-db: cannot parse '" + text + "'");
  }
  if (used != t.size() || std::isnan(v) || v == -std::numeric_limits<double>::infinity()) {
    throw UsageError("--snr-db: invalid value '" + text + "'");
  }
  return v;
}

// Values this far below the data scale are indistinguishable from an exact fit.
double qfe_ratio(double baseline, double ritv, double scale) {
  const double floor = 1e-12 * scale;
  const double b = baseline < floor ? 0.0 : baseline;
  const double r = ritv < floor ? 0.0 : ritv;
  if (b == 0.0 && r == 0.0) return 1.0;
  return b / r;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse spline curve fitting with rotation-invariant total variation"};
  app.name("sparsecurve");
  app.require_subcommand(1);

  std::string input;
  std::string output;
  std::string svg;
  int degree = 3;
  int degree1 = 1;
  int degree2 = 3;
  int num_coeffs = 0;
  double lambda = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  std::vector<double> lambdas;
  std::vector<double> thetas;
  std::vector<std::string> snrs;
  std::uint64_t seed = 0;
  SolverFlags solver;
  RenderFlags render;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--input", input, "contour point CSV (x,y rows)")->required();
    cmd->add_option("--num-coeffs", num_coeffs, "number of spline coefficients N (default M)");
  };

  auto* fit = app.add_subcommand("fit", "fit one spline curve");
  add_common(fit);
  fit->add_option("--degree", degree, "spline degree 0..3")->capture_default_str();
  fit->add_option("--lambda", lambda, "regularization weight")->required();
  fit->add_option("--output", output, "model document to write");
  fit->add_option("--svg", svg, "SVG rendering to write");
  solver.attach(fit, true);
  render.attach(fit);

  auto* hybrid = app.add_subcommand("fit-hybrid", "fit a sum of two splines of different degree");
  add_common(hybrid);
  hybrid->add_option("--degree1", degree1, "degree of the rough component")->capture_default_str();
  hybrid->add_option("--degree2", degree2, "degree of the smooth component")
      ->capture_default_str();
  hybrid->add_option("--lambda1", lambda1, "weight on the rough component")->required();
  hybrid->add_option("--lambda2", lambda2, "weight on the smooth component")->required();
  hybrid->add_option("--output", output, "model document to write");
  hybrid->add_option("--svg", svg, "SVG rendering to write");
  solver.attach(hybrid, false);
  render.attach(hybrid);

  auto* rend = app.add_subcommand("render", "render a model document as SVG");
  rend->add_option("--input", input, "model document")->required();
  rend->add_option("--svg", svg, "SVG file to write")->required();
  rend->add_option("--knot-eps", solver.knot_eps,
                   "knot threshold (default: the one stored in the model)");
  render.attach(rend);

  auto* rot = app.add_subcommand("experiment-rotate", "fit rotated copies of the contour");
  add_common(rot);
  rot->add_option("--degree", degree, "spline degree 0..3")->capture_default_str();
  rot->add_option("--lambda", lambda, "regularization weight")->required();
  rot->add_option("--theta", thetas, "rotation angle in degrees (repeatable)")->required();
  rot->add_option("--output", output, "directory for per-row model documents");
  solver.attach(rot, true);

  auto* noise = app.add_subcommand("experiment-noise", "fit noisy copies over an SNR x lambda grid");
  add_common(noise);
  noise->add_option("--degree", degree, "spline degree 0..3")->capture_default_str();
  noise->add_option("--lambda", lambdas, "regularization weight (repeatable)")->required();
  noise->add_option("--snr-db", snrs, "signal-to-noise ratio in dB, or inf (repeatable)")
      ->required();
  noise->add_option("--seed", seed, "noise seed")->capture_default_str();
  noise->add_option("--output", output, "directory for per-row model documents");
  solver.attach(noise, true);

  auto* cmp = app.add_subcommand("compare-sparsity",
                                 "compare a RI-TV fit with greedy knot removal at equal K");
  add_common(cmp);
  cmp->add_option("--degree", degree, "spline degree 0..3")->capture_default_str();
  cmp->add_option("--lambda", lambda, "regularization weight")->required();
  cmp->add_option("--output", output, "directory for the two model documents");
  solver.attach(cmp, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    auto load = [&]() {
      ContourPoints pts = io::read_points(input);
      const int n = num_coeffs > 0 ? num_coeffs : static_cast<int>(pts.size());
      if (num_coeffs < 0) throw UsageError("--num-coeffs must be positive");
      return std::pair{std::move(pts), n};
    };

    if (fit->parsed()) {
      const auto [pts, n] = load();
      const FitOptions opts = solver.options();
      const auto svg_opts = render.options();
      const FitResult res = fit_single(pts, Degree(degree), n, lambda, opts);
      write_outputs(make_document(res, {lambda}, opts), output, svg, svg_opts);
      print_report(out, res.report);
      line(out, "penalty", num(res.report.penalty_terms.front()));
      return kExitOk;
    }

    if (hybrid->parsed()) {
      const auto [pts, n] = load();
      const FitOptions opts = solver.options();
      const auto svg_opts = render.options();
      const FitResult res =
          fit_hybrid(pts, Degree(degree1), Degree(degree2), n, lambda1, lambda2, opts);
      write_outputs(make_document(res, {lambda1, lambda2}, opts), output, svg, svg_opts);
      print_report(out, res.report);
      line(out, "K1", std::to_string(res.report.knots_per_block.at(0)));
      line(out, "K2", std::to_string(res.report.knots_per_block.at(1)));
      line(out, "penalty1", num(res.report.penalty_terms.at(0)));
      line(out, "penalty2", num(res.report.penalty_terms.at(1)));
      const Point2 pin = res.model.eval_block(0, 0.0);
      line(out, "|x1(0)|", num(std::abs(pin.x)));
      line(out, "|y1(0)|", num(std::abs(pin.y)));
      return kExitOk;
    }

    if (rend->parsed()) {
      const io::ModelDocument doc = io::read_model(input);
      double eps = doc.fit ? doc.fit->report.knot_eps : kDefaultKnotEps;
      if (rend->count("--knot-eps") > 0) eps = solver.knot_eps;
      const KnotList knots = extract_knots(doc.model, eps);
      io::write_file_atomic(svg, io::render_svg(doc.model, knots, render.options()));
      line(out, "K", std::to_string(knots.size()));
      return kExitOk;
    }

    if (rot->parsed()) {
      const auto [pts, n] = load();
      const FitOptions opts = solver.options();
      prepare_output_dir(output);
      const Point2 center = pts.centroid();
      out << "theta_deg QFE K\n";
      std::optional<int> first_k;
      bool k_constant = true;
      for (std::size_t i = 0; i < thetas.size(); ++i) {
        const double rad = thetas[i] * std::numbers::pi / 180.0;
        const ContourPoints rotated = rotate_points_about(pts, center, rad);
        const FitResult res = fit_single(rotated, Degree(degree), n, lambda, opts);
        if (!output.empty()) {
          io::write_file_atomic(row_path(output, "rotate", i),
                                io::serialize_model(make_document(res, {lambda}, opts)));
        }
        out << num(thetas[i]) << ' ' << num(res.report.qfe) << ' ' << res.report.num_knots << '\n';
        if (!first_k) first_k = res.report.num_knots;
        k_constant = k_constant && *first_k == res.report.num_knots;
      }
      if (opts.admm.regularizer == Regularizer::GroupL2) {
        line(out, "K constant", k_constant ? "yes" : "no");
      }
      return kExitOk;
    }

    if (noise->parsed()) {
      const auto [pts, n] = load();
      const FitOptions opts = solver.options();
      std::vector<double> snr_values;
      for (const auto& s : snrs) snr_values.push_back(parse_snr(s));
      prepare_output_dir(output);
      out << "snr_db lambda QFE K\n";
      std::size_t row = 0;
      for (double snr : snr_values) {
        const ContourPoints noisy = add_noise(pts, snr, seed);
        for (double lam : lambdas) {
          const FitResult res = fit_single(noisy, Degree(degree), n, lam, opts);
          if (!output.empty()) {
            io::write_file_atomic(row_path(output, "noise", row),
                                  io::serialize_model(make_document(res, {lam}, opts)));
          }
          out << num(snr) << ' ' << num(lam) << ' ' << num(res.report.qfe) << ' '
              << res.report.num_knots << '\n';
          ++row;
        }
      }
      return kExitOk;
    }

    if (cmp->parsed()) {
      const auto [pts, n] = load();
      FitOptions opts = solver.options();
      opts.admm.regularizer = Regularizer::GroupL2;
      prepare_output_dir(output);
      const FitResult ritv = fit_single(pts, Degree(degree), n, lambda, opts);
      const int k = ritv.report.num_knots;
      const FitResult base = knot_removal_baseline(pts, Degree(degree), k, opts.knot_eps);
      if (!output.empty()) {
        io::write_file_atomic((fs::path(output) / "ritv.json").string(),
                              io::serialize_model(make_document(ritv, {lambda}, opts)));
        io::write_file_atomic((fs::path(output) / "baseline.json").string(),
                              io::serialize_model(make_document(base, {}, opts)));
      }
      const bool match = base.report.num_knots == k;
      line(out, "K ritv", std::to_string(k));
      line(out, "K baseline", std::to_string(base.report.num_knots));
      line(out, "QFE ritv", num(ritv.report.qfe));
      line(out, "QFE baseline", num(base.report.qfe));
      line(out, "QFE ratio baseline/ritv",
           num(qfe_ratio(base.report.qfe, ritv.report.qfe, pts.centroid_variance())));
      line(out, "K match", match ? "yes" : "no");
      if (!match) {
        err << "error: baseline ended with " << base.report.num_knots << " knots, expected " << k
            << '\n';
        return kExitNumerical;
      }
      return kExitOk;
    }
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace sparsecurve::cli
