// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "sparsecurve/curvefit.hpp"
#include "sparsecurve/io.hpp"

using namespace sparsecurve;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

double deg(double d) { return d * std::numbers::pi / 180.0; }

// ---- 1 ----
Verdict table_fidelity() {
  double worst = 0.0;
  for (int a = 0; a <= 3; ++a) {
    for (int j = 0; j < 1000; ++j) {
      const double t = -2.5 + 5.0 * (j + 0.5) / 1000.0;
      worst = std::max(worst, std::abs(eval_bspline(Degree(a), t) - oracles::closed_form_bspline(a, t)));
    }
  }
  const std::array<std::vector<int>, 4> rows{
      {{1, -1}, {1, -2, 1}, {1, -3, 3, -1}, {1, -4, 6, -4, 1}}};
  bool filters = true;
  for (int a = 0; a <= 3; ++a) filters = filters && finite_diff_filter(Degree(a)).taps == rows[a];
  return {worst <= 1e-14 && filters,
          fmt("max |error| %.2e over 4x1000 points (tol 1e-14); filter rows %s", worst,
              filters ? "exact" : "differ")};
}

// ---- 2 ----
Verdict exact_discretization() {
  const std::array<std::pair<int, int>, 5> grids{{{16, 16}, {16, 8}, {12, 7}, {10, 20}, {24, 12}}};
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int a = i % 4;
    const auto [m, n] = grids[(i / 4) % grids.size()];
    const SplineSpace s(Degree(a), m, n);
    const auto c = fixtures::random_pair(n, 5000 + i);
    const Eigen::MatrixX2d lc = build_reg_matrix(s).apply(c.as_block());
    const double oracle = oracles::continuous_tv_l2(s, c.cx, c.cy);
    worst = std::max(worst, rel(group_l1l2_norm(lc.col(0), lc.col(1)), oracle));
  }
  return {worst <= 1e-10, fmt("max relative gap %.2e over 100 pairs (tol 1e-10)", worst)};
}

// ---- 3 ----
Verdict rotation_invariance() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int a = i % 4;
    const int n = 8 + i % 9;
    const SplineSpace s(Degree(a), n, n);
    const RegMatrix l = build_reg_matrix(s);
    const auto c = fixtures::random_pair(n, 7000 + i);
    const Eigen::MatrixX2d lc = l.apply(c.as_block());
    const double base = group_l1l2_norm(lc.col(0), lc.col(1));
    for (int k = 0; k < 20; ++k) {
      const double th = angle(rng);
      const Eigen::VectorXd rx = std::cos(th) * c.cx - std::sin(th) * c.cy;
      const Eigen::VectorXd ry = std::sin(th) * c.cx + std::cos(th) * c.cy;
      const Eigen::MatrixX2d r = l.apply(CoefficientPair(rx, ry).as_block());
      worst = std::max(worst, rel(group_l1l2_norm(r.col(0), r.col(1)), base));
    }
  }
  const SplineSpace s(Degree(1), 12, 12);
  const RegMatrix l = build_reg_matrix(s);
  Eigen::VectorXd e0 = Eigen::VectorXd::Zero(12);
  e0[0] = 1.0;
  const double q = std::numbers::pi / 4;
  const Eigen::MatrixX2d u = l.apply(CoefficientPair(e0, Eigen::VectorXd::Zero(12)).as_block());
  const Eigen::MatrixX2d v = l.apply(CoefficientPair(std::cos(q) * e0, std::sin(q) * e0).as_block());
  const double factor =
      separable_l1_norm(v.col(0), v.col(1)) / separable_l1_norm(u.col(0), u.col(1));
  const double factor_err = std::abs(factor - std::sqrt(2.0));
  return {worst <= 1e-10 && factor_err <= 1e-10,
          fmt("RI-TV max relative change %.2e over 100x20 (tol 1e-10); TV-l1 factor %.15f, "
              "|factor - sqrt 2| %.2e (tol 1e-10)",
              worst, factor, factor_err)};
}

AdmmConfig tight_admm() {
  AdmmConfig cfg;
  cfg.tol_abs = 1e-11;
  cfg.tol_rel = 1e-11;
  cfg.max_iters = 200000;
  return cfg;
}

Eigen::MatrixX2d block(const ContourPoints& p) {
  Eigen::MatrixX2d out(p.size(), 2);
  out << p.xs(), p.ys();
  return out;
}

// Every hybrid fit made by the acceptance run, for the pin check.
double g_worst_pin = 0.0;
int g_hybrid_fits = 0;

void record_pin(const CurveModel& model) {
  const Point2 r1 = model.eval_block(0, 0.0);
  g_worst_pin = std::max({g_worst_pin, std::abs(r1.x), std::abs(r1.y)});
  ++g_hybrid_fits;
}

// ---- 4 ----
Verdict oracle_equivalence() {
  const std::array<double, 3> lambdas{0.1, 1.0, 10.0};
  double worst_single = 0.0;
  for (int i = 0; i < 20; ++i) {
    const int a = i % 2 == 0 ? 1 : 3;
    const double lambda = lambdas[i % 3];
    const SplineSpace s(Degree(a), 8, 8);
    const auto pts = fixtures::random_points(8, 100 + i);
    const Eigen::MatrixXd h = oracles::dense_h(s);
    const Eigen::MatrixXd l = oracles::dense_l(s);
    const Eigen::MatrixX2d p = block(pts);
    const auto reg = Regularizer::GroupL2;
    const Eigen::MatrixX2d ref = oracles::proximal_gradient_single(h, l, p, lambda, reg, 50000);
    const double want = oracles::single_objective(h, l, ref, p, lambda, reg);
    const auto res = solve_single(build_system_matrix(s), build_reg_matrix(s), pts.xs(), pts.ys(),
                                  lambda, tight_admm());
    worst_single = std::max(worst_single, rel(res.objective, want));
  }
  double worst_hybrid = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double l1 = lambdas[i % 3];
    const double l2 = lambdas[(i / 3) % 3];
    const SplineSpace s1(Degree(1), 8, 8);
    const SplineSpace s2(Degree(3), 8, 8);
    const auto pts = fixtures::random_points(8, 200 + i);
    const Eigen::MatrixX2d p = block(pts);
    const Eigen::MatrixXd h1 = oracles::dense_h(s1);
    const Eigen::MatrixXd h2 = oracles::dense_h(s2);
    const Eigen::MatrixXd d1 = oracles::dense_l(s1);
    const Eigen::MatrixXd d2 = oracles::dense_l(s2);
    Eigen::RowVectorXd a(8);
    for (int k = 0; k < 8; ++k) a[k] = eval_periodized_basis(s1, k, 0.0);
    const auto ref =
        oracles::proximal_gradient_hybrid(h1, h2, d1, d2, a, p, l1, l2, Regularizer::GroupL2, 50000);
    const double want =
        oracles::hybrid_objective(h1, h2, d1, d2, ref, p, l1, l2, Regularizer::GroupL2);
    const auto res = solve_hybrid(build_system_matrix(s1), build_system_matrix(s2),
                                  build_reg_matrix(s1), build_reg_matrix(s2),
                                  build_constraint_rows(s1), pts.xs(), pts.ys(), l1, l2, tight_admm());
    worst_hybrid = std::max(worst_hybrid, rel(res.objective, want));
    record_pin(CurveModel::hybrid({s1, res.coefficients[0]}, {s2, res.coefficients[1]}));
  }
  return {worst_single <= 1e-6 && worst_hybrid <= 1e-6,
          fmt("max relative objective gap: 20 single %.2e, 10 hybrid %.2e (tol 1e-6)",
              worst_single, worst_hybrid)};
}

// ---- 5 ----
Verdict limit_behavior() {
  double worst_small = 0.0;
  for (int a : {1, 3}) {
    const SplineSpace s(Degree(a), 40, 40);
    const auto pts = fixtures::spline_contour(s, fixtures::loop_coefficients(s, 9));
    worst_small = std::max(worst_small, fit_single(pts, Degree(a), 40, 1e-8).report.qfe);
  }
  FitOptions big;
  big.admm.rho = 1e8;
  big.admm.tol_abs = 1e-13;
  big.admm.tol_rel = 1e-13;
  const SplineSpace s(Degree(3), 40, 40);
  double worst_big = 0.0;
  for (const auto& pts : {fixtures::reference_polygon(),
                          fixtures::spline_contour(s, fixtures::loop_coefficients(s, 9))}) {
    for (int a : {1, 3}) {
      const auto fit = fit_single(pts, Degree(a), pts.size(), 1e12, big);
      worst_big = std::max(worst_big, rel(fit.report.qfe, pts.centroid_variance()));
    }
  }
  return {worst_small <= 1e-8 && worst_big <= 1e-6,
          fmt("lambda 1e-8: max QFE %.2e (tol 1e-8); lambda 1e12 (rho 1e8, tol 1e-13): max "
              "relative gap to centroid variance %.2e (tol 1e-6)",
              worst_small, worst_big)};
}

// ---- 6 ----
FitOptions tight_fit(Regularizer reg) {
  FitOptions o;
  o.admm.regularizer = reg;
  o.admm.tol_abs = 1e-10;
  o.admm.tol_rel = 1e-10;
  o.admm.max_iters = 100000;
  return o;
}

Verdict rotation_equivariance() {
  const auto pts = fixtures::reference_polygon();
  const Point2 c = pts.centroid();
  const double lambda = 40.0;
  const std::array<double, 4> thetas{0.0, 10.0, 40.0, 90.0};
  const auto base = fit_single(pts, Degree(1), 36, lambda, tight_fit(Regularizer::GroupL2));
  bool same_k = true;
  double worst_qfe = 0.0;
  double worst_curve = 0.0;
  for (double th : thetas) {
    const auto rot = fit_single(rotate_points_about(pts, c, deg(th)), Degree(1), 36, lambda,
                                tight_fit(Regularizer::GroupL2));
    same_k = same_k && rot.report.num_knots == base.report.num_knots;
    worst_qfe = std::max(worst_qfe, rel(rot.report.qfe, base.report.qfe));
    for (const auto& s : sample_curve(base.model, 4)) {
      const Point2 q = rot.model.eval(s.t);
      const Point2 d{s.x - c.x, s.y - c.y};
      const Point2 e = rotate(d, deg(th));
      worst_curve = std::max({worst_curve, std::abs(q.x - (e.x + c.x)), std::abs(q.y - (e.y + c.y))});
    }
  }
  const auto l1_base = fit_single(pts, Degree(1), 36, lambda, tight_fit(Regularizer::SeparableL1));
  bool l1_differs = false;
  for (double th : thetas) {
    const auto rot = fit_single(rotate_points_about(pts, c, deg(th)), Degree(1), 36, lambda,
                                tight_fit(Regularizer::SeparableL1));
    if (rot.report.num_knots != l1_base.report.num_knots) l1_differs = true;
    for (std::size_t k = 0; !l1_differs && k < rot.report.knots.size(); ++k) {
      l1_differs = rot.report.knots[k].location != l1_base.report.knots[k].location;
    }
  }
  return {same_k && worst_qfe <= 1e-6 && worst_curve <= 1e-4 && l1_differs,
          fmt("RI-TV K=%d %s across 0/10/40/90 deg, max QFE gap %.2e (tol 1e-6), max curve gap "
              "%.2e (tol 1e-4); TV-l1 K or knots %s",
              base.report.num_knots, same_k ? "constant" : "varies", worst_qfe, worst_curve,
              l1_differs ? "differ" : "identical")};
}

// ---- 7 ----
ContourPoints centered_polygon24() {
  const auto pts = fixtures::reference_polygon();
  std::vector<Point2> sub;
  for (int m = 0; m < pts.size(); m += 3) sub.push_back(pts[m]);
  const Point2 c = ContourPoints(sub).centroid();
  for (auto& q : sub) q = {q.x - c.x, q.y - c.y};
  return ContourPoints(sub);
}

Verdict hybrid_constraint_and_reduction() {
  // Extra hybrid fits for the pin check: a polygon and a smooth loop.
  record_pin(fit_hybrid(fixtures::reference_polygon(), Degree(1), Degree(3), 72, 0.5, 0.5).model);
  const SplineSpace s(Degree(3), 40, 40);
  record_pin(fit_hybrid(fixtures::spline_contour(s, fixtures::loop_coefficients(s, 9)), Degree(1),
                        Degree(3), 40, 1.0, 0.1)
                 .model);

  const auto p = centered_polygon24();
  const SplineSpace s1(Degree(1), 24, 24);
  const SplineSpace s3(Degree(3), 24, 24);
  const auto h1 = build_system_matrix(s1);
  const auto h3 = build_system_matrix(s3);
  const auto l1 = build_reg_matrix(s1);
  const auto l3 = build_reg_matrix(s3);
  const auto a = build_constraint_rows(s1);
  AdmmConfig cfg = tight_admm();
  cfg.tol_abs = cfg.tol_rel = 1e-13;
  const auto smooth_off = solve_hybrid(h1, h3, l1, l3, a, p.xs(), p.ys(), 2.0, 1e12, cfg);
  const auto rough_off = solve_hybrid(h1, h3, l1, l3, a, p.xs(), p.ys(), 1e12, 2.0, cfg);
  record_pin(CurveModel::hybrid({s1, smooth_off.coefficients[0]}, {s3, smooth_off.coefficients[1]}));
  record_pin(CurveModel::hybrid({s1, rough_off.coefficients[0]}, {s3, rough_off.coefficients[1]}));
  const double gap2 =
      rel(smooth_off.objective, solve_single(h1, l1, p.xs(), p.ys(), 2.0, cfg).objective);
  const double gap1 =
      rel(rough_off.objective, solve_single(h3, l3, p.xs(), p.ys(), 2.0, cfg).objective);
  return {g_worst_pin <= 1e-8 && gap1 <= 1e-4 && gap2 <= 1e-4,
          fmt("max |r1(0)| %.2e over %d hybrid fits (tol 1e-8); reduction gaps: lambda2=1e12 vs "
              "alpha 1 %.2e, lambda1=1e12 vs alpha 3 %.2e (tol 1e-4)",
              g_worst_pin, g_hybrid_fits, gap2, gap1)};
}

// ---- 8 ----
Verdict sparsity_ordering() {
  const auto pts = add_noise(fixtures::square(16, 40), 47.28, 1);
  const auto ritv = fit_single(pts, Degree(1), pts.size(), 1.0);
  const auto base = knot_removal_baseline(pts, Degree(1), ritv.report.num_knots);
  const bool matched = base.report.num_knots == ritv.report.num_knots;
  return {matched && ritv.report.qfe <= base.report.qfe,
          fmt("noisy square (47.28 dB, seed 1), lambda 1: K %d vs %d, QFE RI-TV %.6g vs "
              "baseline %.6g",
              ritv.report.num_knots, base.report.num_knots, ritv.report.qfe, base.report.qfe)};
}

// ---- 9 ----
FitOptions ladder_options(double lambda) {
  FitOptions o;
  o.admm.rho = std::max(1.0, lambda / 10);
  o.admm.tol_abs = 1e-10;
  o.admm.tol_rel = 1e-9;
  o.admm.max_iters = 200000;
  return o;
}

Verdict stylization() {
  const auto pts = fixtures::rounded_rectangle(96, 48, 30, 8);
  bool ok = true;
  std::string detail;
  auto ladder = [&](const char* what, double base, const std::function<int(double)>& k_of) {
    const int k0 = k_of(base);
    const int k1 = k_of(10 * base);
    const int k2 = k_of(100 * base);
    ok = ok && k1 <= k0 + 1 && k2 < k0;
    detail += fmt("%s%s lambda %g: K %d, %d, %d", detail.empty() ? "" : "; ", what, base, k0, k1, k2);
  };
  ladder("alpha 1", 100, [&](double l) {
    return fit_single(pts, Degree(1), 48, l, ladder_options(l)).report.num_knots;
  });
  ladder("alpha 3", 1, [&](double l) {
    return fit_single(pts, Degree(3), 48, l, ladder_options(l)).report.num_knots;
  });
  ladder("hybrid 1/3", 1, [&](double l) {
    const auto fit = fit_hybrid(pts, Degree(1), Degree(3), 48, l, l, ladder_options(l));
    record_pin(fit.model);
    return fit.report.num_knots;
  });
  return {ok, detail};
}

// ---- 10 ----
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string capture(const std::string& command) {
  std::string out;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return "<popen failed>";
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return out + "\nstatus " + std::to_string(status) + "\n";
}

Verdict determinism() {
  const std::string cli = SPARSECURVE_CLI_PATH;
  const std::string data = SPARSECURVE_DATA_DIR;
  const fs::path root = fs::temp_directory_path() / "sparsecurve_acceptance";
  fs::remove_all(root);
  std::vector<std::string> outputs[2];
  std::vector<fs::path> dirs;
  for (int run = 0; run < 2; ++run) {
    const fs::path d = root / (run == 0 ? "a" : "b");
    fs::create_directories(d);
    dirs.push_back(d);
    const std::string poly = " --input " + data + "/polygon.csv";
    const std::vector<std::string> commands{
        "fit" + poly + " --degree 1 --lambda 2 --output " + (d / "fit.json").string() + " --svg " +
            (d / "fit.svg").string(),
        "fit-hybrid" + poly + " --lambda1 0.5 --lambda2 0.5 --output " +
            (d / "hybrid.json").string(),
        "experiment-rotate" + poly +
            " --degree 1 --lambda 2 --theta 0 --theta 10 --theta 40 --theta 90 --output " +
            (d / "rotate").string(),
        "experiment-noise" + poly +
            " --degree 1 --lambda 0.5 --lambda 5 --snr-db inf --snr-db 40 --snr-db 20 --seed 11 "
            "--output " + (d / "noise").string(),
        "compare-sparsity --input " + data + "/square.csv --degree 1 --lambda 0.1 --output " +
            (d / "compare").string(),
    };
    for (const auto& c : commands) outputs[run].push_back(capture(cli + " " + c + " 2>&1"));
  }
  int compared = 0;
  bool same = outputs[0] == outputs[1];
  compared += static_cast<int>(outputs[0].size());
  for (const auto& entry : fs::recursive_directory_iterator(dirs[0])) {
    if (!entry.is_regular_file()) continue;
    const fs::path other = dirs[1] / fs::relative(entry.path(), dirs[0]);
    same = same && fs::exists(other) && slurp(entry.path()) == slurp(other);
    ++compared;
  }
  bool all_ok = true;
  for (const auto& o : outputs[0]) all_ok = all_ok && o.ends_with("status 0\n");
  return {same && all_ok && compared > 5,
          fmt("%d outputs (5 reports/tables, %d files) %s across two runs; exit statuses %s",
              compared, compared - 5, same ? "byte-identical" : "DIFFER",
              all_ok ? "all 0" : "nonzero")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"B-spline closed forms", table_fidelity},
      {"Exact discretization", exact_discretization},
      {"Norm rotation invariance", rotation_invariance},
      {"Oracle equivalence", oracle_equivalence},
      {"Limit behavior", limit_behavior},
      {"Solution-level rotation equivariance", rotation_equivariance},
      {"Stylization trend", stylization},
      {"Sparsity ordering", sparsity_ordering},
      {"Hybrid constraint and reduction", hybrid_constraint_and_reduction},
      {"Determinism", determinism},
  };
  // Printed in criterion order; 9 runs before 7 so its hybrid fits join the pin check.
  const std::array<int, 10> number{1, 2, 3, 4, 5, 6, 9, 8, 7, 10};
  std::vector<std::string> lines(10);
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += v.pass ? 0 : 1;
    lines[number[i] - 1] = fmt("%s criterion %d (%s): ", v.pass ? "PASS" : "FAIL", number[i],
                               criteria[i].first.c_str()) +
                           v.detail;
  }
  for (const auto& l : lines) std::puts(l.c_str());
  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
