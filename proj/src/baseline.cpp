// Greedy knot removal with local re-fitting.
//
// Removing row n of L c merges the two polynomial pieces that meet at its
// knot. Only the coefficients that feed the rows between the neighbouring
// surviving knots are re-fitted (to the data they influence), with every
// previously removed row kept at zero and all other coefficients frozen. If
// the frozen neighbourhood makes the constraints unsatisfiable the window
// grows by one surviving knot on each side, up to a global re-fit.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/QR>

#include "sparsecurve/curvefit.hpp"
#include "sparsecurve/errors.hpp"

namespace sparsecurve {

namespace {

constexpr double kFeasibilityTol = 1e-9;

long wrap(long i, long n) { return ((i % n) + n) % n; }

// min ||A x - y||  s.t.  C x = e, column by column. Returns false when the
// constraints cannot be met.
bool constrained_lstsq(const Eigen::MatrixXd& a, const Eigen::MatrixX2d& y,
                       const Eigen::MatrixXd& c, const Eigen::MatrixX2d& e,
                       Eigen::MatrixX2d& x) {
  const Eigen::Index w = a.cols();
  Eigen::MatrixX2d x0 = Eigen::MatrixX2d::Zero(w, 2);
  Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(w, w);
  if (c.rows() > 0) {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(c);
    x0 = cod.solve(e);
    const double scale = std::max({1.0, e.cwiseAbs().maxCoeff(), (c * x0).cwiseAbs().maxCoeff()});
    if ((c * x0 - e).cwiseAbs().maxCoeff() > kFeasibilityTol * scale) return false;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(c.transpose());
    const Eigen::Index rank = qr.rank();
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(w, w);
    basis = q.rightCols(w - rank);
  }
  x = x0;
  if (basis.cols() > 0 && a.rows() > 0) {
    const Eigen::MatrixXd ab = a * basis;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(ab);
    x += basis * cod.solve(Eigen::MatrixX2d(y - a * x0));
  }
  return true;
}

class KnotRemover {
 public:
  KnotRemover(const ContourPoints& points, const SplineSpace& space)
      : n_(space.num_coeffs()),
        stencil_(space.degree().order()),
        h_(build_system_matrix(space).dense()),
        l_(build_reg_matrix(space).dense()),
        p_(points.size(), 2),
        active_(static_cast<std::size_t>(n_), true) {
    p_.col(0) = points.xs();
    p_.col(1) = points.ys();
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(h_);
    c_ = qr.solve(Eigen::MatrixXd(p_));
  }

  [[nodiscard]] const Eigen::MatrixX2d& coeffs() const noexcept { return c_; }
  [[nodiscard]] int active_count() const {
    return static_cast<int>(std::count(active_.begin(), active_.end(), true));
  }

  void remove_weakest() {
    const Eigen::VectorXd norms = (l_ * c_).rowwise().norm();
    long victim = -1;
    for (long r = 0; r < n_; ++r) {
      if (active_[r] && (victim < 0 || norms[r] < norms[victim])) victim = r;
    }
    active_[victim] = false;

    long lo = victim;
    long hi = victim;
    long widened = 0;
    for (;;) {
      lo = previous_active(lo);
      hi = next_active(hi);
      ++widened;
      // Rows lo..hi read coefficients lo - (alpha + 1) .. hi.
      const long length = wrap(hi - lo, n_) + stencil_ + 1;
      if (lo < 0 || lo == hi || 2 * widened >= active_count() || length >= n_) {
        refit(all_indices());
        return;
      }
      if (refit(window(lo - stencil_, length))) return;
    }
  }

 private:
  [[nodiscard]] long previous_active(long r) const {
    for (long k = 1; k <= n_; ++k) {
      if (active_[wrap(r - k, n_)]) return wrap(r - k, n_);
    }
    return -1;
  }
  [[nodiscard]] long next_active(long r) const {
    for (long k = 1; k <= n_; ++k) {
      if (active_[wrap(r + k, n_)]) return wrap(r + k, n_);
    }
    return -1;
  }

  [[nodiscard]] std::vector<long> all_indices() const {
    std::vector<long> idx(static_cast<std::size_t>(n_));
    for (long i = 0; i < n_; ++i) idx[i] = i;
    return idx;
  }
  [[nodiscard]] std::vector<long> window(long start, long length) const {
    std::vector<long> idx;
    for (long i = 0; i < length; ++i) idx.push_back(wrap(start + i, n_));
    return idx;
  }

  // Re-fit the coefficients in `free_idx`; false when infeasible.
  bool refit(const std::vector<long>& free_idx) {
    std::vector<bool> is_free(static_cast<std::size_t>(n_), false);
    for (long i : free_idx) is_free[i] = true;
    const auto w = static_cast<Eigen::Index>(free_idx.size());

    auto split = [&](const Eigen::MatrixXd& rows, const std::vector<long>& which,
                     Eigen::MatrixXd& free_part, Eigen::MatrixX2d& frozen_part) {
      free_part.resize(static_cast<Eigen::Index>(which.size()), w);
      frozen_part = Eigen::MatrixX2d::Zero(static_cast<Eigen::Index>(which.size()), 2);
      for (std::size_t r = 0; r < which.size(); ++r) {
        for (Eigen::Index j = 0; j < w; ++j) free_part(r, j) = rows(which[r], free_idx[j]);
        for (long col = 0; col < n_; ++col) {
          if (!is_free[col]) frozen_part.row(r) += rows(which[r], col) * c_.row(col);
        }
      }
    };
    auto touches_free = [&](const Eigen::MatrixXd& rows, long r) {
      for (long i : free_idx) {
        if (rows(r, i) != 0.0) return true;
      }
      return false;
    };

    std::vector<long> data_rows;
    for (long m = 0; m < h_.rows(); ++m) {
      if (touches_free(h_, m)) data_rows.push_back(m);
    }
    std::vector<long> zero_rows;
    for (long r = 0; r < n_; ++r) {
      if (!active_[r] && touches_free(l_, r)) zero_rows.push_back(r);
    }

    Eigen::MatrixXd a;
    Eigen::MatrixX2d a_frozen;
    split(h_, data_rows, a, a_frozen);
    Eigen::MatrixX2d target(static_cast<Eigen::Index>(data_rows.size()), 2);
    for (std::size_t r = 0; r < data_rows.size(); ++r) target.row(r) = p_.row(data_rows[r]);
    target -= a_frozen;

    Eigen::MatrixXd c;
    Eigen::MatrixX2d c_frozen;
    split(l_, zero_rows, c, c_frozen);

    Eigen::MatrixX2d x;
    if (!constrained_lstsq(a, target, c, -c_frozen, x)) return false;
    for (Eigen::Index j = 0; j < w; ++j) c_.row(free_idx[j]) = x.row(j);
    return true;
  }

  long n_;
  long stencil_;
  Eigen::MatrixXd h_;
  Eigen::MatrixXd l_;
  Eigen::MatrixX2d p_;
  Eigen::MatrixX2d c_;
  std::vector<bool> active_;
};

}  // namespace

FitResult knot_removal_baseline(const ContourPoints& points, Degree alpha, int target_k,
                                double knot_eps) {
  const int n = points.size();
  if (target_k < 0 || target_k > n) {
    throw UsageError("knot-removal target K = " + std::to_string(target_k) +
                     " is infeasible (must lie in [0, " + std::to_string(n) + "])");
  }
  const SplineSpace space(alpha, n, n);
  KnotRemover remover(points, space);
  auto current = [&] {
    return CurveModel::single(space, CoefficientPair::from_block(remover.coeffs()));
  };
  // K counts thresholded rows, which can be fewer than the active ones.
  int steps = 0;
  CurveModel model = current();
  KnotList knots = extract_knots(model, knot_eps);
  while (static_cast<int>(knots.size()) > target_k && remover.active_count() > 0) {
    remover.remove_weakest();
    ++steps;
    model = current();
    knots = extract_knots(model, knot_eps);
  }

  FitReport report;
  report.qfe = qfe(model, points);
  report.knots = std::move(knots);
  report.knot_eps = knot_eps;
  report.num_knots = static_cast<int>(report.knots.size());
  report.knots_per_block = {report.num_knots};
  report.data_term = report.qfe * n;
  report.objective = report.data_term;
  report.iterations = steps;
  report.converged = true;
  return {std::move(model), std::move(report)};
}

}  // namespace sparsecurve
