#include "sparsecurve/operators.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "sparsecurve/errors.hpp"

namespace sparsecurve {

namespace {

long positive_mod(long a, long n) { return ((a % n) + n) % n; }

void require_same_length(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    throw UsageError(std::string(what) + ": length mismatch (" + std::to_string(a) + " vs " +
                     std::to_string(b) + ")");
  }
}

}  // namespace

SystemMatrix::SystemMatrix(const SplineSpace& space)
    : space_(space), entries_(space.period(), space.num_coeffs()) {
  const long big_n = space.num_coeffs();
  const double radius = support_radius(space.degree());
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(space.period()) * (space.degree().order() + 2));
  for (int m = 0; m < space.period(); ++m) {
    const double u = space.to_grid(m);
    const auto j_lo = static_cast<long>(std::ceil(u - radius)) - 1;
    const auto j_hi = static_cast<long>(std::floor(u + radius)) + 1;
    for (long j = j_lo; j <= j_hi; ++j) {
      const double w = eval_bspline(space.degree(), u - static_cast<double>(j));
      if (w != 0.0) {
        triplets.emplace_back(m, static_cast<int>(positive_mod(j, big_n)), w);
      }
    }
  }
  entries_.setFromTriplets(triplets.begin(), triplets.end());
  entries_.makeCompressed();
}

RegMatrix::RegMatrix(const SplineSpace& space)
    : space_(space),
      filter_(finite_diff_filter(space.degree())),
      scale_(1.0 / std::pow(space.step(), space.degree().value())) {
  if (space.num_coeffs() < space.degree().value() + 2) {
    throw ConfigError("regularization filter of length " +
                      std::to_string(filter_.taps.size()) + " wraps onto itself for N = " +
                      std::to_string(space.num_coeffs()));
  }
}

double RegMatrix::operator()(int m, int n) const {
  const auto k = positive_mod(m - n, size());
  if (k >= static_cast<long>(filter_.taps.size())) return 0.0;
  return scale_ * filter_.taps[k];
}

Eigen::MatrixXd RegMatrix::dense() const {
  Eigen::MatrixXd out(size(), size());
  for (int m = 0; m < size(); ++m) {
    for (int n = 0; n < size(); ++n) out(m, n) = (*this)(m, n);
  }
  return out;
}

Eigen::MatrixXd RegMatrix::apply(const Eigen::Ref<const Eigen::MatrixXd>& c) const {
  require_same_length(c.rows(), size(), "RegMatrix::apply");
  const long n = size();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, c.cols());
  for (long m = 0; m < n; ++m) {
    for (std::size_t k = 0; k < filter_.taps.size(); ++k) {
      out.row(m) += filter_.taps[k] * c.row(positive_mod(m - static_cast<long>(k), n));
    }
  }
  return out * scale_;
}

Eigen::MatrixXd RegMatrix::apply_transpose(const Eigen::Ref<const Eigen::MatrixXd>& w) const {
  require_same_length(w.rows(), size(), "RegMatrix::apply_transpose");
  const long n = size();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, w.cols());
  for (long col = 0; col < n; ++col) {
    for (std::size_t k = 0; k < filter_.taps.size(); ++k) {
      out.row(col) += filter_.taps[k] * w.row(positive_mod(col + static_cast<long>(k), n));
    }
  }
  return out * scale_;
}

SystemMatrix build_system_matrix(const SplineSpace& space) { return SystemMatrix(space); }

RegMatrix build_reg_matrix(const SplineSpace& space) { return RegMatrix(space); }

CoefficientPair::CoefficientPair(Eigen::VectorXd x, Eigen::VectorXd y)
    : cx(std::move(x)), cy(std::move(y)) {
  require_same_length(cx.size(), cy.size(), "CoefficientPair");
}

Eigen::MatrixX2d CoefficientPair::as_block() const {
  Eigen::MatrixX2d block(cx.size(), 2);
  block.col(0) = cx;
  block.col(1) = cy;
  return block;
}

CoefficientPair CoefficientPair::from_block(const Eigen::Ref<const Eigen::MatrixX2d>& block) {
  return CoefficientPair(block.col(0), block.col(1));
}

double group_l1l2_norm(const Eigen::Ref<const Eigen::VectorXd>& f1,
                       const Eigen::Ref<const Eigen::VectorXd>& f2) {
  require_same_length(f1.size(), f2.size(), "group_l1l2_norm");
  double acc = 0.0;
  for (Eigen::Index n = 0; n < f1.size(); ++n) acc += std::hypot(f1[n], f2[n]);
  return acc;
}

double separable_l1_norm(const Eigen::Ref<const Eigen::VectorXd>& f1,
                         const Eigen::Ref<const Eigen::VectorXd>& f2) {
  require_same_length(f1.size(), f2.size(), "separable_l1_norm");
  return f1.cwiseAbs().sum() + f2.cwiseAbs().sum();
}

ConstraintRows build_constraint_rows(const SplineSpace& space1) {
  const Eigen::VectorXd b = sampled_basis_sequence(space1);
  const long n = space1.num_coeffs();
  Eigen::RowVectorXd a(n);
  for (long k = 0; k < n; ++k) a[k] = b[positive_mod(-k, n)];
  return {a, a};
}

}  // namespace sparsecurve
