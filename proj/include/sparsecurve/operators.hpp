#pragma once

// Discrete operators of the spline fitting problem: the sampling matrix H,
// the circulant regularization matrix L, the hybrid constraint row, and the
// mixed norms applied to L c.

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "sparsecurve/bspline.hpp"

namespace sparsecurve {

/// H in R^{M x N}, [H]_{m,n} = phi_M(m - n h). Stored row-compressed; each row
/// holds only the shifts whose support reaches the integer sample m.
class SystemMatrix {
 public:
  explicit SystemMatrix(const SplineSpace& space);

  [[nodiscard]] const SplineSpace& space() const noexcept { return space_; }
  [[nodiscard]] int rows() const noexcept { return space_.period(); }
  [[nodiscard]] int cols() const noexcept { return space_.num_coeffs(); }

  [[nodiscard]] double operator()(int m, int n) const { return entries_.coeff(m, n); }
  [[nodiscard]] const Eigen::SparseMatrix<double, Eigen::RowMajor>& sparse() const noexcept {
    return entries_;
  }
  [[nodiscard]] Eigen::MatrixXd dense() const { return Eigen::MatrixXd(entries_); }

  /// H c for one or more coefficient columns.
  [[nodiscard]] Eigen::MatrixXd apply(const Eigen::Ref<const Eigen::MatrixXd>& c) const {
    return entries_ * c;
  }
  [[nodiscard]] Eigen::MatrixXd apply_transpose(const Eigen::Ref<const Eigen::MatrixXd>& r) const {
    return entries_.transpose() * r;
  }

 private:
  SplineSpace space_;
  Eigen::SparseMatrix<double, Eigen::RowMajor> entries_;
};

/// L in R^{N x N}, [L]_{m,n} = h^{-alpha} d_alpha[(m - n) mod N]. Circulant;
/// only the filter taps are stored.
class RegMatrix {
 public:
  /// Throws ConfigError when N < alpha + 2 (the filter would wrap onto itself).
  explicit RegMatrix(const SplineSpace& space);

  [[nodiscard]] const SplineSpace& space() const noexcept { return space_; }
  [[nodiscard]] int size() const noexcept { return space_.num_coeffs(); }
  /// 1 / h^alpha.
  [[nodiscard]] double scale() const noexcept { return scale_; }
  [[nodiscard]] const FiniteDiffFilter& filter() const noexcept { return filter_; }

  [[nodiscard]] double operator()(int m, int n) const;
  [[nodiscard]] Eigen::MatrixXd dense() const;

  /// (L c)[m] = h^{-alpha} sum_k d[k] c[(m - k) mod N], column by column.
  [[nodiscard]] Eigen::MatrixXd apply(const Eigen::Ref<const Eigen::MatrixXd>& c) const;
  [[nodiscard]] Eigen::MatrixXd apply_transpose(const Eigen::Ref<const Eigen::MatrixXd>& w) const;

 private:
  SplineSpace space_;
  FiniteDiffFilter filter_;
  double scale_;
};

[[nodiscard]] SystemMatrix build_system_matrix(const SplineSpace& space);
[[nodiscard]] RegMatrix build_reg_matrix(const SplineSpace& space);

/// Coefficients (c_x, c_y) of one spline curve component; both of length N.
struct CoefficientPair {
  Eigen::VectorXd cx;
  Eigen::VectorXd cy;

  CoefficientPair() = default;
  /// Throws UsageError on length mismatch.
  CoefficientPair(Eigen::VectorXd x, Eigen::VectorXd y);

  [[nodiscard]] int size() const noexcept { return static_cast<int>(cx.size()); }
  /// N x 2 block [c_x c_y].
  [[nodiscard]] Eigen::MatrixX2d as_block() const;
  [[nodiscard]] static CoefficientPair from_block(const Eigen::Ref<const Eigen::MatrixX2d>& block);
};

/// sum_n sqrt(f1[n]^2 + f2[n]^2). Throws UsageError on length mismatch.
[[nodiscard]] double group_l1l2_norm(const Eigen::Ref<const Eigen::VectorXd>& f1,
                                     const Eigen::Ref<const Eigen::VectorXd>& f2);
/// sum_n |f1[n]| + |f2[n]|. Throws UsageError on length mismatch.
[[nodiscard]] double separable_l1_norm(const Eigen::Ref<const Eigen::VectorXd>& f1,
                                       const Eigen::Ref<const Eigen::VectorXd>& f2);

/// Row vectors that evaluate x_1(0) and y_1(0) of the rougher hybrid
/// component: a[k] = b[(-k) mod N], so a . c = (c * b)[0].
struct ConstraintRows {
  Eigen::RowVectorXd x;
  Eigen::RowVectorXd y;
};

[[nodiscard]] ConstraintRows build_constraint_rows(const SplineSpace& space1);

}  // namespace sparsecurve
