// ipod: outlier detection and robust regression via iterative thresholding
// Copyright 2026 The ipod Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <Eigen/Core>
#include <memory>
#include <mutex>
#include <utility>

namespace ipod {

/// Design matrix plus response.  When `intercept` is requested the stored X
/// already carries a leading ones column.
struct RegressionProblem {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  bool intercept = true;

  static RegressionProblem make(Eigen::MatrixXd X_raw, Eigen::VectorXd y, bool intercept = true);

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index p() const { return X.cols(); }
};

/// Cached thin QR factorization of the design with leverages and, on demand,
/// an orthonormal basis of the residual space.  Immutable after construction;
/// the lazy complement basis is guarded so concurrent reads stay safe.
class QrModel {
 public:
  explicit QrModel(const RegressionProblem& problem);
  QrModel(Eigen::MatrixXd X);  // factor a bare design

  Eigen::Index n() const { return q_.rows(); }
  Eigen::Index p() const { return q_.cols(); }

  const Eigen::MatrixXd& X() const { return x_; }
  const Eigen::MatrixXd& Q() const { return q_; }
  const Eigen::MatrixXd& R() const { return r_; }
  const Eigen::VectorXd& leverages() const { return leverage_; }

  /// OLS coefficients R^{-1} Q^T y.
  Eigen::VectorXd ols_coef(const Eigen::VectorXd& y) const;

  /// H v = Q (Q^T v) without forming the hat matrix.
  Eigen::VectorXd hat_apply(const Eigen::VectorXd& v) const;

  /// (I - H) v.
  Eigen::VectorXd annihilate(const Eigen::VectorXd& v) const;

  /// Orthonormal complement of col(X): n x (n-p), computed lazily.
  const Eigen::MatrixXd& complement_basis() const;

  /// Reduced model (A, y_tilde) with A = Uc^T, y_tilde = A y.
  std::pair<Eigen::MatrixXd, Eigen::VectorXd> reduced_model(const Eigen::VectorXd& y) const;

 private:
  void factor(Eigen::MatrixXd X);

  // Lazy cell behind a shared_ptr so the model stays movable.
  struct LazyComplement {
    std::once_flag once;
    Eigen::MatrixXd basis;
  };

  Eigen::MatrixXd x_;
  Eigen::MatrixXd q_;
  Eigen::MatrixXd r_;
  Eigen::VectorXd leverage_;
  std::shared_ptr<LazyComplement> complement_ = std::make_shared<LazyComplement>();
};

QrModel factor(const RegressionProblem& problem);

/// Externally studentized residual: case i is deleted, the model refit on the
/// remaining n-1 cases, and the deletion residual scaled by its estimated
/// standard error.
double studentized_residual(const RegressionProblem& problem, Eigen::Index i);

}  // namespace ipod
