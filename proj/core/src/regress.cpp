// ipod: outlier detection and robust regression via iterative thresholding
// Copyright 2026 The ipod Authors
// Licensed under the Apache License, Version 2.0

#include "ipod/regress.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "ipod/errors.hpp"

namespace ipod {

RegressionProblem RegressionProblem::make(Eigen::MatrixXd X_raw, Eigen::VectorXd y, bool intercept) {
  if (X_raw.rows() != y.size())
    throw DimensionError("X has " + std::to_string(X_raw.rows()) + " rows, y has " +
                         std::to_string(y.size()));
  RegressionProblem prob;
  if (intercept) {
    prob.X.resize(X_raw.rows(), X_raw.cols() + 1);
    prob.X.col(0).setOnes();
    prob.X.rightCols(X_raw.cols()) = X_raw;
  } else {
    prob.X = std::move(X_raw);
  }
  prob.y = std::move(y);
  prob.intercept = intercept;
  if (prob.X.rows() <= prob.X.cols())
    throw DimensionError("need n > p after intercept augmentation (n=" +
                         std::to_string(prob.X.rows()) + ", p=" + std::to_string(prob.X.cols()) + ")");
  return prob;
}

QrModel::QrModel(const RegressionProblem& problem) { factor(problem.X); }

QrModel::QrModel(Eigen::MatrixXd X) { factor(std::move(X)); }

void QrModel::factor(Eigen::MatrixXd X) {
  const Eigen::Index n = X.rows(), p = X.cols();
  if (n <= p) throw DimensionError("QR factorization needs n > p");
  x_ = std::move(X);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(x_);
  r_ = qr.matrixQR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
  double max_diag = 0.0;
  for (Eigen::Index j = 0; j < p; ++j) max_diag = std::max(max_diag, std::abs(r_(j, j)));
  for (Eigen::Index j = 0; j < p; ++j) {
    if (std::abs(r_(j, j)) <= 1e-10 * max_diag)
      throw SingularDesignError("column " + std::to_string(j) +
                                " is (numerically) linearly dependent on earlier columns");
  }
  q_ = qr.householderQ() * Eigen::MatrixXd::Identity(n, p);
  leverage_ = q_.rowwise().squaredNorm();
}

Eigen::VectorXd QrModel::ols_coef(const Eigen::VectorXd& y) const {
  if (y.size() != n()) throw DimensionError("ols_coef: y length mismatch");
  return r_.triangularView<Eigen::Upper>().solve(q_.transpose() * y);
}

Eigen::VectorXd QrModel::hat_apply(const Eigen::VectorXd& v) const {
  if (v.size() != n()) throw DimensionError("hat_apply: vector length mismatch");
  return q_ * (q_.transpose() * v);
}

Eigen::VectorXd QrModel::annihilate(const Eigen::VectorXd& v) const { return v - hat_apply(v); }

const Eigen::MatrixXd& QrModel::complement_basis() const {
  std::call_once(complement_->once, [this]() {
    const Eigen::Index nn = n(), pp = p();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(x_);
    Eigen::MatrixXd full = qr.householderQ() * Eigen::MatrixXd::Identity(nn, nn);
    complement_->basis = full.rightCols(nn - pp);
  });
  return complement_->basis;
}

std::pair<Eigen::MatrixXd, Eigen::VectorXd> QrModel::reduced_model(const Eigen::VectorXd& y) const {
  if (y.size() != n()) throw DimensionError("reduced_model: y length mismatch");
  const Eigen::MatrixXd& uc = complement_basis();
  return {uc.transpose(), uc.transpose() * y};
}

QrModel factor(const RegressionProblem& problem) { return QrModel(problem); }

double studentized_residual(const RegressionProblem& problem, Eigen::Index i) {
  const Eigen::Index n = problem.n(), p = problem.p();
  if (i < 0 || i >= n) throw DomainError("studentized_residual: index out of range");
  if (n - 1 <= p) throw DimensionError("studentized_residual needs n - 1 > p");

  Eigen::MatrixXd x_loo(n - 1, p);
  Eigen::VectorXd y_loo(n - 1);
  Eigen::Index row = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (k == i) continue;
    x_loo.row(row) = problem.X.row(k);
    y_loo[row] = problem.y[k];
    ++row;
  }

  QrModel loo(std::move(x_loo));
  const Eigen::VectorXd beta = loo.ols_coef(y_loo);
  const double rss = (y_loo - loo.X() * beta).squaredNorm();
  const double sigma2 = rss / static_cast<double>(n - 1 - p);
  if (sigma2 <= 0.0) throw DegenerateScaleError("leave-one-out fit is exact; scale is zero");

  // x_i' (X_(i)' X_(i))^{-1} x_i = || R^{-T} x_i ||^2
  const Eigen::VectorXd z =
      loo.R().triangularView<Eigen::Upper>().transpose().solve(problem.X.row(i).transpose());
  const double spread = 1.0 + z.squaredNorm();
  const double pred_resid = problem.y[i] - problem.X.row(i) * beta;
  return pred_resid / std::sqrt(sigma2 * spread);
}

}  // namespace ipod
