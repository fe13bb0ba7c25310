// ipod: outlier detection and robust regression via iterative thresholding
// Copyright 2026 The ipod Authors
// Licensed under the Apache License, Version 2.0

#include "ipod/mest.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "ipod/errors.hpp"

namespace ipod {

IrlsFit irls_fit(const RegressionProblem& problem, const IrlsConfig& config,
                 const Eigen::VectorXd& beta0) {
  Eigen::VectorXd lambda_vec;
  if (config.leverage_weighting) {
    const QrModel model(problem);
    lambda_vec = (1.0 - model.leverages().array()).max(0.0).sqrt() * config.lambda;
  } else {
    lambda_vec = Eigen::VectorXd::Constant(problem.n(), config.lambda);
  }
  return irls_fit(problem, config, beta0, lambda_vec);
}

IrlsFit irls_fit(const RegressionProblem& problem, const IrlsConfig& config,
                 const Eigen::VectorXd& beta0, const Eigen::VectorXd& lambda_vec) {
  const Eigen::Index n = problem.n(), p = problem.p();
  if (beta0.size() != p) throw DimensionError("irls_fit: beta0 length mismatch");
  if (lambda_vec.size() != n) throw DimensionError("irls_fit: lambda_vec length mismatch");
  if (!(config.sigma > 0.0)) throw DomainError("irls_fit: sigma must be positive");
  if (!(config.epsilon > 0.0)) throw DomainError("irls_fit: epsilon must be positive");

  IrlsFit fit;
  fit.beta = beta0;
  // Track Theta(r; lambda sigma): the gamma-equivalent of the current fit,
  // so IRLS and the thresholding solvers share one convergence criterion.
  Eigen::VectorXd gamma_equiv =
      apply_vec(config.rule, problem.y - problem.X * beta0, lambda_vec * config.sigma);

  Eigen::MatrixXd xw(n, p);
  Eigen::VectorXd yw(n);
  for (int j = 0; j < config.max_iter; ++j) {
    const Eigen::VectorXd r = problem.y - problem.X * fit.beta;
    Eigen::VectorXd w(n);
    Eigen::Index n_positive = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double t = r[i] / config.sigma;
      w[i] = t == 0.0 ? 0.0 : psi(config.rule, t, lambda_vec[i]) / t;  // 0/0 = 0
      if (w[i] > 0.0) ++n_positive;
    }
    if (n_positive < p)
      throw SingularWlsError("only " + std::to_string(n_positive) + " positive weights for p = " +
                             std::to_string(p) + " columns");
    const Eigen::ArrayXd sw = w.array().sqrt();
    xw = sw.matrix().asDiagonal() * problem.X;
    yw = sw.matrix().asDiagonal() * problem.y;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(xw);
    Eigen::MatrixXd rmat = qr.matrixQR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
    double max_diag = 0.0;
    for (Eigen::Index k = 0; k < p; ++k) max_diag = std::max(max_diag, std::abs(rmat(k, k)));
    for (Eigen::Index k = 0; k < p; ++k)
      if (std::abs(rmat(k, k)) <= 1e-12 * max_diag)
        throw SingularWlsError("weighted design lost rank at column " + std::to_string(k));
    fit.beta = qr.solve(yw);
    fit.n_iter = j + 1;

    Eigen::VectorXd gamma_next =
        apply_vec(config.rule, problem.y - problem.X * fit.beta, lambda_vec * config.sigma);
    const double change = (gamma_next - gamma_equiv).lpNorm<Eigen::Infinity>();
    gamma_equiv = std::move(gamma_next);
    if (change < config.epsilon) {
      fit.converged = true;
      break;
    }
  }
  return fit;
}

HuberJointFit huber_joint_fit(const RegressionProblem& problem, double lambda, double c,
                              double epsilon, int max_iter) {
  const Eigen::Index n = problem.n();
  if (!(c > 0.0)) throw DomainError("huber_joint_fit: c must be positive");
  if (!(lambda > 0.0)) throw DomainError("huber_joint_fit: lambda must be positive");
  if (!(epsilon > 0.0)) throw DomainError("huber_joint_fit: epsilon must be positive");

  const QrModel model(problem);
  const ThresholdRule soft = ThresholdRule::soft();

  HuberJointFit fit;
  fit.beta = model.ols_coef(problem.y);
  fit.gamma = Eigen::VectorXd::Zero(n);
  {
    const double rss0 = (problem.y - problem.X * fit.beta).squaredNorm();
    fit.sigma = std::sqrt(std::max(rss0 / (c * static_cast<double>(n)), 1e-12));
  }

  for (int j = 0; j < max_iter; ++j) {
    const Eigen::VectorXd resid = problem.y - problem.X * fit.beta;
    Eigen::VectorXd gamma_next = apply_vec(soft, resid, lambda * fit.sigma);
    Eigen::VectorXd beta_next = model.ols_coef(problem.y - gamma_next);
    const double rss = (problem.y - problem.X * beta_next - gamma_next).squaredNorm();
    double sigma_next = std::sqrt(rss / (c * static_cast<double>(n)));
    if (!(sigma_next > 0.0)) throw ScaleCollapseError("joint scale vanished (saturated fit)");

    const double change = std::max({(gamma_next - fit.gamma).lpNorm<Eigen::Infinity>(),
                                    (beta_next - fit.beta).lpNorm<Eigen::Infinity>(),
                                    std::abs(sigma_next - fit.sigma)});
    fit.gamma = std::move(gamma_next);
    fit.beta = std::move(beta_next);
    fit.sigma = sigma_next;
    fit.n_iter = j + 1;
    if (change < epsilon) {
      fit.converged = true;
      break;
    }
  }

  // Stationarity identities of the equivalent concomitant-scale criterion.
  const Eigen::VectorXd resid = problem.y - problem.X * fit.beta;
  Eigen::VectorXd psi_scaled(n);
  double rss_small = 0.0;
  int n_large = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    psi_scaled[i] = psi(soft, resid[i] / fit.sigma, lambda);
    if (std::abs(resid[i]) > lambda * fit.sigma)
      ++n_large;
    else
      rss_small += resid[i] * resid[i];
  }
  fit.n_large_residuals = n_large;
  fit.kkt_beta_residual = (problem.X.transpose() * psi_scaled).lpNorm<Eigen::Infinity>();
  const double denom = c * static_cast<double>(n) - lambda * lambda * n_large;
  if (denom <= 0.0)
    throw ScaleCollapseError("c n - lambda^2 |O| = " + std::to_string(denom) +
                             " is not positive; no valid scale");
  fit.kkt_sigma_gap = std::abs(fit.sigma * fit.sigma - rss_small / denom);
  return fit;
}

}  // namespace ipod
