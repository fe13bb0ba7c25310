// ipod: outlier detection and robust regression via iterative thresholding
// Copyright 2026 The ipod Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <Eigen/Core>

#include "ipod/regress.hpp"
#include "ipod/threshold.hpp"

namespace ipod {

struct IrlsConfig {
  ThresholdRule rule = ThresholdRule::soft();  // defines psi = t - Theta(t)
  double lambda = 1.0;
  double sigma = 1.0;  // fixed scale (oracle value)
  double epsilon = 1e-4;
  int max_iter = 10000;
  bool leverage_weighting = true;  // psi(t; lambda sqrt(1 - h_i)) per case
};

struct IrlsFit {
  Eigen::VectorXd beta;
  int n_iter = 0;
  bool converged = false;
};

/// Iteratively reweighted least squares with weights w(t) = psi(t)/t
/// (0/0 = 0), refactorizing the weighted design every iteration.  The
/// convergence criterion matches the thresholding solvers: the change in
/// Theta applied to the residuals must fall below epsilon in sup norm.
/// Throws SingularWlsError when the weighted design loses rank (fewer than p
/// surviving rows under a redescending psi).
IrlsFit irls_fit(const RegressionProblem& problem, const IrlsConfig& config,
                 const Eigen::VectorXd& beta0);

/// As above with the per-case thresholds supplied (skips the leverage
/// computation; used when many fits share one design).
IrlsFit irls_fit(const RegressionProblem& problem, const IrlsConfig& config,
                 const Eigen::VectorXd& beta0, const Eigen::VectorXd& lambda_vec);

struct HuberJointFit {
  Eigen::VectorXd beta;
  Eigen::VectorXd gamma;
  double sigma = 1.0;
  int n_iter = 0;
  bool converged = false;
  double kkt_beta_residual = 0.0;   // ||X' psi((y - X beta)/sigma; lambda)||_inf
  double kkt_sigma_gap = 0.0;       // |sigma^2 - ||r_G||^2 / (cn - lambda^2 |O|)|
  int n_large_residuals = 0;        // |O| at convergence
};

/// Joint (beta, gamma, sigma) block descent for the concomitant-scale
/// criterion (1/(2 sigma)) ||y - X beta - gamma||^2 + (c n / 2) sigma +
/// lambda ||gamma||_1: soft-threshold steps for (beta, gamma) at threshold
/// lambda * sigma, then sigma^2 <- ||y - X beta - gamma||^2 / (c n).  At
/// convergence the two stationarity identities of Huber's criterion are
/// evaluated and returned.
HuberJointFit huber_joint_fit(const RegressionProblem& problem, double lambda, double c,
                              double epsilon, int max_iter = 20000);

}  // namespace ipod
