// ipod: outlier detection and robust regression via iterative thresholding
// Copyright 2026 The ipod Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "ipod/pilot.hpp"
#include "ipod/regress.hpp"
#include "ipod/threshold.hpp"

namespace ipod {

struct IpodConfig {
  ThresholdRule rule = ThresholdRule::hard();
  double lambda = 0.0;
  double epsilon = 1e-4;
  int max_iter = 10000;
  bool leverage_weighting = true;  // lambda_i = lambda * sqrt(1 - h_i)
};

/// Joint estimate of the coefficient vector and the per-case mean shifts.
/// gamma_i != 0 flags case i as an outlier.
struct IpodFit {
  Eigen::VectorXd beta;
  Eigen::VectorXd gamma;
  int n_iter = 0;
  bool converged = false;
  std::vector<double> objective_trace;
  std::vector<Eigen::Index> outliers;
};

/// Per-case thresholds for a configuration: lambda * sqrt(1 - h_i) when
/// leverage weighting is on, constant lambda otherwise.
Eigen::VectorXd effective_lambda(const IpodConfig& config, const Eigen::VectorXd& leverages);

/// 0.5 ||y - X beta - gamma||^2 + sum_i P(gamma_i; lambda_i) with the
/// canonical penalty of the rule.
double objective(const RegressionProblem& problem, const ThresholdRule& rule,
                 const Eigen::VectorXd& beta, const Eigen::VectorXd& gamma,
                 const Eigen::VectorXd& lambda_vec);

/// Full alternation: beta <- OLS(X, y - gamma), gamma <- Theta(y - X beta).
/// Stops when the sup-norm change in gamma drops below epsilon.  Hitting
/// max_iter is reported through `converged`, not an error.
IpodFit fit_full(const RegressionProblem& problem, const IpodConfig& config,
                 const PilotEstimate& pilot);

/// Simplified iteration gamma <- Theta(H gamma + (I-H) y); each step costs
/// O(np) through the cached factorization.  Same fixed points as fit_full.
IpodFit fit_simplified(const QrModel& model, const Eigen::VectorXd& y, const IpodConfig& config,
                       const Eigen::VectorXd& gamma0);

/// As above with explicit per-case thresholds (overrides config.lambda and
/// leverage weighting).
IpodFit fit_simplified(const QrModel& model, const Eigen::VectorXd& y, const IpodConfig& config,
                       const Eigen::VectorXd& gamma0, const Eigen::VectorXd& lambda_vec);

struct PathPoint {
  double lambda = 0.0;
  int df = 0;          // |{i : gamma_i != 0}|
  double rss = 0.0;    // ||(I-H)(y - gamma)||^2
  bool converged = false;
  int n_iter = 0;
  Eigen::VectorXd gamma;
};

struct SolutionPath {
  std::vector<PathPoint> points;  // lambda descending
  Eigen::Index n = 0;
  Eigen::Index p = 0;
  double lambda_max = 0.0;
  bool warm_started = true;
};

/// Largest standardized residual ||(I-H)y ./ sqrt(diag(I-H))||_inf: at or
/// above this lambda every mean shift is thresholded to zero.
double lambda_max(const QrModel& model, const Eigen::VectorXd& y);

/// Fits a descending lambda grid (geometric, from just above lambda_max down
/// to lambda_min), warm-starting each fit from the previous solution.
SolutionPath solution_path(const QrModel& model, const Eigen::VectorXd& y,
                           const IpodConfig& config_base, int n_grid, double lambda_min);

}  // namespace ipod
