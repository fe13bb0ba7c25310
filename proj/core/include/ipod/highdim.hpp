// ipod: outlier detection and robust regression via iterative thresholding
// Copyright 2026 The ipod Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <Eigen/Core>
#include <vector>

#include "ipod/threshold.hpp"

namespace ipod {

/// Configuration of the augmented-design iteration on B = [X I].  k0 must
/// satisfy k0 >= sqrt(||X||_2^2 + 1) for the updates to descend; 0 means
/// "compute via spectral_bound".
struct HighDimConfig {
  ThresholdRule rule = ThresholdRule::hard_ridge(0.01);
  double lambda = 0.0;
  double alpha = 0.75;  // screening proportion
  double k0 = 0.0;
  double epsilon = 1e-4;
  int max_iter = 1000;
};

struct HighDimFit {
  Eigen::VectorXd beta;   // length p, sparse
  Eigen::VectorXd gamma;  // length n, sparse
  std::vector<Eigen::Index> support_beta;
  std::vector<Eigen::Index> support_gamma;
  int n_iter = 0;
  bool converged = false;
};

/// Safe step bound sqrt(||X||_2^2 + 1) with a 1% inflation.  Power iteration
/// estimates the spectral norm; if it stagnates the Frobenius norm (always an
/// upper bound) is used instead.
double spectral_bound(const Eigen::MatrixXd& X);

/// Simultaneous sparse-coefficient and sparse-shift iteration: both branches
/// of the stacked update are thresholded at level lambda / k0^2 with the
/// configured rule.  xi0 stacks (beta0, gamma0); pass an empty vector for a
/// zero start.
HighDimFit fit_largep(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                      const HighDimConfig& config, const Eigen::VectorXd& xi0 = Eigen::VectorXd());

struct ScreenResult {
  std::vector<Eigen::Index> predictors;  // surviving beta indices
  std::vector<Eigen::Index> shifts;      // surviving gamma indices
  int n_iter = 0;
  bool stabilized = false;
};

/// Proportional screening: every update keeps exactly ceil(alpha n) nonzero
/// components of (beta, gamma) combined, thresholding at the magnitude of the
/// (ceil(alpha n)+1)-th largest update argument; ties at the cut break toward
/// the lower index.  A component can leave and re-enter across iterations.
ScreenResult proportional_screen(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double alpha,
                                 const ThresholdRule& rule, int max_iter = 200);

struct EtaGridResult {
  double lambda_star = 0.0;
  double eta_star = 0.0;       // stage-1 ridge minimizer
  double eta_selected = 0.0;   // final grid choice
  double bic = 0.0;
  HighDimFit fit;              // beta indices refer to the full design
};

struct EtaGridOptions {
  int ridge_grid = 16;          // stage-1 eta ladder size, geometric on [1e-6, 1e2]
  double ridge_lo = 1e-6;
  double ridge_hi = 1e2;
  int lambda_grid = 60;         // stage-2 path length per eta
  double lambda_min_frac = 1e-3;
  double epsilon = 1e-6;
  int max_iter = 2000;
  int n_threads = 1;
};

/// Two-stage tuning on the screened predictors: a pure-ridge stage (lambda=0)
/// picks eta* by BIC*, then hard-ridge paths at {0.5, 0.05, 0.005} eta* pick
/// the final (lambda, eta) pair, again by BIC*.  BIC* here uses m = n and
/// counts nonzeros (plus the scale) as degrees of freedom; the ridge stage
/// uses the effective degrees of freedom sum d_i^2/(d_i^2 + eta) instead,
/// since every ridge coefficient is trivially nonzero.
EtaGridResult eta_grid_tune(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            const std::vector<Eigen::Index>& screened_support,
                            const EtaGridOptions& options = {});

}  // namespace ipod
