// ipod: outlier detection and robust regression via iterative thresholding
// Copyright 2026 The ipod Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "ipod/regress.hpp"

namespace ipod {

enum class PilotMethod { LtsLite, Zero, UserSupplied };

/// Robust starting point (beta0, sigma0) for the iterative fits.
struct PilotEstimate {
  Eigen::VectorXd beta0;
  double sigma0 = 1.0;
  PilotMethod method = PilotMethod::Zero;
  std::uint64_t seed = 0;
};

/// 1.4826 * median absolute deviation from the median; falls back to the
/// (normal-consistent) mean absolute deviation when the MAD is zero.
double mad_scale(const Eigen::VectorXd& residuals);

struct LtsOptions {
  int n_subsets = 500;
  int n_csteps = 2;
  int n_refine = 10;        // candidates refined with C-steps to convergence
  int max_refine_steps = 200;
  int max_redraws = 100;    // singular elemental subsets are redrawn this often
};

/// Trimmed-squares pilot: random p-point elemental fits, each improved by
/// concentration steps (refit on the h = floor((n+p+1)/2) smallest squared
/// residuals), best candidates refined to a C-step fixed point.  The trimmed
/// scale is multiplied by the 50%-trimming consistency factor 2.2219.
///
/// Elemental LTS degrades for large p, so for p >= 30 this falls back to the
/// zero start with a MAD scale of y (see zero_pilot).
PilotEstimate lts_lite(const RegressionProblem& problem, int n_subsets, int n_csteps,
                       std::uint64_t seed, int n_threads = 1);
PilotEstimate lts_lite(const RegressionProblem& problem, const LtsOptions& options,
                       std::uint64_t seed, int n_threads = 1);

/// beta0 = 0, sigma0 = MAD of y.
PilotEstimate zero_pilot(const RegressionProblem& problem);

}  // namespace ipod
