// ipod: outlier detection and robust regression via iterative thresholding
// Copyright 2026 The ipod Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <Eigen/Core>
#include <vector>

#include "ipod/ipod.hpp"
#include "ipod/regress.hpp"

namespace ipod {

/// Modified BIC on the reduced model: m log(RSS/m) + k (log m + 1) with
/// m = n - p and k = df + 1 (one extra parameter for the noise scale).
double bic_star_from_rss(Eigen::Index m, double rss, int df);

/// RSS computed as ||(I-H)(y - gamma_hat)||^2.
double bic_star(const QrModel& model, const Eigen::VectorXd& y, const Eigen::VectorXd& gamma_hat,
                int df);

struct BicPoint {
  int df = 0;
  double bic = 0.0;
  double lambda = 0.0;
};

struct CandidateMinimum {
  int df = 0;
  double basin_width = 0.0;
  double smoothed_bic = 0.0;
};

struct TuningReport {
  double selected_lambda = 0.0;
  int selected_df = 0;
  double selected_bic = 0.0;
  std::vector<BicPoint> bic_curve;              // raw (df, BIC*, lambda), df ascending
  std::vector<std::pair<int, double>> smoothed_curve;  // (df, smoothed BIC*)
  std::vector<CandidateMinimum> candidate_minima;
  int nu_lower = 0;
  int nu_upper = 0;
};

/// Local-minimum BIC* selection on a solution path.  The raw (DF, BIC*)
/// scatter is smoothed with a Gaussian Nadaraya-Watson kernel (bandwidth =
/// bandwidth_frac * DF range); among the local minima of the smoothed curve
/// the one with the widest basin (distance between flanking local maxima,
/// endpoints counting as maxima) wins, and the reported lambda is the best
/// raw BIC* inside that basin.
TuningReport select_lambda(const SolutionPath& path, int nu_lower, int nu_upper,
                           double bandwidth_frac = 0.1);

/// Componentwise lambda_i = sigma * sqrt(2 (1 - h_i) log n): the conservative
/// fixed choice for the soft rule when a noise scale is available.
Eigen::VectorXd universal_lambda(double sigma, const QrModel& model);

}  // namespace ipod
