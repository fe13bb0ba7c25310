// ipod: outlier detection and robust regression via iterative thresholding
// Copyright 2026 The ipod Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include "ipod/ipod.hpp"
#include "ipod/pilot.hpp"
#include "ipod/rng.hpp"
#include "ipod/threshold.hpp"

namespace ipod {

/// Correlated-uniform design with an optional block of leverage rows:
/// X = U Sigma^{1/2} with U_ij ~ U(-15, 15) and Sigma_ij = rho^{1(i != j)};
/// when a leverage value L is given, rows 1..O are replaced by L * (1,...,1).
/// The response is y = gamma + eps with gamma = (shift^O, 0^(n-O)) and
/// eps ~ N(0, sigma^2) (beta = 0 without loss of generality).
struct SimDesign {
  Eigen::Index n = 500;
  Eigen::Index p = 15;
  double rho = 0.5;
  Eigen::Index n_outliers = 50;
  std::optional<double> leverage;  // L, or none for additive-only outliers
  double shift = 8.0;
  double sigma = 1.0;
  std::uint64_t seed = 1;
};

Eigen::MatrixXd gen_design(const SimDesign& design);
Eigen::MatrixXd gen_design(const SimDesign& design, CounterRng& rng);
Eigen::VectorXd gen_response(const Eigen::MatrixXd& X, const SimDesign& design);
Eigen::VectorXd gen_response(const Eigen::MatrixXd& X, const SimDesign& design, CounterRng& rng);

struct ReplicateScore {
  double masking = 0.0;   // |truth \ flagged| / |truth|
  double swamping = 0.0;  // |flagged \ truth| / (n - |truth|)
  bool fully_detected = false;
};

ReplicateScore score_detection(const std::vector<Eigen::Index>& flagged,
                               const std::vector<Eigen::Index>& truth, Eigen::Index n);

struct DetectionMetrics {
  double masking = 0.0;         // M: mean masking fraction
  double swamping = 0.0;        // S: mean swamping fraction
  double joint_detection = 0.0; // JD: fraction of replicates with zero masking
  double beta_mse = 0.0;        // mean ||beta_hat - beta||^2
  int reps = 0;
  int failures = 0;             // replicates whose fit raised an error
};

enum class TuneMode { Bic, Universal, Fixed };

struct MethodSpec {
  ThresholdRule rule = ThresholdRule::hard();
  TuneMode tune = TuneMode::Bic;
  double fixed_lambda = 0.0;
  bool scale_by_sigma0 = false;  // Fixed mode: lambda is in pilot-sigma units
  PilotMethod pilot = PilotMethod::LtsLite;
  int path_grid = 100;
  double path_lambda_min_frac = 0.05;
  double bandwidth_frac = 0.1;
  double epsilon = 1e-4;
  int max_iter = 10000;
};

/// Runs one replicate end to end (generation, pilot, tuning, fit) and
/// returns the flagged set with the coefficient estimate.
struct ReplicateFit {
  std::vector<Eigen::Index> flagged;
  Eigen::VectorXd beta;
  double selected_lambda = 0.0;
  bool converged = false;
};

ReplicateFit run_replicate(const SimDesign& design, const MethodSpec& method,
                           std::uint64_t replicate);

/// Seeded detection study: per-replicate streams are derived from the master
/// seed so results do not depend on the thread count.
DetectionMetrics run_study(const SimDesign& design, const MethodSpec& method, int reps,
                           int n_threads = 0);

struct BenchOptions {
  Eigen::Index n = 1000;
  Eigen::Index p = 100;           // no intercept: the design is used as-is
  int reps_per_combo = 10;
  int timing_repeats = 3;         // median over repeats; warm-up discarded
  double ladder_floor = 0.5;
  double ladder_step = 0.1;
  double epsilon = 1e-4;
  int max_iter = 10000;
  ThresholdRule rule = ThresholdRule::hard();
  std::uint64_t seed = 715;
  int n_threads = 1;
};

struct BenchResult {
  double ipod_seconds = 0.0;
  double irls_seconds = 0.0;
  long ipod_iterations = 0;
  long irls_iterations = 0;
  int irls_singular_events = 0;
  int ladder_points = 0;
  int datasets = 0;
};

/// Wall-time comparison of the simplified thresholding iteration against
/// IRLS over the twelve (outliers, leverage) combinations, each dataset
/// fitted along the arithmetic lambda ladder lambda_max -> ladder_floor.
BenchResult bench_timing(const BenchOptions& options);

}  // namespace ipod
