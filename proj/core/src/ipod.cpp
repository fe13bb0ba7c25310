// ipod: outlier detection and robust regression via iterative thresholding
// Copyright 2026 The ipod Authors
// Licensed under the Apache License, Version 2.0

#include "ipod/ipod.hpp"

#include <cmath>
#include <string>

#include "ipod/errors.hpp"

namespace ipod {

namespace {

std::vector<Eigen::Index> nonzero_indices(const Eigen::VectorXd& gamma) {
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < gamma.size(); ++i)
    if (gamma[i] != 0.0) idx.push_back(i);
  return idx;
}

double penalty_sum(const ThresholdRule& rule, const Eigen::VectorXd& gamma,
                   const Eigen::VectorXd& lambda_vec) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < gamma.size(); ++i) sum += penalty(rule, gamma[i], lambda_vec[i]);
  return sum;
}

void validate(const IpodConfig& config) {
  if (!(config.epsilon > 0.0)) throw DomainError("epsilon must be positive");
  if (config.max_iter < 1) throw DomainError("max_iter must be >= 1");
  if (!(config.lambda >= 0.0)) throw DomainError("lambda must be nonnegative");
}

}  // namespace

Eigen::VectorXd effective_lambda(const IpodConfig& config, const Eigen::VectorXd& leverages) {
  if (!config.leverage_weighting)
    return Eigen::VectorXd::Constant(leverages.size(), config.lambda);
  return (1.0 - leverages.array()).max(0.0).sqrt() * config.lambda;
}

double objective(const RegressionProblem& problem, const ThresholdRule& rule,
                 const Eigen::VectorXd& beta, const Eigen::VectorXd& gamma,
                 const Eigen::VectorXd& lambda_vec) {
  if (gamma.size() != problem.n() || lambda_vec.size() != problem.n())
    throw DimensionError("objective: gamma/lambda length mismatch");
  const double rss = (problem.y - problem.X * beta - gamma).squaredNorm();
  return 0.5 * rss + penalty_sum(rule, gamma, lambda_vec);
}

IpodFit fit_full(const RegressionProblem& problem, const IpodConfig& config,
                 const PilotEstimate& pilot) {
  validate(config);
  if (pilot.beta0.size() != problem.p()) throw DimensionError("fit_full: pilot beta0 length mismatch");
  const QrModel model(problem);
  const Eigen::VectorXd lambda_vec = effective_lambda(config, model.leverages());

  IpodFit fit;
  fit.gamma = problem.y - problem.X * pilot.beta0;
  Eigen::VectorXd beta;
  for (int j = 0; j < config.max_iter; ++j) {
    beta = model.ols_coef(problem.y - fit.gamma);
    const Eigen::VectorXd resid = problem.y - problem.X * beta;
    Eigen::VectorXd gamma_next = apply_vec(config.rule, resid, lambda_vec);
    const double change = (gamma_next - fit.gamma).lpNorm<Eigen::Infinity>();
    fit.gamma = std::move(gamma_next);
    fit.n_iter = j + 1;
    fit.objective_trace.push_back(
        0.5 * (resid - fit.gamma).squaredNorm() + penalty_sum(config.rule, fit.gamma, lambda_vec));
    if (change < config.epsilon) {
      fit.converged = true;
      break;
    }
  }
  fit.beta = model.ols_coef(problem.y - fit.gamma);
  fit.outliers = nonzero_indices(fit.gamma);
  return fit;
}

IpodFit fit_simplified(const QrModel& model, const Eigen::VectorXd& y, const IpodConfig& config,
                       const Eigen::VectorXd& gamma0) {
  return fit_simplified(model, y, config, gamma0, effective_lambda(config, model.leverages()));
}

IpodFit fit_simplified(const QrModel& model, const Eigen::VectorXd& y, const IpodConfig& config,
                       const Eigen::VectorXd& gamma0, const Eigen::VectorXd& lambda_vec) {
  validate(config);
  if (y.size() != model.n()) throw DimensionError("fit_simplified: y length mismatch");
  if (gamma0.size() != model.n()) throw DimensionError("fit_simplified: gamma0 length mismatch");
  if (lambda_vec.size() != model.n()) throw DimensionError("fit_simplified: lambda_vec length mismatch");

  const Eigen::VectorXd residual_part = model.annihilate(y);  // (I-H) y, precomputed

  IpodFit fit;
  fit.gamma = gamma0;
  for (int j = 0; j < config.max_iter; ++j) {
    Eigen::VectorXd gamma_next =
        apply_vec(config.rule, model.hat_apply(fit.gamma) + residual_part, lambda_vec);
    const double change = (gamma_next - fit.gamma).lpNorm<Eigen::Infinity>();
    fit.gamma = std::move(gamma_next);
    fit.n_iter = j + 1;
    // 0.5||(I-H)(y-gamma)||^2 + sum P equals the full objective at the
    // implied OLS beta, so the trace is comparable across the two algorithms.
    fit.objective_trace.push_back(0.5 * model.annihilate(y - fit.gamma).squaredNorm() +
                                  penalty_sum(config.rule, fit.gamma, lambda_vec));
    if (change < config.epsilon) {
      fit.converged = true;
      break;
    }
  }
  fit.beta = model.ols_coef(y - fit.gamma);
  fit.outliers = nonzero_indices(fit.gamma);
  return fit;
}

double lambda_max(const QrModel& model, const Eigen::VectorXd& y) {
  const Eigen::VectorXd r = model.annihilate(y);
  const Eigen::ArrayXd denom = (1.0 - model.leverages().array()).max(1e-15).sqrt();
  return (r.array() / denom).abs().maxCoeff();
}

SolutionPath solution_path(const QrModel& model, const Eigen::VectorXd& y,
                           const IpodConfig& config_base, int n_grid, double lambda_min) {
  if (n_grid < 2) throw DomainError("solution_path needs n_grid >= 2");
  if (!(lambda_min > 0.0)) throw DomainError("solution_path needs lambda_min > 0");

  SolutionPath path;
  path.n = model.n();
  path.p = model.p();
  path.lambda_max = lambda_max(model, y);
  path.warm_started = true;

  const double top = path.lambda_max * (1.0 + 1e-12);
  const double lo = std::min(lambda_min, top);
  const double ratio = std::pow(lo / top, 1.0 / (n_grid - 1));

  Eigen::VectorXd gamma = Eigen::VectorXd::Zero(model.n());
  double lambda = top;
  for (int g = 0; g < n_grid; ++g, lambda *= ratio) {
    IpodConfig config = config_base;
    config.lambda = lambda;
    IpodFit fit = fit_simplified(model, y, config, gamma);
    gamma = fit.gamma;

    PathPoint point;
    point.lambda = lambda;
    point.df = static_cast<int>(fit.outliers.size());
    point.rss = model.annihilate(y - fit.gamma).squaredNorm();
    point.converged = fit.converged;
    point.n_iter = fit.n_iter;
    point.gamma = std::move(fit.gamma);
    path.points.push_back(std::move(point));
  }
  return path;
}

}  // namespace ipod
