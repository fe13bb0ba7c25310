// ipod: outlier detection and robust regression via iterative thresholding
// Copyright 2026 The ipod Authors
// Licensed under the Apache License, Version 2.0

#include "ipod/highdim.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "ipod/errors.hpp"
#include "ipod/parallel.hpp"
#include "ipod/rng.hpp"
#include "ipod/tune.hpp"

namespace ipod {

namespace {

std::vector<Eigen::Index> nonzeros(const Eigen::VectorXd& v) {
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v[i] != 0.0) idx.push_back(i);
  return idx;
}

// One stacked update argument u = xi + B'(y - B xi) / k0^2 for B = [X I].
void update_argument(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double k0sq,
                     const Eigen::VectorXd& beta, const Eigen::VectorXd& gamma,
                     Eigen::VectorXd& u_beta, Eigen::VectorXd& u_gamma) {
  const Eigen::VectorXd fitted_resid = y - X * beta - gamma;
  u_beta = beta + X.transpose() * fitted_resid / k0sq;
  u_gamma = gamma + fitted_resid / k0sq;
}

}  // namespace

double spectral_bound(const Eigen::MatrixXd& X) {
  if (X.size() == 0 || X.norm() == 0.0) throw DomainError("spectral_bound: X must be nonzero");
  const double frob = X.norm();

  CounterRng rng(0x5eedULL, static_cast<std::uint64_t>(X.rows() * 131071 + X.cols()));
  Eigen::VectorXd v(X.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.normal();
  v.normalize();

  double mu = 0.0;
  double residual = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 200; ++it) {
    Eigen::VectorXd w = X.transpose() * (X * v);
    mu = v.dot(w);  // Rayleigh quotient for X'X
    residual = (w - mu * v).norm();
    const double wn = w.norm();
    if (wn == 0.0) break;
    v = w / wn;
    if (residual <= 1e-9 * std::max(1.0, mu)) break;
  }

  double s2;  // upper bound for sigma_max^2
  if (residual <= 0.01 * std::max(1.0, mu)) {
    s2 = (mu + residual) * 1.0201;  // 1.01^2 inflation
  } else {
    s2 = frob * frob;  // stagnation: Frobenius bound is always valid
  }
  s2 = std::min(s2, frob * frob);
  return std::sqrt(s2 + 1.0) * 1.01;
}

HighDimFit fit_largep(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                      const HighDimConfig& config, const Eigen::VectorXd& xi0) {
  const Eigen::Index n = X.rows(), p = X.cols();
  if (y.size() != n) throw DimensionError("fit_largep: y length mismatch");
  if (!(config.lambda >= 0.0)) throw DomainError("fit_largep: lambda must be nonnegative");
  if (!(config.epsilon > 0.0)) throw DomainError("fit_largep: epsilon must be positive");

  const double k0 = config.k0 > 0.0 ? config.k0 : spectral_bound(X);
  const double k0sq = k0 * k0;
  const double level = config.lambda / k0sq;

  HighDimFit fit;
  if (xi0.size() == 0) {
    fit.beta = Eigen::VectorXd::Zero(p);
    fit.gamma = Eigen::VectorXd::Zero(n);
  } else {
    if (xi0.size() != p + n) throw DimensionError("fit_largep: xi0 must have length p + n");
    fit.beta = xi0.head(p);
    fit.gamma = xi0.tail(n);
  }

  Eigen::VectorXd u_beta, u_gamma;
  for (int j = 0; j < config.max_iter; ++j) {
    update_argument(X, y, k0sq, fit.beta, fit.gamma, u_beta, u_gamma);
    Eigen::VectorXd beta_next = apply_vec(config.rule, u_beta, level);
    Eigen::VectorXd gamma_next = apply_vec(config.rule, u_gamma, level);
    const double change = std::max((beta_next - fit.beta).lpNorm<Eigen::Infinity>(),
                                   (gamma_next - fit.gamma).lpNorm<Eigen::Infinity>());
    fit.beta = std::move(beta_next);
    fit.gamma = std::move(gamma_next);
    fit.n_iter = j + 1;
    if (change < config.epsilon) {
      fit.converged = true;
      break;
    }
  }
  fit.support_beta = nonzeros(fit.beta);
  fit.support_gamma = nonzeros(fit.gamma);
  return fit;
}

ScreenResult proportional_screen(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double alpha,
                                 const ThresholdRule& rule, int max_iter) {
  const Eigen::Index n = X.rows(), p = X.cols();
  if (y.size() != n) throw DimensionError("proportional_screen: y length mismatch");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("proportional_screen: need 0 < alpha < 1");

  const Eigen::Index keep =
      std::min<Eigen::Index>(static_cast<Eigen::Index>(std::ceil(alpha * static_cast<double>(n))), p + n);
  const double k0 = spectral_bound(X);
  const double k0sq = k0 * k0;

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd gamma = Eigen::VectorXd::Zero(n);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(p + n));

  ScreenResult result;
  std::vector<Eigen::Index> prev_support;
  int stable_count = 0;

  Eigen::VectorXd u(p + n), u_beta, u_gamma;
  for (int j = 0; j < max_iter; ++j) {
    update_argument(X, y, k0sq, beta, gamma, u_beta, u_gamma);
    u.head(p) = u_beta;
    u.tail(n) = u_gamma;

    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      const double ua = std::abs(u[a]), ub = std::abs(u[b]);
      if (ua != ub) return ua > ub;
      return a < b;  // ties at the cut keep the lower index
    });

    // Threshold = magnitude of the (keep+1)-th largest entry; survivors are
    // shrunk by the rule at that level, everything else is zeroed.
    const double cut = keep < p + n ? std::abs(u[order[static_cast<std::size_t>(keep)]]) : 0.0;
    beta.setZero();
    gamma.setZero();
    for (Eigen::Index k = 0; k < keep; ++k) {
      const Eigen::Index idx = order[static_cast<std::size_t>(k)];
      double value = u[idx];
      if (rule.kind == RuleKind::HardRidge) {
        value /= 1.0 + rule.eta;
      } else if (rule.kind == RuleKind::Soft) {
        value = value > 0 ? value - cut : value + cut;
      }
      if (idx < p)
        beta[idx] = value;
      else
        gamma[idx - p] = value;
    }
    result.n_iter = j + 1;

    std::vector<Eigen::Index> support = nonzeros(beta);
    if (support == prev_support) {
      if (++stable_count >= 10) {
        result.stabilized = true;
        break;
      }
    } else {
      stable_count = 0;
      prev_support = std::move(support);
    }
    if (keep >= p + n) break;  // everything survives; nothing to iterate
  }

  result.predictors = nonzeros(beta);
  result.shifts = nonzeros(gamma);
  return result;
}

EtaGridResult eta_grid_tune(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            const std::vector<Eigen::Index>& screened_support,
                            const EtaGridOptions& options) {
  const Eigen::Index n = X.rows();
  if (screened_support.empty()) throw DomainError("eta_grid_tune: screened support is empty");

  Eigen::MatrixXd xs(n, static_cast<Eigen::Index>(screened_support.size()));
  for (std::size_t k = 0; k < screened_support.size(); ++k)
    xs.col(static_cast<Eigen::Index>(k)) = X.col(screened_support[k]);
  const Eigen::Index ps = xs.cols();

  // Stage 1: lambda = 0 makes the rule a pure ridge on xi = (beta, gamma).
  // Solve it exactly through one SVD of B = [Xs I] and score each eta with
  // the effective degrees of freedom.
  Eigen::MatrixXd b(n, ps + n);
  b.leftCols(ps) = xs;
  b.rightCols(n) = Eigen::MatrixXd::Identity(n, n);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd d = svd.singularValues();
  const Eigen::VectorXd uty = svd.matrixU().transpose() * y;

  double eta_star = options.ridge_lo;
  double best_ridge_bic = std::numeric_limits<double>::infinity();
  const double ratio = std::pow(options.ridge_hi / options.ridge_lo,
                                1.0 / std::max(1, options.ridge_grid - 1));
  double eta = options.ridge_lo;
  for (int g = 0; g < options.ridge_grid; ++g, eta *= ratio) {
    double rss = 0.0, edf = 0.0;
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      const double d2 = d[i] * d[i];
      const double shrink = d2 / (d2 + eta);
      rss += (1.0 - shrink) * (1.0 - shrink) * uty[i] * uty[i];
      edf += shrink;
    }
    if (!(rss > 0.0)) continue;
    const double bic = bic_star_from_rss(n, rss, static_cast<int>(std::lround(edf)));
    if (bic < best_ridge_bic) {
      best_ridge_bic = bic;
      eta_star = eta;
    }
  }
  if (!std::isfinite(best_ridge_bic)) throw TuningError("all ridge fits saturated");

  // Stage 2: hard-ridge paths at eta in {0.5, 0.05, 0.005} * eta_star.
  const double lambda_top = (b.transpose() * y).lpNorm<Eigen::Infinity>() * (1.0 + 1e-12);
  const std::array<double, 3> eta_scale = {0.5, 0.05, 0.005};

  struct Candidate {
    double bic = std::numeric_limits<double>::infinity();
    double lambda = 0.0;
    double eta = 0.0;
    HighDimFit fit;
  };
  std::vector<Candidate> per_eta(eta_scale.size());

  parallel_for(eta_scale.size(), options.n_threads, [&](std::size_t e) {
    const double eta_e = eta_scale[e] * eta_star;
    HighDimConfig config;
    config.rule = ThresholdRule::hard_ridge(eta_e);
    config.epsilon = options.epsilon;
    config.max_iter = options.max_iter;
    config.k0 = spectral_bound(xs);

    Candidate& best = per_eta[e];
    const double step = std::pow(options.lambda_min_frac, 1.0 / (options.lambda_grid - 1));
    Eigen::VectorXd warm = Eigen::VectorXd::Zero(ps + n);
    double lambda = lambda_top;
    for (int g = 0; g < options.lambda_grid; ++g, lambda *= step) {
      config.lambda = lambda;
      HighDimFit fit = fit_largep(xs, y, config, warm);
      warm.head(ps) = fit.beta;
      warm.tail(n) = fit.gamma;
      const double rss = (y - xs * fit.beta - fit.gamma).squaredNorm();
      if (!(rss > 0.0)) continue;
      const int df = static_cast<int>(fit.support_beta.size() + fit.support_gamma.size());
      if (df > static_cast<int>(n) - 1) continue;  // saturated supports carry no information
      const double bic = bic_star_from_rss(n, rss, df);
      if (bic < best.bic) {
        best.bic = bic;
        best.lambda = lambda;
        best.eta = eta_e;
        best.fit = std::move(fit);
      }
    }
  });

  const Candidate* overall = nullptr;
  for (const Candidate& cand : per_eta)
    if (!overall || cand.bic < overall->bic) overall = &cand;
  if (!overall || !std::isfinite(overall->bic))
    throw TuningError("all hard-ridge path fits saturated");

  EtaGridResult result;
  result.lambda_star = overall->lambda;
  result.eta_star = eta_star;
  result.eta_selected = overall->eta;
  result.bic = overall->bic;
  result.fit = overall->fit;

  // Map beta support back to the original predictor indices.
  Eigen::VectorXd beta_full = Eigen::VectorXd::Zero(X.cols());
  for (std::size_t k = 0; k < screened_support.size(); ++k)
    beta_full[screened_support[k]] = result.fit.beta[static_cast<Eigen::Index>(k)];
  result.fit.beta = std::move(beta_full);
  result.fit.support_beta.clear();
  for (Eigen::Index i = 0; i < result.fit.beta.size(); ++i)
    if (result.fit.beta[i] != 0.0) result.fit.support_beta.push_back(i);
  return result;
}

}  // namespace ipod
