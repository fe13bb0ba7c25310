// ipod: outlier detection and robust regression via iterative thresholding
// Copyright 2026 The ipod Authors
// Licensed under the Apache License, Version 2.0

#include "ipod/pilot.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ipod/errors.hpp"
#include "ipod/parallel.hpp"
#include "ipod/rng.hpp"

namespace ipod {

namespace {

constexpr double kMadConsistency = 1.4826;
constexpr double kMeanAbsConsistency = 1.2533;  // sqrt(pi/2)
// Gaussian consistency of the 50%-trimmed RMS: keeping |Z| <= q = qnorm(0.75)
// leaves E[Z^2 | kept] = 1 - 2 q phi(q) / 0.5, whose inverse square root is
constexpr double kTrim50Consistency = 2.6477;

double median_inplace(std::vector<double>& v) {
  const std::size_t n = v.size();
  auto mid = v.begin() + n / 2;
  std::nth_element(v.begin(), mid, v.end());
  double hi = *mid;
  if (n % 2 == 1) return hi;
  double lo = *std::max_element(v.begin(), mid);
  return 0.5 * (lo + hi);
}

struct Candidate {
  Eigen::VectorXd beta;
  double trimmed_rss = std::numeric_limits<double>::infinity();
};

// Squared residuals sorted ascending; returns the h-subset indices and RSS.
std::pair<std::vector<Eigen::Index>, double> best_h_subset(const RegressionProblem& prob,
                                                           const Eigen::VectorXd& beta,
                                                           Eigen::Index h) {
  const Eigen::VectorXd r = prob.y - prob.X * beta;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(prob.n()));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double ra = r[a] * r[a], rb = r[b] * r[b];
    if (ra != rb) return ra < rb;
    return a < b;  // deterministic under ties
  });
  order.resize(static_cast<std::size_t>(h));
  double rss = 0.0;
  for (Eigen::Index i : order) rss += r[i] * r[i];
  return {std::move(order), rss};
}

Eigen::VectorXd ols_on_subset(const RegressionProblem& prob, const std::vector<Eigen::Index>& rows) {
  Eigen::MatrixXd xs(rows.size(), prob.p());
  Eigen::VectorXd ys(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    xs.row(static_cast<Eigen::Index>(k)) = prob.X.row(rows[k]);
    ys[static_cast<Eigen::Index>(k)] = prob.y[rows[k]];
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(xs);
  return qr.solve(ys);
}

Candidate concentrate(const RegressionProblem& prob, Eigen::VectorXd beta, Eigen::Index h,
                      int steps) {
  Candidate cand;
  cand.beta = std::move(beta);
  auto [rows, rss] = best_h_subset(prob, cand.beta, h);
  if (!std::isfinite(rss)) return cand;  // degenerate subset fit, keep rss = inf
  cand.trimmed_rss = rss;
  for (int s = 0; s < steps; ++s) {
    Eigen::VectorXd refit = ols_on_subset(prob, rows);
    auto [rows2, rss2] = best_h_subset(prob, refit, h);
    if (rss2 >= cand.trimmed_rss - 1e-12 * (1.0 + cand.trimmed_rss) && rows2 == rows) {
      break;  // C-step fixed point
    }
    cand.beta = std::move(refit);
    cand.trimmed_rss = rss2;
    rows = std::move(rows2);
  }
  return cand;
}

}  // namespace

double mad_scale(const Eigen::VectorXd& residuals) {
  if (residuals.size() == 0) throw DimensionError("mad_scale: empty residual vector");
  std::vector<double> v(residuals.data(), residuals.data() + residuals.size());
  const double med = median_inplace(v);
  for (double& x : v) x = std::abs(x - med);
  const double mad = median_inplace(v);
  if (mad > 0.0) return kMadConsistency * mad;
  double mean_abs = 0.0;
  for (double x : v) mean_abs += x;
  mean_abs /= static_cast<double>(v.size());
  if (mean_abs > 0.0) return kMeanAbsConsistency * mean_abs;
  throw DegenerateScaleError("all residuals equal; no scale information");
}

PilotEstimate zero_pilot(const RegressionProblem& problem) {
  PilotEstimate est;
  est.beta0 = Eigen::VectorXd::Zero(problem.p());
  est.sigma0 = mad_scale(problem.y);
  est.method = PilotMethod::Zero;
  return est;
}

PilotEstimate lts_lite(const RegressionProblem& problem, int n_subsets, int n_csteps,
                       std::uint64_t seed, int n_threads) {
  LtsOptions opt;
  opt.n_subsets = n_subsets;
  opt.n_csteps = n_csteps;
  return lts_lite(problem, opt, seed, n_threads);
}

PilotEstimate lts_lite(const RegressionProblem& problem, const LtsOptions& options,
                       std::uint64_t seed, int n_threads) {
  const Eigen::Index n = problem.n(), p = problem.p();
  if (options.n_subsets < 50) throw DomainError("lts_lite needs n_subsets >= 50");
  if (n <= 2 * p) throw DimensionError("lts_lite needs n > 2p");

  if (p >= 30) {
    // Elemental subsets are hopeless in high dimension; fall back to zero start.
    PilotEstimate est = zero_pilot(problem);
    est.seed = seed;
    return est;
  }

  const Eigen::Index h = (n + p + 1) / 2;
  const CounterRng master(seed);

  std::vector<Candidate> candidates(static_cast<std::size_t>(options.n_subsets));
  parallel_for(candidates.size(), n_threads, [&](std::size_t s) {
    CounterRng rng = master.spawn(s);
    Eigen::MatrixXd xe(p, p);
    Eigen::VectorXd ye(p);
    for (int attempt = 0; attempt <= options.max_redraws; ++attempt) {
      // draw p distinct rows
      std::vector<Eigen::Index> rows;
      rows.reserve(static_cast<std::size_t>(p));
      while (rows.size() < static_cast<std::size_t>(p)) {
        Eigen::Index r = static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(n)));
        if (std::find(rows.begin(), rows.end(), r) == rows.end()) rows.push_back(r);
      }
      for (std::size_t k = 0; k < rows.size(); ++k) {
        xe.row(static_cast<Eigen::Index>(k)) = problem.X.row(rows[k]);
        ye[static_cast<Eigen::Index>(k)] = problem.y[rows[k]];
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(xe);
      if (!lu.isInvertible()) {
        if (attempt == options.max_redraws)
          throw SingularDesignError("could not draw a nonsingular elemental subset");
        continue;
      }
      candidates[s] = concentrate(problem, lu.solve(ye), h, options.n_csteps);
      return;
    }
  });

  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) { return a.trimmed_rss < b.trimmed_rss; });

  const std::size_t n_refine =
      std::min<std::size_t>(static_cast<std::size_t>(options.n_refine), candidates.size());
  Candidate best = candidates.front();
  std::vector<Candidate> refined(n_refine);
  parallel_for(n_refine, n_threads, [&](std::size_t k) {
    refined[k] = concentrate(problem, candidates[k].beta, h, options.max_refine_steps);
  });
  for (const Candidate& c : refined)
    if (c.trimmed_rss < best.trimmed_rss) best = c;

  PilotEstimate est;
  est.beta0 = best.beta;
  est.sigma0 = kTrim50Consistency * std::sqrt(best.trimmed_rss / static_cast<double>(h));
  est.method = PilotMethod::LtsLite;
  est.seed = seed;
  if (est.sigma0 <= 0.0) throw DegenerateScaleError("trimmed scale is zero");
  return est;
}

}  // namespace ipod
