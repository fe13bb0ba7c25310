// ipod: outlier detection and robust regression via iterative thresholding
// Copyright 2026 The ipod Authors
// Licensed under the Apache License, Version 2.0

#include "ipod/tune.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ipod/errors.hpp"

namespace ipod {

double bic_star_from_rss(Eigen::Index m, double rss, int df) {
  if (m <= 0) throw DomainError("bic_star: m = n - p must be positive");
  if (df < 0) throw DomainError("bic_star: df must be nonnegative");
  if (!(rss > 0.0)) throw SaturatedFitError("RSS = 0, BIC* undefined");
  const double md = static_cast<double>(m);
  return md * std::log(rss / md) + (df + 1) * (std::log(md) + 1.0);
}

double bic_star(const QrModel& model, const Eigen::VectorXd& y, const Eigen::VectorXd& gamma_hat,
                int df) {
  const double rss = model.annihilate(y - gamma_hat).squaredNorm();
  return bic_star_from_rss(model.n() - model.p(), rss, df);
}

TuningReport select_lambda(const SolutionPath& path, int nu_lower, int nu_upper,
                           double bandwidth_frac) {
  if (path.points.empty()) throw TuningError("empty solution path");
  if (nu_lower < 0 || nu_upper < nu_lower) throw DomainError("select_lambda: bad DF window");
  if (nu_upper > path.n / 2)
    throw DomainError("select_lambda: nu_upper must not exceed floor(n/2) = " +
                      std::to_string(path.n / 2));
  if (!(bandwidth_frac > 0.0)) throw DomainError("select_lambda: bandwidth_frac must be positive");

  TuningReport report;
  report.nu_lower = nu_lower;
  report.nu_upper = nu_upper;

  const Eigen::Index m = path.n - path.p;
  bool any_converged = false;
  for (const PathPoint& pt : path.points) {
    if (!pt.converged) continue;
    any_converged = true;
    if (pt.df < nu_lower || pt.df > nu_upper) continue;
    if (!(pt.rss > 0.0)) continue;  // saturated points carry no information
    report.bic_curve.push_back({pt.df, bic_star_from_rss(m, pt.rss, pt.df), pt.lambda});
  }
  if (!any_converged) throw TuningError("no converged fits on the path");
  if (report.bic_curve.empty())
    throw DomainError("no path points with DF in [" + std::to_string(nu_lower) + ", " +
                      std::to_string(nu_upper) + "]");

  // Sort by DF then lambda so the result does not depend on path ordering.
  std::sort(report.bic_curve.begin(), report.bic_curve.end(), [](const BicPoint& a, const BicPoint& b) {
    if (a.df != b.df) return a.df < b.df;
    return a.lambda < b.lambda;
  });

  std::vector<int> dfs;
  for (const BicPoint& bp : report.bic_curve)
    if (dfs.empty() || dfs.back() != bp.df) dfs.push_back(bp.df);

  const double range = std::max(1.0, static_cast<double>(dfs.back() - dfs.front()));
  const double bandwidth = std::max(bandwidth_frac * range, 0.5);

  auto smoothed_at = [&](double df) {
    double num = 0.0, den = 0.0;
    for (const BicPoint& bp : report.bic_curve) {
      const double z = (df - bp.df) / bandwidth;
      const double w = std::exp(-0.5 * z * z);
      num += w * bp.bic;
      den += w;
    }
    return num / den;
  };

  std::vector<double> smooth(dfs.size());
  for (std::size_t k = 0; k < dfs.size(); ++k) {
    smooth[k] = smoothed_at(dfs[k]);
    report.smoothed_curve.emplace_back(dfs[k], smooth[k]);
  }

  const std::size_t last = dfs.size() - 1;
  auto is_max = [&](std::size_t k) {
    if (k == 0 || k == last) return true;  // endpoints flank basins
    return smooth[k] >= smooth[k - 1] && smooth[k] >= smooth[k + 1];
  };
  auto is_min = [&](std::size_t k) {
    const double left = k == 0 ? std::numeric_limits<double>::infinity() : smooth[k - 1];
    const double right = k == last ? std::numeric_limits<double>::infinity() : smooth[k + 1];
    return smooth[k] <= left && smooth[k] <= right;
  };

  struct Basin {
    std::size_t min_index;
    int df_left, df_right;
    double width;
  };
  std::vector<Basin> basins;
  for (std::size_t k = 0; k <= last; ++k) {
    if (!is_min(k)) continue;
    std::size_t l = k;
    while (l > 0 && !is_max(l)) --l;
    std::size_t r = k;
    while (r < last && !is_max(r)) ++r;
    basins.push_back({k, dfs[l], dfs[r], static_cast<double>(dfs[r] - dfs[l])});
    report.candidate_minima.push_back({dfs[k], static_cast<double>(dfs[r] - dfs[l]), smooth[k]});
  }
  if (basins.empty()) throw TuningError("smoothed BIC* curve has no local minimum");

  // Widest basin wins; ties break toward smaller DF.
  const Basin* chosen = &basins.front();
  for (const Basin& b : basins) {
    if (b.width > chosen->width ||
        (b.width == chosen->width && dfs[b.min_index] < dfs[chosen->min_index]))
      chosen = &b;
  }

  // Best raw BIC* inside the basin; ties in BIC* at a shared DF take the
  // largest lambda (the most conservative fit with that support size).
  const BicPoint* best = nullptr;
  for (const BicPoint& bp : report.bic_curve) {
    if (bp.df < chosen->df_left || bp.df > chosen->df_right) continue;
    if (!best || bp.bic < best->bic || (bp.bic == best->bic && bp.lambda > best->lambda)) best = &bp;
  }
  report.selected_lambda = best->lambda;
  report.selected_df = best->df;
  report.selected_bic = best->bic;
  return report;
}

Eigen::VectorXd universal_lambda(double sigma, const QrModel& model) {
  if (!(sigma > 0.0)) throw DomainError("universal_lambda needs sigma > 0");
  const double logn = std::log(static_cast<double>(model.n()));
  return (2.0 * logn * (1.0 - model.leverages().array()).max(0.0)).sqrt() * sigma;
}

}  // namespace ipod
