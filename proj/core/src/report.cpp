// ipod: outlier detection and robust regression via iterative thresholding
// Copyright 2026 The ipod Authors
// Licensed under the Apache License, Version 2.0

#include "ipod/report.hpp"

#include <ostream>

#include "ipod/tune.hpp"

namespace ipod {

nlohmann::json fit_report(const IpodFit& fit, const std::string& rule, double lambda,
                          double sigma0) {
  nlohmann::json gamma = nlohmann::json::array();
  for (Eigen::Index i : fit.outliers)
    gamma.push_back({{"index", i + 1}, {"value", fit.gamma[i]}});
  nlohmann::json outliers = nlohmann::json::array();
  for (Eigen::Index i : fit.outliers) outliers.push_back(i + 1);
  return {
      {"schema", 1},
      {"rule", rule},
      {"lambda", lambda},
      {"sigma0", sigma0},
      {"beta", std::vector<double>(fit.beta.data(), fit.beta.data() + fit.beta.size())},
      {"gamma", gamma},
      {"outliers", outliers},
      {"n_iter", fit.n_iter},
      {"converged", fit.converged},
  };
}

std::vector<Eigen::Index> flagged_from_report(const nlohmann::json& report) {
  std::vector<Eigen::Index> flagged;
  for (const auto& v : report.at("outliers")) flagged.push_back(v.get<Eigen::Index>());
  return flagged;
}

nlohmann::json tuning_report_json(const TuningReport& report) {
  nlohmann::json curve = nlohmann::json::array();
  for (const BicPoint& bp : report.bic_curve)
    curve.push_back({{"df", bp.df}, {"bic_star", bp.bic}, {"lambda", bp.lambda}});
  nlohmann::json smoothed = nlohmann::json::array();
  for (const auto& [df, value] : report.smoothed_curve)
    smoothed.push_back({{"df", df}, {"bic_star", value}});
  nlohmann::json minima = nlohmann::json::array();
  for (const CandidateMinimum& cm : report.candidate_minima)
    minima.push_back({{"df", cm.df}, {"basin_width", cm.basin_width}, {"bic_star", cm.smoothed_bic}});
  return {
      {"schema", 1},
      {"selected_lambda", report.selected_lambda},
      {"selected_df", report.selected_df},
      {"selected_bic_star", report.selected_bic},
      {"nu_bounds", {report.nu_lower, report.nu_upper}},
      {"bic_curve", curve},
      {"smoothed_curve", smoothed},
      {"candidate_minima", minima},
  };
}

nlohmann::json metrics_report(const DetectionMetrics& metrics, const std::string& method) {
  return {
      {"schema", 1},
      {"method", method},
      {"reps", metrics.reps},
      {"failures", metrics.failures},
      {"masking", metrics.masking},
      {"swamping", metrics.swamping},
      {"joint_detection", metrics.joint_detection},
      {"beta_mse", metrics.beta_mse},
  };
}

nlohmann::json bench_report(const BenchResult& result) {
  return {
      {"schema", 1},
      {"ipod_seconds", result.ipod_seconds},
      {"irls_seconds", result.irls_seconds},
      {"speedup", result.irls_seconds / std::max(result.ipod_seconds, 1e-12)},
      {"ipod_iterations", result.ipod_iterations},
      {"irls_iterations", result.irls_iterations},
      {"irls_singular_events", result.irls_singular_events},
      {"ladder_points", result.ladder_points},
      {"datasets", result.datasets},
  };
}

nlohmann::json highdim_report(const HighDimFit& fit, double lambda, double eta) {
  nlohmann::json beta = nlohmann::json::array();
  for (Eigen::Index i : fit.support_beta)
    beta.push_back({{"index", i + 1}, {"value", fit.beta[i]}});
  nlohmann::json gamma = nlohmann::json::array();
  for (Eigen::Index i : fit.support_gamma)
    gamma.push_back({{"index", i + 1}, {"value", fit.gamma[i]}});
  return {
      {"schema", 1},
      {"lambda", lambda},
      {"eta", eta},
      {"beta", beta},
      {"gamma", gamma},
      {"n_iter", fit.n_iter},
      {"converged", fit.converged},
  };
}

void write_path_csv(const SolutionPath& path, std::ostream& out) {
  out.precision(17);
  out << "lambda,df,rss,bic_star,converged,n_iter\n";
  const Eigen::Index m = path.n - path.p;
  for (const PathPoint& pt : path.points) {
    out << pt.lambda << ',' << pt.df << ',' << pt.rss << ',';
    if (pt.rss > 0.0)
      out << bic_star_from_rss(m, pt.rss, pt.df);
    else
      out << "nan";
    out << ',' << (pt.converged ? 1 : 0) << ',' << pt.n_iter << '\n';
  }
}

void write_path_gamma_csv(const SolutionPath& path, std::ostream& out) {
  out.precision(17);
  for (std::size_t k = 0; k < path.points.size(); ++k) {
    if (k) out << ',';
    out << "lambda_" << path.points[k].lambda;
  }
  out << '\n';
  for (Eigen::Index i = 0; i < path.n; ++i) {
    for (std::size_t k = 0; k < path.points.size(); ++k) {
      if (k) out << ',';
      out << path.points[k].gamma[i];
    }
    out << '\n';
  }
}

}  // namespace ipod
