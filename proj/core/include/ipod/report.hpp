// ipod: outlier detection and robust regression via iterative thresholding
// Copyright 2026 The ipod Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ipod/highdim.hpp"
#include "ipod/ipod.hpp"
#include "ipod/mest.hpp"
#include "ipod/sim.hpp"
#include "ipod/tune.hpp"

namespace ipod {

/// Fit reports use a versioned schema ("schema": 1).  gamma is serialized
/// sparsely as index/value pairs; indices are 1-based in reports to match the
/// case numbering of the benchmark datasets.
nlohmann::json fit_report(const IpodFit& fit, const std::string& rule, double lambda,
                          double sigma0);

/// Flagged outlier cases (1-based) re-read from a report.
std::vector<Eigen::Index> flagged_from_report(const nlohmann::json& report);

nlohmann::json tuning_report_json(const TuningReport& report);
nlohmann::json metrics_report(const DetectionMetrics& metrics, const std::string& method);
nlohmann::json bench_report(const BenchResult& result);
nlohmann::json highdim_report(const HighDimFit& fit, double lambda, double eta);

/// Path CSV with header "lambda,df,rss,bic_star,converged,n_iter".
void write_path_csv(const SolutionPath& path, std::ostream& out);

/// Companion matrix of gamma estimates: one column per path point.
void write_path_gamma_csv(const SolutionPath& path, std::ostream& out);

}  // namespace ipod
