// ipod: outlier detection and robust regression via iterative thresholding
// Copyright 2026 The ipod Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "ipod/regress.hpp"

namespace ipod {

/// A named table with one designated response column.
struct Dataset {
  std::string name;
  std::vector<std::string> x_names;
  std::string y_name;
  Eigen::MatrixXd X;  // raw predictors, no intercept column
  Eigen::VectorXd y;
  std::string provenance;
};

/// Parse RFC-4180-style CSV text (header required, numeric fields, quoted
/// fields allowed).  y_column selects the response by header name or by
/// 0-based index when it parses as an integer; default is the last column.
Dataset parse_csv(const std::string& text, const std::string& name,
                  const std::string& y_column = "");

Dataset ingest_csv(const std::string& path, const std::string& y_column = "");

RegressionProblem to_problem(const Dataset& data, bool intercept = true);

/// Benchmark fixtures compiled into the library.  "hbk" is the 75-case
/// Hawkins-Bradu-Kass artificial data (cases 1-10 are the planted outliers,
/// 11-14 good leverage points); "telephone" is the Belgian phone-calls
/// series whose years 64-69 were recorded in the wrong unit.
const std::vector<std::string>& builtin_dataset_names();
Dataset builtin_dataset(const std::string& name);

/// Load either a builtin dataset (by name) or a CSV file (by path).
Dataset load_dataset(const std::string& name_or_path, const std::string& y_column = "");

}  // namespace ipod
