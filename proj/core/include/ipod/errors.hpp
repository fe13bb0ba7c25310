// ipod: outlier detection and robust regression via iterative thresholding
// Copyright 2026 The ipod Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <stdexcept>
#include <string>

namespace ipod {

/// Parameter outside its admissible range (negative lambda, u < 0, ...).
struct DomainError : std::invalid_argument {
  explicit DomainError(const std::string& what) : std::invalid_argument("domain: " + what) {}
};

/// Vector/matrix sizes do not line up.
struct DimensionError : std::invalid_argument {
  explicit DimensionError(const std::string& what) : std::invalid_argument("dimension: " + what) {}
};

/// Design matrix (or a weighted/leave-one-out variant) is rank deficient.
struct SingularDesignError : std::runtime_error {
  explicit SingularDesignError(const std::string& what) : std::runtime_error("singular design: " + what) {}
};

/// Weighted least squares step cannot be solved (redescending weights killed too many rows).
struct SingularWlsError : std::runtime_error {
  explicit SingularWlsError(const std::string& what) : std::runtime_error("singular WLS: " + what) {}
};

/// A scale estimate collapsed to zero (constant residuals, saturated fit).
struct DegenerateScaleError : std::runtime_error {
  explicit DegenerateScaleError(const std::string& what) : std::runtime_error("degenerate scale: " + what) {}
};

/// RSS = 0: information criteria are undefined.
struct SaturatedFitError : std::runtime_error {
  explicit SaturatedFitError(const std::string& what) : std::runtime_error("saturated fit: " + what) {}
};

/// Model selection could not produce a usable candidate.
struct TuningError : std::runtime_error {
  explicit TuningError(const std::string& what) : std::runtime_error("tuning: " + what) {}
};

/// Concomitant-scale equation has no positive solution.
struct ScaleCollapseError : std::runtime_error {
  explicit ScaleCollapseError(const std::string& what) : std::runtime_error("scale collapse: " + what) {}
};

/// Requested penalty variant does not exist for the rule.
struct UnsupportedVariantError : std::invalid_argument {
  explicit UnsupportedVariantError(const std::string& what)
      : std::invalid_argument("unsupported variant: " + what) {}
};

/// Malformed or inconsistent input data file.
struct IngestError : std::runtime_error {
  explicit IngestError(const std::string& what) : std::runtime_error("ingest: " + what) {}
};

}  // namespace ipod
