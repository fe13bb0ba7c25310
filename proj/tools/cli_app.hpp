// ipod: outlier detection and robust regression via iterative thresholding
// Copyright 2026 The ipod Authors
// Licensed under the Apache License, Version 2.0

#pragma once

namespace ipod::cli {

/// Entry point of the command-line tool.  Exit codes: 0 success (and
/// converged, where that applies), 2 fit did not converge, 1 any error.
int run(int argc, const char* const* argv);

}  // namespace ipod::cli
