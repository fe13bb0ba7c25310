// ipod: outlier detection and robust regression via iterative thresholding
// Copyright 2026 The ipod Authors
// Licensed under the Apache License, Version 2.0

#include "cli_app.hpp"

int main(int argc, char** argv) { return ipod::cli::run(argc, argv); }
