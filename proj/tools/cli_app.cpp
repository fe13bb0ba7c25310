// ipod: outlier detection and robust regression via iterative thresholding
// Copyright 2026 The ipod Authors
// Licensed under the Apache License, Version 2.0

#include "cli_app.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "ipod/dataset.hpp"
#include "ipod/errors.hpp"
#include "ipod/highdim.hpp"
#include "ipod/ipod.hpp"
#include "ipod/mest.hpp"
#include "ipod/pilot.hpp"
#include "ipod/report.hpp"
#include "ipod/sim.hpp"
#include "ipod/tune.hpp"

namespace ipod::cli {

namespace {

struct DataArgs {
  std::string data;
  std::string y_column;
  bool no_intercept = false;
};

struct FitArgs {
  std::string rule = "hard";
  double eta = 0.0;
  std::optional<double> lambda;
  std::string tune;  // bic | universal | fixed:<value>
  std::string scale = "none";
  std::string pilot = "lts";
  std::uint64_t seed = 1;
  double epsilon = 1e-4;
  int max_iter = 10000;
  int grid = 100;
  double lambda_min_frac = 0.05;
  double bandwidth = 0.1;
  int nu_upper = -1;  // -1: floor(n/2)
};

void add_data_options(CLI::App* cmd, DataArgs& args) {
  cmd->add_option("--data", args.data, "builtin dataset name (hbk, telephone) or CSV path")
      ->required();
  cmd->add_option("--y", args.y_column, "response column (header name or 0-based index)");
  cmd->add_flag("--no-intercept", args.no_intercept, "do not prepend a ones column");
}

void add_fit_options(CLI::App* cmd, FitArgs& args, bool with_tuning) {
  cmd->add_option("--rule", args.rule, "threshold rule: soft|hard|hardridge")
      ->check(CLI::IsMember({"soft", "hard", "hardridge"}));
  cmd->add_option("--eta", args.eta, "ridge weight for hardridge");
  cmd->add_option("--epsilon", args.epsilon, "convergence tolerance (sup-norm change in gamma)");
  cmd->add_option("--max-iter", args.max_iter, "iteration cap");
  cmd->add_option("--seed", args.seed, "seed for the pilot's subset draws");
  cmd->add_option("--pilot", args.pilot, "pilot estimate: lts|zero")
      ->check(CLI::IsMember({"lts", "zero"}));
  if (with_tuning) {
    cmd->add_option("--lambda", args.lambda, "fixed threshold level");
    cmd->add_option("--tune", args.tune, "bic | universal | fixed:<value>");
    cmd->add_option("--scale", args.scale, "none | sigma0 (lambda in pilot-noise units)")
        ->check(CLI::IsMember({"none", "sigma0"}));
  }
  cmd->add_option("--grid", args.grid, "number of path grid points");
  cmd->add_option("--lambda-min-frac", args.lambda_min_frac, "path floor as a fraction of lambda_max");
  cmd->add_option("--bandwidth", args.bandwidth, "kernel bandwidth as a fraction of the DF range");
  cmd->add_option("--nu-upper", args.nu_upper, "upper DF bound for BIC tuning (default n/2)");
}

PilotEstimate make_pilot(const RegressionProblem& problem, const FitArgs& args) {
  if (args.pilot == "zero") return zero_pilot(problem);
  return lts_lite(problem, LtsOptions{}, args.seed, 1);
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw IngestError("cannot write '" + path + "'");
  return file;
}

int cmd_fit(const DataArgs& data_args, const FitArgs& fit_args, const std::string& output) {
  if (fit_args.lambda && !fit_args.tune.empty())
    throw DomainError("--lambda conflicts with --tune; pick one");
  if (!fit_args.lambda && fit_args.tune.empty())
    throw DomainError("one of --lambda or --tune is required");

  const Dataset data = load_dataset(data_args.data, data_args.y_column);
  const RegressionProblem problem = to_problem(data, !data_args.no_intercept);
  const QrModel model(problem);
  const PilotEstimate pilot = make_pilot(problem, fit_args);
  const Eigen::VectorXd gamma0 = problem.y - problem.X * pilot.beta0;

  IpodConfig config;
  config.rule = parse_rule(fit_args.rule, fit_args.eta);
  config.epsilon = fit_args.epsilon;
  config.max_iter = fit_args.max_iter;

  double lambda_used = 0.0;
  IpodFit fit;
  if (fit_args.lambda || fit_args.tune.rfind("fixed:", 0) == 0) {
    double lambda = fit_args.lambda ? *fit_args.lambda : std::stod(fit_args.tune.substr(6));
    if (fit_args.scale == "sigma0") lambda *= pilot.sigma0;
    config.lambda = lambda_used = lambda;
    fit = fit_simplified(model, problem.y, config, gamma0);
  } else if (fit_args.tune == "universal") {
    const Eigen::VectorXd lambda_vec = universal_lambda(pilot.sigma0, model);
    fit = fit_simplified(model, problem.y, config, gamma0, lambda_vec);
    lambda_used = pilot.sigma0 * std::sqrt(2.0 * std::log(static_cast<double>(problem.n())));
  } else if (fit_args.tune == "bic") {
    const double top = lambda_max(model, problem.y);
    SolutionPath path =
        solution_path(model, problem.y, config, fit_args.grid, fit_args.lambda_min_frac * top);
    const int nu_up =
        fit_args.nu_upper >= 0 ? fit_args.nu_upper : static_cast<int>(problem.n() / 2);
    TuningReport report = select_lambda(path, 0, nu_up, fit_args.bandwidth);
    config.lambda = lambda_used = report.selected_lambda;
    fit = fit_simplified(model, problem.y, config, gamma0);
  } else {
    throw DomainError("unknown --tune mode '" + fit_args.tune + "'");
  }

  nlohmann::json report = fit_report(fit, fit_args.rule, lambda_used, pilot.sigma0);
  report["data"] = data.name;
  std::ofstream file;
  open_output(file, output) << report.dump(2) << '\n';
  return fit.converged ? 0 : 2;
}

int cmd_path(const DataArgs& data_args, const FitArgs& fit_args, const std::string& output,
             const std::string& gamma_output) {
  const Dataset data = load_dataset(data_args.data, data_args.y_column);
  const RegressionProblem problem = to_problem(data, !data_args.no_intercept);
  const QrModel model(problem);
  IpodConfig config;
  config.rule = parse_rule(fit_args.rule, fit_args.eta);
  config.epsilon = fit_args.epsilon;
  config.max_iter = fit_args.max_iter;
  const double top = lambda_max(model, problem.y);
  SolutionPath path =
      solution_path(model, problem.y, config, fit_args.grid, fit_args.lambda_min_frac * top);
  std::ofstream file;
  write_path_csv(path, open_output(file, output));
  if (!gamma_output.empty()) {
    std::ofstream gfile(gamma_output);
    if (!gfile) throw IngestError("cannot write '" + gamma_output + "'");
    write_path_gamma_csv(path, gfile);
  }
  return 0;
}

int cmd_tune(const DataArgs& data_args, const FitArgs& fit_args, const std::string& output) {
  const Dataset data = load_dataset(data_args.data, data_args.y_column);
  const RegressionProblem problem = to_problem(data, !data_args.no_intercept);
  const QrModel model(problem);
  IpodConfig config;
  config.rule = parse_rule(fit_args.rule, fit_args.eta);
  config.epsilon = fit_args.epsilon;
  config.max_iter = fit_args.max_iter;
  const double top = lambda_max(model, problem.y);
  SolutionPath path =
      solution_path(model, problem.y, config, fit_args.grid, fit_args.lambda_min_frac * top);
  const int nu_up = fit_args.nu_upper >= 0 ? fit_args.nu_upper : static_cast<int>(problem.n() / 2);
  TuningReport report = select_lambda(path, 0, nu_up, fit_args.bandwidth);
  std::ofstream file;
  open_output(file, output) << tuning_report_json(report).dump(2) << '\n';
  return 0;
}

int cmd_curves(const std::string& rule_name, double eta, double lambda, double t_max, int steps,
               const std::string& output) {
  const ThresholdRule rule = parse_rule(rule_name, eta);
  Eigen::VectorXd grid(steps);
  for (int i = 0; i < steps; ++i)
    grid[i] = -t_max + 2.0 * t_max * static_cast<double>(i) / (steps - 1);
  std::ofstream file;
  open_output(file, output) << curve_table_csv(curve_table(rule, lambda, grid));
  return 0;
}

struct SimulateArgs {
  std::string preset;
  Eigen::Index n = 500, p = 15, n_outliers = 50;
  double leverage = 15.0;
  bool no_leverage = false;
  double shift = 8.0;
  double rho = 0.5;
  double sigma = 1.0;
  int reps = 20;
  std::uint64_t seed = 1;
  std::string scale = "desk";
  int threads = 0;
};

// Preset names follow the simulation tables: "table1-L15-O50" is p=15,
// leverage 15, 50 outliers; "table2-..." is p=50; "-nol-" drops leverage.
SimDesign design_from_args(SimulateArgs& args) {
  if (!args.preset.empty()) {
    std::string s = args.preset;
    if (s.rfind("table1", 0) == 0)
      args.p = 15;
    else if (s.rfind("table2", 0) == 0)
      args.p = 50;
    else
      throw DomainError("unknown preset '" + s + "'");
    args.no_leverage = s.find("-nol") != std::string::npos;
    const auto lpos = s.find("-L");
    if (lpos != std::string::npos) args.leverage = std::stod(s.substr(lpos + 2));
    const auto opos = s.find("-O");
    if (opos != std::string::npos) args.n_outliers = std::stol(s.substr(opos + 2));
    args.shift = 5.0;  // the tuned-detection tables use a mean shift of 5
  }
  SimDesign design;
  design.n = args.scale == "paper" ? 1000 : args.n;
  design.p = args.p;
  design.n_outliers = args.n_outliers;
  if (!args.no_leverage) design.leverage = args.leverage;
  design.shift = args.shift;
  design.rho = args.rho;
  design.sigma = args.sigma;
  design.seed = args.seed;
  if (!args.preset.empty() && args.scale == "desk" && design.n == 1000) design.n = 500;
  return design;
}

int cmd_simulate(SimulateArgs& args, const std::string& method_rule, const std::string& tune_mode,
                 double fixed_lambda, const std::string& output, const std::string& panel_output) {
  SimDesign design = design_from_args(args);
  if (args.scale == "paper" && args.preset.rfind("table", 0) == 0) {
    design.n = 1000;
    args.reps = std::max(args.reps, 100);
  }
  MethodSpec method;
  method.rule = parse_rule(method_rule, 0.0);
  if (tune_mode == "bic")
    method.tune = TuneMode::Bic;
  else if (tune_mode == "universal")
    method.tune = TuneMode::Universal;
  else if (tune_mode.rfind("fixed:", 0) == 0) {
    method.tune = TuneMode::Fixed;
    method.fixed_lambda = std::stod(tune_mode.substr(6));
  } else {
    throw DomainError("unknown --tune mode '" + tune_mode + "'");
  }
  (void)fixed_lambda;

  DetectionMetrics metrics = run_study(design, method, args.reps, args.threads);
  nlohmann::json report = metrics_report(metrics, method_rule + "-ipod[" + tune_mode + "]");
  report["design"] = {{"n", design.n},
                      {"p", design.p},
                      {"outliers", design.n_outliers},
                      {"leverage", design.leverage ? nlohmann::json(*design.leverage) : nlohmann::json()},
                      {"shift", design.shift},
                      {"rho", design.rho},
                      {"sigma", design.sigma},
                      {"seed", design.seed},
                      {"reps", args.reps}};
  std::ofstream file;
  open_output(file, output) << report.dump(2) << '\n';

  if (!panel_output.empty()) {
    std::ofstream panel(panel_output);
    if (!panel) throw IngestError("cannot write '" + panel_output + "'");
    panel.precision(17);
    panel << "O,L,method,M,S,JD,mse\n";
    panel << design.n_outliers << ',' << (design.leverage ? *design.leverage : 0.0) << ','
          << method_rule << ',' << metrics.masking << ',' << metrics.swamping << ','
          << metrics.joint_detection << ',' << metrics.beta_mse << '\n';
  }
  return 0;
}

int cmd_bench(Eigen::Index n, Eigen::Index p, int reps, int repeats, double floor_value,
              double step, const std::string& rule_name, std::uint64_t seed,
              const std::string& output) {
  BenchOptions options;
  options.n = n;
  options.p = p;
  options.reps_per_combo = reps;
  options.timing_repeats = repeats;
  options.ladder_floor = floor_value;
  options.ladder_step = step;
  options.rule = parse_rule(rule_name, 0.0);
  options.seed = seed;
  BenchResult result = bench_timing(options);
  std::ofstream file;
  open_output(file, output) << bench_report(result).dump(2) << '\n';
  return 0;
}

int cmd_highdim(const DataArgs& data_args, double alpha, double eta, std::optional<double> lambda,
                int threads, const std::string& output, const std::string& beta_output) {
  const Dataset data = load_dataset(data_args.data, data_args.y_column);
  const Eigen::MatrixXd& x = data.X;
  const Eigen::VectorXd& y = data.y;

  HighDimFit fit;
  double lambda_used = 0.0, eta_used = eta;
  if (lambda) {
    HighDimConfig config;
    config.rule = ThresholdRule::hard_ridge(eta);
    config.lambda = lambda_used = *lambda;
    fit = fit_largep(x, y, config);
  } else {
    ScreenResult screen = proportional_screen(x, y, alpha, ThresholdRule::hard_ridge(eta));
    EtaGridOptions options;
    options.n_threads = threads;
    EtaGridResult tuned = eta_grid_tune(x, y, screen.predictors, options);
    fit = tuned.fit;
    lambda_used = tuned.lambda_star;
    eta_used = tuned.eta_selected;
  }

  std::ofstream file;
  open_output(file, output) << highdim_report(fit, lambda_used, eta_used).dump(2) << '\n';
  if (!beta_output.empty()) {
    std::ofstream bfile(beta_output);
    if (!bfile) throw IngestError("cannot write '" + beta_output + "'");
    bfile.precision(17);
    bfile << "index,value\n";
    for (Eigen::Index i : fit.support_beta) bfile << i + 1 << ',' << fit.beta[i] << '\n';
  }
  return fit.converged ? 0 : 2;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Robust regression and outlier detection via iterative thresholding"};
  app.require_subcommand(1);
  app.set_config("--config")->description("flat key=value defaults, overridden by flags");

  DataArgs data_args;
  FitArgs fit_args;
  std::string output, gamma_output, beta_output, panel_output;

  CLI::App* fit = app.add_subcommand("fit", "fit the mean-shift model on a dataset");
  add_data_options(fit, data_args);
  add_fit_options(fit, fit_args, true);
  fit->add_option("-o,--output", output, "JSON report path (default stdout)");

  CLI::App* path = app.add_subcommand("path", "trace a lambda solution path");
  add_data_options(path, data_args);
  add_fit_options(path, fit_args, false);
  path->add_option("-o,--output", output, "path CSV (default stdout)");
  path->add_option("--gamma-output", gamma_output, "companion CSV of gamma columns");

  CLI::App* tune = app.add_subcommand("tune", "select lambda by local BIC on a path");
  add_data_options(tune, data_args);
  add_fit_options(tune, fit_args, false);
  tune->add_option("-o,--output", output, "tuning report JSON (default stdout)");

  std::string curve_rule = "soft";
  double curve_eta = 0.0, curve_lambda = 1.0, curve_tmax = 5.0;
  int curve_steps = 201;
  CLI::App* curves = app.add_subcommand("curves", "tabulate Theta/psi/loss/penalty on a grid");
  curves->add_option("--rule", curve_rule)->check(CLI::IsMember({"soft", "hard", "hardridge"}));
  curves->add_option("--eta", curve_eta);
  curves->add_option("--lambda", curve_lambda);
  curves->add_option("--t-max", curve_tmax, "grid is [-t-max, t-max]");
  curves->add_option("--steps", curve_steps)->check(CLI::Range(2, 1000000));
  curves->add_option("-o,--output", output, "CSV path (default stdout)");

  SimulateArgs sim_args;
  std::string sim_rule = "hard", sim_tune = "bic";
  double sim_fixed_lambda = 0.0;
  CLI::App* simulate = app.add_subcommand("simulate", "seeded outlier-detection study");
  simulate->add_option("--preset", sim_args.preset, "e.g. table1-L15-O50 (p=15) or table2-...");
  simulate->add_option("-n", sim_args.n);
  simulate->add_option("-p", sim_args.p);
  simulate->add_option("-O,--outliers", sim_args.n_outliers);
  simulate->add_option("-L,--leverage", sim_args.leverage);
  simulate->add_flag("--no-leverage", sim_args.no_leverage);
  simulate->add_option("--shift", sim_args.shift);
  simulate->add_option("--rho", sim_args.rho);
  simulate->add_option("--sigma", sim_args.sigma);
  simulate->add_option("--reps", sim_args.reps);
  simulate->add_option("--seed", sim_args.seed);
  simulate->add_option("--scale", sim_args.scale, "desk | paper")
      ->check(CLI::IsMember({"desk", "paper"}));
  simulate->add_option("--threads", sim_args.threads, "0 = all cores");
  simulate->add_option("--rule", sim_rule)->check(CLI::IsMember({"soft", "hard", "hardridge"}));
  simulate->add_option("--tune", sim_tune, "bic | universal | fixed:<value>");
  simulate->add_option("-o,--output", output, "metrics JSON (default stdout)");
  simulate->add_option("--panel-output", panel_output, "plot-ready CSV row");

  Eigen::Index bench_n = 1000, bench_p = 100;
  int bench_reps = 10, bench_repeats = 3;
  double bench_floor = 0.5, bench_step = 0.1;
  std::string bench_rule = "hard";
  std::uint64_t bench_seed = 715;
  CLI::App* bench = app.add_subcommand("bench", "time thresholding iterations against IRLS");
  bench->add_option("-n", bench_n);
  bench->add_option("-p", bench_p);
  bench->add_option("--reps", bench_reps, "replicates per (O, L) combination");
  bench->add_option("--repeats", bench_repeats, "timing rounds (median reported)");
  bench->add_option("--floor", bench_floor, "lambda ladder floor");
  bench->add_option("--step", bench_step, "lambda ladder step");
  bench->add_option("--rule", bench_rule)->check(CLI::IsMember({"soft", "hard", "hardridge"}));
  bench->add_option("--seed", bench_seed);
  bench->add_option("-o,--output", output, "timing JSON (default stdout)");

  double hd_alpha = 0.75, hd_eta = 0.01;
  std::optional<double> hd_lambda;
  int hd_threads = 0;
  CLI::App* highdim = app.add_subcommand("highdim", "sparse coefficients + outliers when p > n");
  add_data_options(highdim, data_args);
  highdim->add_option("--alpha", hd_alpha, "screening proportion");
  highdim->add_option("--eta", hd_eta, "hard-ridge weight for screening");
  highdim->add_option("--lambda", hd_lambda, "skip tuning; fit at this lambda");
  highdim->add_option("--threads", hd_threads, "0 = all cores");
  highdim->add_option("-o,--output", output, "fit JSON (default stdout)");
  highdim->add_option("--beta-output", beta_output, "sparse beta CSV (index,value)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (fit->parsed()) return cmd_fit(data_args, fit_args, output);
    if (path->parsed()) return cmd_path(data_args, fit_args, output, gamma_output);
    if (tune->parsed()) return cmd_tune(data_args, fit_args, output);
    if (curves->parsed())
      return cmd_curves(curve_rule, curve_eta, curve_lambda, curve_tmax, curve_steps, output);
    if (simulate->parsed())
      return cmd_simulate(sim_args, sim_rule, sim_tune, sim_fixed_lambda, output, panel_output);
    if (bench->parsed())
      return cmd_bench(bench_n, bench_p, bench_reps, bench_repeats, bench_floor, bench_step,
                       bench_rule, bench_seed, output);
    if (highdim->parsed())
      return cmd_highdim(data_args, hd_alpha, hd_eta, hd_lambda, hd_threads, output, beta_output);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace ipod::cli
