// ipod: outlier detection and robust regression via iterative thresholding
// Copyright 2026 The ipod Authors
// Licensed under the Apache License, Version 2.0

#include "ipod/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "ipod/errors.hpp"
#include "ipod/mest.hpp"
#include "ipod/parallel.hpp"
#include "ipod/tune.hpp"

namespace ipod {

namespace {

void validate(const SimDesign& design) {
  if (design.n_outliers >= design.n) throw DomainError("sim design needs O < n");
  if (design.p >= design.n) throw DomainError("sim design needs p < n");
  if (!(design.rho >= 0.0 && design.rho < 1.0)) throw DomainError("sim design needs 0 <= rho < 1");
}

}  // namespace

Eigen::MatrixXd gen_design(const SimDesign& design) {
  CounterRng rng(design.seed, 0);
  return gen_design(design, rng);
}

Eigen::MatrixXd gen_design(const SimDesign& design, CounterRng& rng) {
  validate(design);
  const Eigen::Index n = design.n, p = design.p;
  Eigen::MatrixXd u(n, p);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p; ++j) u(i, j) = rng.uniform(-15.0, 15.0);

  // Sigma = (1-rho) I + rho 1 1' has the closed-form square root a I + b 1 1'
  // with a = sqrt(1-rho) and b = (sqrt(1-rho+p rho) - a) / p.
  const double a = std::sqrt(1.0 - design.rho);
  const double b = (std::sqrt(1.0 - design.rho + design.rho * static_cast<double>(p)) - a) /
                   static_cast<double>(p);
  Eigen::MatrixXd x = a * u;
  if (design.rho > 0.0) {
    const Eigen::VectorXd row_sums = u.rowwise().sum();
    x.colwise() += b * row_sums;
  }

  if (design.leverage) {
    for (Eigen::Index i = 0; i < design.n_outliers; ++i) x.row(i).setConstant(*design.leverage);
  }
  return x;
}

Eigen::VectorXd gen_response(const Eigen::MatrixXd& X, const SimDesign& design) {
  CounterRng rng(design.seed, 1);
  return gen_response(X, design, rng);
}

Eigen::VectorXd gen_response(const Eigen::MatrixXd& X, const SimDesign& design, CounterRng& rng) {
  validate(design);
  Eigen::VectorXd y(X.rows());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double gamma_i = i < design.n_outliers ? design.shift : 0.0;
    y[i] = gamma_i + design.sigma * rng.normal();
  }
  return y;
}

ReplicateScore score_detection(const std::vector<Eigen::Index>& flagged,
                               const std::vector<Eigen::Index>& truth, Eigen::Index n) {
  if (truth.empty()) throw DomainError("score_detection: empty truth set (masking undefined)");
  for (Eigen::Index i : truth)
    if (i < 0 || i >= n) throw DomainError("score_detection: truth index out of range");
  for (Eigen::Index i : flagged)
    if (i < 0 || i >= n) throw DomainError("score_detection: flagged index out of range");

  const std::set<Eigen::Index> flagged_set(flagged.begin(), flagged.end());
  const std::set<Eigen::Index> truth_set(truth.begin(), truth.end());
  Eigen::Index masked = 0;
  for (Eigen::Index i : truth_set)
    if (!flagged_set.count(i)) ++masked;
  Eigen::Index swamped = 0;
  for (Eigen::Index i : flagged_set)
    if (!truth_set.count(i)) ++swamped;

  ReplicateScore score;
  score.masking = static_cast<double>(masked) / static_cast<double>(truth_set.size());
  const Eigen::Index n_good = n - static_cast<Eigen::Index>(truth_set.size());
  score.swamping = n_good > 0 ? static_cast<double>(swamped) / static_cast<double>(n_good) : 0.0;
  score.fully_detected = masked == 0;
  return score;
}

ReplicateFit run_replicate(const SimDesign& design, const MethodSpec& method,
                           std::uint64_t replicate) {
  CounterRng master(design.seed);
  CounterRng rng = master.spawn(replicate);
  SimDesign local = design;
  local.seed = design.seed;  // streams come from `rng`, field kept for reports

  const Eigen::MatrixXd x_raw = gen_design(local, rng);
  const Eigen::VectorXd y = gen_response(x_raw, local, rng);
  const RegressionProblem problem = RegressionProblem::make(x_raw, y, true);
  const QrModel model(problem);

  PilotEstimate pilot;
  switch (method.pilot) {
    case PilotMethod::LtsLite:
      pilot = lts_lite(problem, LtsOptions{}, design.seed * 0x9e37ULL + replicate, 1);
      break;
    case PilotMethod::Zero:
    case PilotMethod::UserSupplied:
      pilot = zero_pilot(problem);
      break;
  }
  const Eigen::VectorXd gamma0 = problem.y - problem.X * pilot.beta0;

  IpodConfig config;
  config.rule = method.rule;
  config.epsilon = method.epsilon;
  config.max_iter = method.max_iter;
  config.leverage_weighting = true;

  ReplicateFit out;
  IpodFit fit;
  switch (method.tune) {
    case TuneMode::Bic: {
      const double lam_top = lambda_max(model, problem.y);
      SolutionPath path = solution_path(model, problem.y, config, method.path_grid,
                                        method.path_lambda_min_frac * lam_top);
      TuningReport report =
          select_lambda(path, 0, static_cast<int>(problem.n() / 2), method.bandwidth_frac);
      config.lambda = report.selected_lambda;
      fit = fit_simplified(model, problem.y, config, gamma0);
      out.selected_lambda = report.selected_lambda;
      break;
    }
    case TuneMode::Universal: {
      const Eigen::VectorXd lambda_vec = universal_lambda(pilot.sigma0, model);
      fit = fit_simplified(model, problem.y, config, gamma0, lambda_vec);
      out.selected_lambda = pilot.sigma0 * std::sqrt(2.0 * std::log(static_cast<double>(problem.n())));
      break;
    }
    case TuneMode::Fixed: {
      config.lambda = method.fixed_lambda * (method.scale_by_sigma0 ? pilot.sigma0 : 1.0);
      fit = fit_simplified(model, problem.y, config, gamma0);
      out.selected_lambda = config.lambda;
      break;
    }
  }
  out.flagged = fit.outliers;
  out.beta = fit.beta;
  out.converged = fit.converged;
  return out;
}

DetectionMetrics run_study(const SimDesign& design, const MethodSpec& method, int reps,
                           int n_threads) {
  if (reps < 1) throw DomainError("run_study needs reps >= 1");
  validate(design);

  std::vector<Eigen::Index> truth(static_cast<std::size_t>(design.n_outliers));
  for (std::size_t i = 0; i < truth.size(); ++i) truth[i] = static_cast<Eigen::Index>(i);

  struct RepOutcome {
    ReplicateScore score;
    double beta_sq = 0.0;
    bool failed = false;
  };
  std::vector<RepOutcome> outcomes(static_cast<std::size_t>(reps));

  parallel_for(outcomes.size(), n_threads, [&](std::size_t r) {
    try {
      const ReplicateFit fit = run_replicate(design, method, r);
      outcomes[r].score = score_detection(fit.flagged, truth, design.n);
      outcomes[r].beta_sq = fit.beta.squaredNorm();  // true beta = 0
    } catch (const std::exception&) {
      outcomes[r].failed = true;
    }
  });

  DetectionMetrics metrics;
  metrics.reps = reps;
  int ok = 0;
  for (const RepOutcome& o : outcomes) {  // fixed order: reproducible sums
    if (o.failed) {
      ++metrics.failures;
      continue;
    }
    ++ok;
    metrics.masking += o.score.masking;
    metrics.swamping += o.score.swamping;
    metrics.joint_detection += o.score.fully_detected ? 1.0 : 0.0;
    metrics.beta_mse += o.beta_sq;
  }
  if (ok > 0) {
    metrics.masking /= ok;
    metrics.swamping /= ok;
    metrics.joint_detection /= ok;
    metrics.beta_mse /= ok;
  }
  return metrics;
}

BenchResult bench_timing(const BenchOptions& options) {
  using clock = std::chrono::steady_clock;
  struct Combo {
    Eigen::Index n_outliers;
    std::optional<double> leverage;
  };
  std::vector<Combo> combos;
  for (double leverage : {15.0, 20.0, 30.0})
    for (Eigen::Index o : {5, 10, 20}) combos.push_back({o, leverage});
  for (Eigen::Index o : {5, 10, 20}) combos.push_back({o, std::nullopt});

  struct Dataset {
    QrModel model;
    RegressionProblem problem;
    std::vector<double> ladder;
  };
  // Datasets are deterministic in (combo, rep), so each timing round sees
  // identical inputs without holding all of them in memory at once.
  auto make_dataset = [&](std::size_t ci, int rep) {
    SimDesign design;
    design.n = options.n;
    design.p = options.p;
    design.n_outliers = combos[ci].n_outliers;
    design.leverage = combos[ci].leverage;
    design.shift = 8.0;
    design.sigma = 1.0;
    design.seed = options.seed;
    CounterRng rng = CounterRng(options.seed).spawn(ci * 1000 + static_cast<std::uint64_t>(rep));
    Eigen::MatrixXd x = gen_design(design, rng);
    Eigen::VectorXd y = gen_response(x, design, rng);
    RegressionProblem problem;
    problem.X = std::move(x);
    problem.y = std::move(y);
    problem.intercept = false;
    QrModel model(problem);
    std::vector<double> ladder;
    for (double lam = lambda_max(model, problem.y); lam >= options.ladder_floor - 1e-12;
         lam -= options.ladder_step)
      ladder.push_back(lam);
    return Dataset{std::move(model), std::move(problem), std::move(ladder)};
  };

  auto time_ipod = [&](const Dataset& ds, BenchResult& result) {
    IpodConfig config;
    config.rule = options.rule;
    config.epsilon = options.epsilon;
    config.max_iter = options.max_iter;
    Eigen::VectorXd gamma = Eigen::VectorXd::Zero(ds.model.n());
    const auto t0 = clock::now();
    for (double lam : ds.ladder) {
      config.lambda = lam;
      IpodFit fit = fit_simplified(ds.model, ds.problem.y, config, gamma);
      gamma = fit.gamma;
      result.ipod_iterations += fit.n_iter;
    }
    result.ipod_seconds += std::chrono::duration<double>(clock::now() - t0).count();
  };

  auto time_irls = [&](const Dataset& ds, BenchResult& result) {
    IrlsConfig config;
    config.rule = options.rule;
    config.sigma = 1.0;
    config.epsilon = options.epsilon;
    config.max_iter = options.max_iter;
    const Eigen::VectorXd base_lambda = (1.0 - ds.model.leverages().array()).max(0.0).sqrt();
    Eigen::VectorXd beta = ds.model.ols_coef(ds.problem.y);
    const auto t0 = clock::now();
    for (double lam : ds.ladder) {
      config.lambda = lam;
      try {
        IrlsFit fit = irls_fit(ds.problem, config, beta, base_lambda * lam);
        beta = fit.beta;
        result.irls_iterations += fit.n_iter;
      } catch (const SingularWlsError&) {
        ++result.irls_singular_events;  // logged, not fatal; keep the last beta
      }
    }
    result.irls_seconds += std::chrono::duration<double>(clock::now() - t0).count();
  };

  {
    // Warm-up pass, discarded.
    BenchResult scratch;
    const Dataset warm = make_dataset(0, 0);
    time_ipod(warm, scratch);
    time_irls(warm, scratch);
  }

  std::vector<BenchResult> rounds(static_cast<std::size_t>(std::max(1, options.timing_repeats)));
  int ladder_points = 0, n_datasets = 0;
  for (std::size_t round = 0; round < rounds.size(); ++round) {
    for (std::size_t ci = 0; ci < combos.size(); ++ci) {
      for (int rep = 0; rep < options.reps_per_combo; ++rep) {
        const Dataset ds = make_dataset(ci, rep);
        time_ipod(ds, rounds[round]);
        time_irls(ds, rounds[round]);
        if (round == 0) {
          ladder_points += static_cast<int>(ds.ladder.size());
          ++n_datasets;
        }
      }
    }
  }
  std::sort(rounds.begin(), rounds.end(),
            [](const BenchResult& a, const BenchResult& b) { return a.ipod_seconds < b.ipod_seconds; });
  BenchResult result = rounds[rounds.size() / 2];
  result.ladder_points = ladder_points;
  result.datasets = n_datasets;
  return result;
}

}  // namespace ipod
