// ipod: outlier detection and robust regression via iterative thresholding
// Copyright 2026 The ipod Authors
// Licensed under the Apache License, Version 2.0

#include "ipod/threshold.hpp"

#include <cmath>
#include <sstream>

#include "ipod/errors.hpp"

namespace ipod {

namespace {

void check_params(const ThresholdRule& rule, double lambda) {
  if (!(lambda >= 0.0)) throw DomainError("lambda must be nonnegative, got " + std::to_string(lambda));
  if (rule.kind == RuleKind::HardRidge && !(rule.eta >= 0.0))
    throw DomainError("eta must be nonnegative, got " + std::to_string(rule.eta));
}

}  // namespace

std::string ThresholdRule::name() const {
  switch (kind) {
    case RuleKind::Soft: return "soft";
    case RuleKind::Hard: return "hard";
    case RuleKind::HardRidge: return "hardridge";
  }
  return "?";
}

ThresholdRule parse_rule(const std::string& name, double eta) {
  if (name == "soft") return ThresholdRule::soft();
  if (name == "hard") return ThresholdRule::hard();
  if (name == "hardridge") return ThresholdRule::hard_ridge(eta);
  throw DomainError("unknown threshold rule '" + name + "' (want soft|hard|hardridge)");
}

double apply(const ThresholdRule& rule, double t, double lambda) {
  check_params(rule, lambda);
  const double a = std::abs(t);
  switch (rule.kind) {
    case RuleKind::Soft:
      return a <= lambda ? 0.0 : t - (t > 0 ? lambda : -lambda);
    case RuleKind::Hard:
      return a <= lambda ? 0.0 : t;
    case RuleKind::HardRidge:
      return a < lambda ? 0.0 : t / (1.0 + rule.eta);
  }
  return 0.0;
}

Eigen::VectorXd apply_vec(const ThresholdRule& rule, const Eigen::VectorXd& t,
                          const Eigen::VectorXd& lambda) {
  if (lambda.size() == 1) return apply_vec(rule, t, lambda[0]);
  if (lambda.size() != t.size())
    throw DimensionError("apply_vec: t has " + std::to_string(t.size()) + " entries, lambda has " +
                         std::to_string(lambda.size()));
  Eigen::VectorXd out(t.size());
  for (Eigen::Index i = 0; i < t.size(); ++i) out[i] = apply(rule, t[i], lambda[i]);
  return out;
}

Eigen::VectorXd apply_vec(const ThresholdRule& rule, const Eigen::VectorXd& t, double lambda) {
  Eigen::VectorXd out(t.size());
  for (Eigen::Index i = 0; i < t.size(); ++i) out[i] = apply(rule, t[i], lambda);
  return out;
}

double psi(const ThresholdRule& rule, double t, double lambda) {
  return t - apply(rule, t, lambda);
}

Eigen::VectorXd psi_vec(const ThresholdRule& rule, const Eigen::VectorXd& t,
                        const Eigen::VectorXd& lambda) {
  return t - apply_vec(rule, t, lambda);
}

double theta_inverse(const ThresholdRule& rule, double u, double lambda) {
  check_params(rule, lambda);
  if (!(u >= 0.0)) throw DomainError("theta_inverse needs u >= 0, got " + std::to_string(u));
  switch (rule.kind) {
    case RuleKind::Soft:
      return u + lambda;
    case RuleKind::Hard:
      return std::max(u, lambda);
    case RuleKind::HardRidge: {
      const double unshrunk = u * (1.0 + rule.eta);
      return unshrunk >= lambda ? unshrunk : lambda;
    }
  }
  return 0.0;
}

double penalty(const PenaltyForm& form, double theta, double lambda) {
  const ThresholdRule& rule = form.rule;
  check_params(rule, lambda);
  const double a = std::abs(theta);
  if (form.variant == PenaltyVariant::AlternativeL0) {
    switch (rule.kind) {
      case RuleKind::Soft:
        throw UnsupportedVariantError("the soft rule has no L0-style penalty");
      case RuleKind::Hard:
        return theta != 0.0 ? 0.5 * lambda * lambda : 0.0;
      case RuleKind::HardRidge:
        return (theta != 0.0 ? 0.5 * lambda * lambda / (1.0 + rule.eta) : 0.0) +
               0.5 * rule.eta * theta * theta;
    }
  }
  switch (rule.kind) {
    case RuleKind::Soft:
      return lambda * a;
    case RuleKind::Hard:
      return a < lambda ? lambda * a - 0.5 * a * a : 0.5 * lambda * lambda;
    case RuleKind::HardRidge: {
      const double knee = lambda / (1.0 + rule.eta);
      if (a < knee) return lambda * a - 0.5 * a * a;
      return 0.5 * rule.eta * a * a + 0.5 * lambda * lambda / (1.0 + rule.eta);
    }
  }
  return 0.0;
}

double penalty_numeric(const ThresholdRule& rule, double theta, double lambda, int quad_steps) {
  check_params(rule, lambda);
  if (quad_steps < 100) throw DomainError("penalty_numeric needs quad_steps >= 100");
  const double a = std::abs(theta);
  if (a == 0.0) return 0.0;
  const double h = a / quad_steps;
  auto s = [&](double u) { return theta_inverse(rule, u, lambda) - u; };
  double sum = 0.5 * (s(0.0) + s(a));
  for (int k = 1; k < quad_steps; ++k) sum += s(k * h);
  return sum * h;
}

std::vector<CurveRow> curve_table(const ThresholdRule& rule, double lambda,
                                  const Eigen::VectorXd& grid) {
  check_params(rule, lambda);
  for (Eigen::Index i = 0; i < grid.size(); ++i)
    if (!std::isfinite(grid[i])) throw DomainError("curve_table grid must be finite");

  // loss(t) = integral of psi from 0 to t, evaluated per point so the column
  // does not depend on grid ordering or spacing.
  auto loss_at = [&](double t) {
    const int steps = 512;
    if (t == 0.0) return 0.0;
    const double h = t / steps;
    double sum = 0.5 * (psi(rule, 0.0, lambda) + psi(rule, t, lambda));
    for (int k = 1; k < steps; ++k) sum += psi(rule, k * h, lambda);
    return sum * h;
  };

  std::vector<CurveRow> rows;
  rows.reserve(static_cast<std::size_t>(grid.size()));
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    rows.push_back({t, apply(rule, t, lambda), psi(rule, t, lambda), loss_at(t),
                    penalty(rule, t, lambda)});
  }
  return rows;
}

std::string curve_table_csv(const std::vector<CurveRow>& rows) {
  std::ostringstream out;
  out.precision(17);
  out << "t,theta,psi,loss,penalty\n";
  for (const auto& r : rows)
    out << r.t << ',' << r.theta << ',' << r.psi << ',' << r.loss << ',' << r.penalty << '\n';
  return out.str();
}

}  // namespace ipod
