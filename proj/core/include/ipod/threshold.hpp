// ipod: outlier detection and robust regression via iterative thresholding
// Copyright 2026 The ipod Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace ipod {

/// A thresholding rule Theta(t; lambda): odd, monotone nondecreasing,
/// unbounded, with 0 <= Theta(t) <= t for t >= 0.  Soft subtracts lambda,
/// hard zeroes below lambda and keeps above, hard-ridge zeroes below lambda
/// and shrinks by 1/(1+eta) above.
///
/// Boundary convention at |t| = lambda: soft and hard return 0, hard-ridge
/// returns t/(1+eta).  The closed-form inverses and penalties below depend on
/// this convention, so it is fixed here rather than left to the caller.
enum class RuleKind { Soft, Hard, HardRidge };

struct ThresholdRule {
  RuleKind kind = RuleKind::Hard;
  double eta = 0.0;  // ridge weight, HardRidge only

  static ThresholdRule soft() { return {RuleKind::Soft, 0.0}; }
  static ThresholdRule hard() { return {RuleKind::Hard, 0.0}; }
  static ThresholdRule hard_ridge(double eta) { return {RuleKind::HardRidge, eta}; }

  std::string name() const;
};

ThresholdRule parse_rule(const std::string& name, double eta);

/// Penalty induced by a rule through the construction
///   P(theta; lambda) = integral_0^|theta| (ThetaInverse(u) - u) du.
/// Canonical is that integral in closed form.  AlternativeL0 is the
/// L0-flavoured variant that differs from Canonical by a nonnegative term
/// vanishing on the range of Theta; it exists for Hard and HardRidge only.
enum class PenaltyVariant { Canonical, AlternativeL0 };

struct PenaltyForm {
  ThresholdRule rule;
  PenaltyVariant variant = PenaltyVariant::Canonical;
};

double apply(const ThresholdRule& rule, double t, double lambda);

Eigen::VectorXd apply_vec(const ThresholdRule& rule, const Eigen::VectorXd& t,
                          const Eigen::VectorXd& lambda);
Eigen::VectorXd apply_vec(const ThresholdRule& rule, const Eigen::VectorXd& t, double lambda);

/// psi(t) = t - Theta(t): the score function of the associated M-estimator.
double psi(const ThresholdRule& rule, double t, double lambda);
Eigen::VectorXd psi_vec(const ThresholdRule& rule, const Eigen::VectorXd& t,
                        const Eigen::VectorXd& lambda);

/// Generalized inverse sup{t : Theta(t) <= u}, defined for u >= 0.
double theta_inverse(const ThresholdRule& rule, double u, double lambda);

double penalty(const PenaltyForm& form, double theta, double lambda);
inline double penalty(const ThresholdRule& rule, double theta, double lambda) {
  return penalty(PenaltyForm{rule, PenaltyVariant::Canonical}, theta, lambda);
}

/// Trapezoid quadrature of the defining integral; oracle for the closed forms.
double penalty_numeric(const ThresholdRule& rule, double theta, double lambda, int quad_steps);

struct CurveRow {
  double t;
  double theta;
  double psi;
  double loss;     // integral of psi from 0 to t
  double penalty;  // canonical P(t; lambda)
};

std::vector<CurveRow> curve_table(const ThresholdRule& rule, double lambda,
                                  const Eigen::VectorXd& grid);

/// CSV with header "t,theta,psi,loss,penalty".
std::string curve_table_csv(const std::vector<CurveRow>& rows);

}  // namespace ipod
