#pragma once

#include "qfa/distributions.hpp"

namespace qfa {

// Two-branch base distribution split at the cutoff x_m with F_B(x_m) = p_m.
//   left, exponential:  F_B = p_m exp(r_L (x - x_m))
//   left, inverse:      F_B = p_m exp(-r_L (1/x - 1/x_m))       (x > 0)
//   right:          1 - F_B = (1 - p_m) exp(-r_R (x - x_m))
// Each branch formula is also usable beyond its own half (the recycling maps
// z = Q_B(u) are built from one branch).
struct BaseDistribution {
  enum class LeftKind { exponential, inverse };

  LeftKind left_kind = LeftKind::exponential;
  double x_m = 0.0, p_m = 0.5;
  double left_rate = 1.0, right_rate = 1.0;

  double pdf(double x) const;
  double log_pdf(double x) const;
  double cdf(double x) const;
  double sf(double x) const;
  double quantile(double u) const;
  // Q_B(1 - v), accurate for small v.
  double quantile_upper(double v) const;

  // Single-branch versions.
  double log_pdf_branch(Side s, double x) const;
  double cdf_branch(Side s, double x) const;  // for the right branch this is 1 - F_B
  double quantile_branch(Side s, double u) const;
  // Right branch from the upper mass v = 1 - u.
  double quantile_branch_upper(double v) const;

  // Branch weights as written for the densities: p_- (or p_L) and p_+ (or p_R).
  double left_weight() const;
  double right_weight() const;
};

}  // namespace qfa
