#pragma once

#include <vector>

#include "qfa/base.hpp"
#include "qfa/distributions.hpp"
#include "qfa/series.hpp"
#include "qfa/tail.hpp"

namespace qfa {

// Everything here works in the standardized variable (delta = 1, mu = 0);
// Q(u) = mu + delta Q_std(u).

// Taylor series of Q_std about u0 with Q_std(u0) = x0.
PowerSeries hyp_taylor_coeffs(const HypParams& p, double u0, double x0, int N);

// Q ~ y + sum_{n>=1} q_n / y^n as u -> 1 (right) or u -> 0 (left, by
// reflection beta1 -> -beta1).
struct HypTailSeries {
  std::vector<double> q;  // q[0] = 0
  Side side = Side::right;
  double alpha1 = 0.0, beta1 = 0.0;  // after reflection for the left side
  double n0 = 0.0;

  // y from the tail mass (1 - u or u).
  double y(double w) const;
  TailExpansion expansion() const;
  double operator()(double u) const;
};

HypTailSeries hyp_tail_coeffs(const HypParams& p, Side side, int N);

// Two-sided exponential base split at the mode, standardized.
BaseDistribution hyp_base(const HypParams& p);

// Taylor series of A about z0 = Q_B(u0) for the recycling map Q = A o Q_B.
PowerSeries hyp_recycle_coeffs(const HypParams& p, Side side, double u0, int N);
// Same, with the base and x0 = Q_std(u0) supplied.
PowerSeries hyp_recycle_coeffs(const HypParams& p, const BaseDistribution& base, Side side,
                               double u0, double x0, int N);

// ln f_std(x)
double hyp_log_pdf_std(const HypParams& p, double x);

}  // namespace qfa
