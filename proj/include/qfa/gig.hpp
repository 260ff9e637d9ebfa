#pragma once

#include <vector>

#include "qfa/base.hpp"
#include "qfa/distributions.hpp"
#include "qfa/series.hpp"
#include "qfa/tail.hpp"

namespace qfa {

// Standardized variable (eta = 1) throughout; Q(u) = eta Q_std(u).

PowerSeries gig_taylor_coeffs(const GIGParams& p, double u0, double x0, int N);

// b_0..b_K of 1 - F(x) ~ x^{lambda-1} e^{-omega x/2} sum_k b_k x^{-k} / (2 K_lambda(omega)).
std::vector<double> gig_cdf_tail_coeffs(const GIGParams& p, int K);

// Left tail from Q(u; lambda) = 1/Q(1 - u; -lambda).
TailExpansion gig_tail_expansion(const GIGParams& p, Side side, int N);

// Inverse-exponential left branch, exponential right branch, both with rate
// omega/2, split at the mode.
BaseDistribution gig_base(const GIGParams& p);

PowerSeries gig_recycle_coeffs(const GIGParams& p, Side side, double u0, int N);
PowerSeries gig_recycle_coeffs(const GIGParams& p, const BaseDistribution& base, Side side,
                               double u0, double x0, int N);

double gig_log_pdf_std(const GIGParams& p, double x);

}  // namespace qfa
