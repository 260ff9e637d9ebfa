#pragma once

#include <vector>

#include "qfa/base.hpp"
#include "qfa/distributions.hpp"
#include "qfa/series.hpp"
#include "qfa/tail.hpp"

namespace qfa {

// Standardized variable (mu = 0) throughout; Q(u) = mu + Q_std(u).

// Derivatives at x0 of g = 1/f = N0 a b c with a = e^{-beta y},
// b = |y|^{1/2-lambda}, c = 1/K_{lambda-1/2}(alpha |y|).
struct VGDerivativeTable {
  double x0 = 0.0;
  std::vector<double> g, a, b, c;  // n-th derivatives, n = 0..N
};

VGDerivativeTable vg_g_derivatives(const VGParams& p, double x0, int N);

PowerSeries vg_taylor_coeffs(const VGParams& p, double u0, double x0, int N);

// b_0..b_K of 1 - F(x) ~ C x^{lambda-1} e^{-(alpha-beta) x} sum_k b_k x^{-k},
// C = (2 alpha)^{-lambda} gamma^{2 lambda} / Gamma(lambda).
std::vector<double> vg_cdf_tail_coeffs(const VGParams& p, int K);

TailExpansion vg_tail_expansion(const VGParams& p, Side side, int N);

// Two-sided exponential split at 0 with p_- = F(0).
BaseDistribution vg_base(const VGParams& p);

PowerSeries vg_recycle_coeffs(const VGParams& p, Side side, double u0, int N);
PowerSeries vg_recycle_coeffs(const VGParams& p, const BaseDistribution& base, Side side,
                              double u0, double x0, int N);

double vg_log_pdf_std(const VGParams& p, double x);

}  // namespace qfa
