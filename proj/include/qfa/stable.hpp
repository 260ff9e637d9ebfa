#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "qfa/acceleration.hpp"
#include "qfa/distributions.hpp"
#include "qfa/series.hpp"

namespace qfa {

// P2 <-> P1. alpha = 1 is rejected; at alpha = 2 the skewness is erased.
StableParams stable_convert(const StableParams& p, StableParametrization to);

struct StableSeriesPair {
  PowerSeries central;  // F(x) = sum f_n/n! x^n about x = 0
  PowerSeries tail;     // G(y) = sum ft_n/n! y^n, y = x^{-alpha}
  double u0 = 0.5;
  bool central_convergent = false;  // alpha > 1
  bool tail_convergent = false;     // alpha < 1
};

// Standard form (mu2 = 0, sigma2 = 1) only uses alpha and beta2.
StableSeriesPair stable_cdf_coeffs(const StableParams& p, int N);

// Extended-precision evaluator of both series for x >= 0. The convergent side
// is summed in 50 or 100 digit arithmetic (the terms grow large before they
// decay); the asymptotic side is used, optimally truncated, where its smallest
// term is negligible.
class StableCdfSeries {
 public:
  StableCdfSeries(double alpha, double beta2);
  ~StableCdfSeries();

  double u0() const { return u0_; }
  // (F(x), 1 - F(x)) for x >= 0.
  std::pair<double, double> cdf_pos(double x) const;
  double pdf_pos(double x) const;

  // Partial sums of the central series in double precision (diagnostics).
  std::vector<double> central_partial_sums(double x, int n) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  double u0_;
};

// Standard-form CDF by the series route only (no closed forms).
double stable_cdf_series(const StableParams& p, double x);
// CDF with location and scale; alpha = 2 and the symmetric alpha = 1 case use
// their closed forms.
double stable_cdf(const StableParams& p, double x);

// Quantile series about u0 in (u - u0), from reverting the central CDF series.
PowerSeries stable_quantile_central(const StableParams& p, int N);

// G^{-1} as a series in (u - 1); Q(u) = [G^{-1}(u)]^{-1/alpha}.
struct StableTailQuantile {
  PowerSeries ginv;
  double alpha = 1.0;
  double operator()(double u) const;  // optimally truncated
};
StableTailQuantile stable_quantile_tail(const StableParams& p, int N);

// Series dispatcher with reflection about u0 and a root-finding fallback.
// Central Pade of the reverted series for |u - u0| <= 0.7 r, tail series for
// u >= 0.995; a series value is kept only if it reproduces u to 1e-12.
class StableQuantileFunction {
 public:
  explicit StableQuantileFunction(const StableParams& p);
  ~StableQuantileFunction();
  double u0() const;
  double operator()(double u) const;

 private:
  struct Side;
  StableParams p_;
  std::unique_ptr<Side> pos_, neg_;
};

double stable_quantile(const StableParams& p, double u);

}  // namespace qfa
