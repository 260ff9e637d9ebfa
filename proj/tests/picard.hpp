#pragma once

#include <functional>

#include "qfa/series.hpp"

// Test oracle: Taylor solution of y' = G(x, y), y(x0) = y0 by Picard
// iteration on truncated series. Each sweep fixes one more coefficient.
inline qfa::PowerSeries picard(double x0, double y0, int N,
                               const std::function<qfa::PowerSeries(const qfa::PowerSeries&,
                                                                    const qfa::PowerSeries&)>& G) {
  using qfa::PowerSeries;
  const PowerSeries x = PowerSeries::identity(x0, N);
  PowerSeries y = PowerSeries::constant(x0, y0, N);
  for (int it = 0; it <= N; ++it) {
    const PowerSeries g = G(x, y);
    PowerSeries next = PowerSeries::constant(x0, y0, N);
    for (int n = 1; n <= N; ++n) next.coeffs[n] = g[n - 1] / n;
    y = next;
  }
  return y;
}

// sqrt(1 + y^2) as a series.
inline qfa::PowerSeries sqrt1p_sq(const qfa::PowerSeries& y) {
  using namespace qfa;
  return ps_pow_real(ps_add(PowerSeries::constant(y.center, 1.0, y.order()), ps_mul(y, y)), 0.5);
}
