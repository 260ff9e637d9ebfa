#pragma once

#include <utility>
#include <vector>

#include "qfa/series.hpp"

namespace qfa {

enum class Basis { monomial, chebyshev };

// P(t)/Q(t) with t = (x - center) / scale.
// Monomial basis: P = sum numer[k] t^k. Chebyshev basis: P = sum numer[k] T_k(t).
// The denominator is normalized so that denom[0] = 1.
struct RationalApproximant {
  Basis basis = Basis::monomial;
  std::vector<double> numer;
  std::vector<double> denom;
  double center = 0.0;
  double scale = 1.0;
  double lo = 0.0, hi = 0.0;  // validity interval in x

  int m() const { return static_cast<int>(numer.size()) - 1; }
  int n() const { return static_cast<int>(denom.size()) - 1; }
  double operator()(double x) const;
  // True when the denominator vanishes or changes sign on [lo, hi].
  bool has_defect(int samples = 512) const;
};

// f(x) = c[0]/2 + sum_{k>=1} c[k] T_k(t), t = (2x - a - b) / (b - a).
struct ChebyshevSeries {
  double a = -1.0, b = 1.0;
  std::vector<double> coeffs;
  double error_estimate = 0.0;

  double operator()(double x) const;
  ChebyshevSeries truncated(int K) const;
};

double clenshaw(const std::vector<double>& c, double t);  // sum c[k] T_k(t)

struct Acceleration {
  double value;
  double error;      // estimate
  bool accelerated;  // false when the guard fell back to the raw partial sum
};

// Levin u-transform (beta = 1) over the full sequence of partial sums.
double levin_u(const std::vector<double>& partial_sums);
Acceleration levin_u_guarded(const std::vector<double>& partial_sums);
double wynn_epsilon(const std::vector<double>& partial_sums);

// Sum through the smallest-magnitude term; returns (terms used, sum).
std::pair<int, double> optimal_truncation(const std::vector<double>& terms);

// [m/n] Pade approximant of a Taylor series. The rational is expressed in the
// scaled variable t = (x - center)/scale; scale <= 0 picks one from the
// coefficient growth. If [lo, hi] is nonempty, denominators with a root there
// are rejected by degrading to (m+1, n-1).
RationalApproximant pade_from_taylor(const PowerSeries& ts, int m, int n, double lo = 0.0,
                                     double hi = 0.0, double scale = 0.0);

// Chebyshev coefficients on [a, b] of a Taylor series (monomial-to-Chebyshev
// conversion, inner sums accelerated when they converge slowly). radius <= 0
// uses the Cauchy-Hadamard estimate.
ChebyshevSeries chebyshev_from_taylor(const PowerSeries& ts, double a, double b, int K,
                                      double radius = 0.0);

// Linearized Chebyshev-Pade: Q f - P has vanishing Chebyshev coefficients
// through index m+n. Needs coefficients through m+2n.
RationalApproximant chebyshev_pade(const ChebyshevSeries& cheb, int m, int n);

}  // namespace qfa
