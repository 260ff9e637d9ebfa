#include "qfa/special.hpp"

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cfloat>
#include <cmath>
#include <numbers>

#include "qfa/errors.hpp"

namespace qfa {

namespace {

double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

// K_{n+1/2}(z) = sqrt(pi/(2z)) e^{-z} sum_k (n+k)! / (k! (n-k)! (2z)^k)
double log_bessel_k_half_integer(int n, double z) {
  double lt = 0.0, lsum = 0.0;
  for (int k = 0; k < n; ++k) {
    lt += std::log(static_cast<double>(n + k + 1) * (n - k)) - std::log((k + 1) * 2.0 * z);
    lsum = log_add(lsum, lt);
  }
  return 0.5 * std::log(std::numbers::pi / (2.0 * z)) - z + lsum;
}

}  // namespace

double log_bessel_k(double v, double z) {
  if (!(z > 0.0) || !std::isfinite(z)) throw ParameterError("bessel_k: requires z > 0");
  v = std::abs(v);
  if (v <= 60.0 && v - std::floor(v) == 0.5)
    return log_bessel_k_half_integer(static_cast<int>(std::floor(v)), z);

  // K_v(z) = e^{-z} (1/2) int_R exp(-2z sinh^2(t/2) + v t) dt. The integrand
  // decays double-exponentially, so the trapezoidal rule converges
  // geometrically in 1/h; h is tied to the peak curvature sqrt(z^2 + v^2).
  auto phi = [&](double t) {
    const double s = std::sinh(0.5 * t);
    return -2.0 * z * s * s + v * t;
  };
  const double ts = std::asinh(v / z);
  const double ps = phi(ts);
  const double h = std::min(0.25, 0.5 * std::pow(z * z + v * v, -0.25));
  double sum = 1.0;
  for (int dir : {-1, 1}) {
    for (int k = 1; k < 200000; ++k) {
      const double d = phi(ts + dir * k * h) - ps;
      if (d < -46.0) break;
      sum += std::exp(d);
    }
  }
  return -z + ps + std::log(0.5 * h * sum);
}

double bessel_k(double v, double z) {
  const double lk = log_bessel_k(v, z);
  if (lk > std::log(DBL_MAX)) throw OverflowError("bessel_k: result exceeds double range");
  return std::exp(lk);
}

double bessel_k_deriv(double v, double z, int n) {
  if (n < 0) throw ParameterError("bessel_k_deriv: negative order of differentiation");
  double s = 0.0, binom = 1.0;
  for (int k = 0; k <= n; ++k) {
    if (k > 0) binom *= static_cast<double>(n - k + 1) / k;
    s += binom * bessel_k(v - (2 * k - n), z);
  }
  return std::pow(-0.5, n) * s;
}

double bessel_k_asymp_coeff(double v, int k) {
  if (k < 0) throw ParameterError("bessel_k_asymp_coeff: negative index");
  double p = 1.0;
  for (int j = 1; j <= k; ++j) p *= (4.0 * v * v - (2.0 * j - 1) * (2.0 * j - 1)) / (8.0 * j);
  return p;
}

double ln_gamma(double x) {
  if (!(x > 0.0)) throw ParameterError("ln_gamma: requires x > 0");
  return boost::math::lgamma(x);
}

double upper_incomplete_gamma(double a, double z) {
  if (!(z > 0.0)) throw ParameterError("upper_incomplete_gamma: requires z > 0");
  if (a > 0.0) return boost::math::tgamma(a, z);
  // Gamma(a, z) = (Gamma(a+1, z) - z^a e^{-z}) / a, started from a + m in (0, 1]
  // or from E_1(z) when a is a nonpositive integer.
  const int m = static_cast<int>(std::ceil(-a));
  double top = a + m;
  double g;
  if (top == 0.0) {
    g = boost::math::expint(1, z);
  } else {
    g = boost::math::tgamma(top, z);
  }
  for (double s = top - 1.0; s >= a - 1e-12; s -= 1.0)
    g = (g - std::pow(z, s) * std::exp(-z)) / s;
  return g;
}

double lower_incomplete_gamma(double a, double z) {
  if (!(a > 0.0) || z < 0.0) throw ParameterError("lower_incomplete_gamma: requires a > 0, z >= 0");
  return boost::math::tgamma_lower(a, z);
}

}  // namespace qfa
