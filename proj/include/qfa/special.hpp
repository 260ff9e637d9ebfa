#pragma once

namespace qfa {

// Modified Bessel function of the second kind, real order v, z > 0.
// Throws OverflowError when the value exceeds the double range; values below
// the double range are returned as 0.
double bessel_k(double v, double z);
// ln K_v(z); finite wherever the integral representation is.
double log_bessel_k(double v, double z);
// n-th derivative in z via (-1/2)^n sum_k C(n,k) K_{v-(2k-n)}(z).
double bessel_k_deriv(double v, double z, int n);
// a_k(v) = prod_{j=1..k} (4v^2 - (2j-1)^2) / (k! 8^k)
double bessel_k_asymp_coeff(double v, int k);

double ln_gamma(double x);
// Gamma(a, z) for real a and z > 0.
double upper_incomplete_gamma(double a, double z);
// gamma(a, z) for a > 0.
double lower_incomplete_gamma(double a, double z);

}  // namespace qfa
