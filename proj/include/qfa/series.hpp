#pragma once

#include <vector>

namespace qfa {

// Truncated Taylor series: coeffs[n] multiplies (x - center)^n.
struct PowerSeries {
  double center = 0.0;
  std::vector<double> coeffs;

  PowerSeries() = default;
  PowerSeries(double c, std::vector<double> a) : center(c), coeffs(std::move(a)) {}

  int order() const { return static_cast<int>(coeffs.size()) - 1; }
  double operator[](int n) const { return coeffs[n]; }

  double operator()(double x) const;
  double derivative_at(double x) const;
  // Partial sum through degree n (n <= order).
  double partial_sum(double x, int n) const;

  static PowerSeries constant(double center, double value, int order);
  // The series x itself, i.e. center + (x - center).
  static PowerSeries identity(double center, int order);
};

PowerSeries ps_add(const PowerSeries& a, const PowerSeries& b);
PowerSeries ps_sub(const PowerSeries& a, const PowerSeries& b);
PowerSeries ps_scale(const PowerSeries& a, double s);
PowerSeries ps_mul(const PowerSeries& a, const PowerSeries& b);
PowerSeries ps_reciprocal(const PowerSeries& a);
PowerSeries ps_exp(const PowerSeries& a);
PowerSeries ps_log(const PowerSeries& a);
PowerSeries ps_pow_real(const PowerSeries& a, double p);
PowerSeries ps_derivative(const PowerSeries& a);
PowerSeries ps_truncate(const PowerSeries& a, int order);
// outer(inner(x)); requires inner[0] == outer.center.
PowerSeries ps_compose(const PowerSeries& outer, const PowerSeries& inner);

// Compositional inverse g with g(f(x)) = x, centered at f[0].
// Default route: Lagrange inversion via Bell polynomials (solved form).
PowerSeries ps_revert(const PowerSeries& f);
// Same result from the recursive Lagrange form q_n = -f1^-n sum q_k B_{n,k}.
PowerSeries ps_revert_lagrange_recursive(const PowerSeries& f);
// Cross-check route: Newton iteration on truncated series.
PowerSeries ps_revert_newton(const PowerSeries& f);

// Derivative-convention reversion: given f_1..f_N (f_n = n! * Taylor coeff),
// returns q_1..q_N of the inverse. Index 0 of both arrays is unused.
std::vector<double> lagrange_inversion(const std::vector<double>& f);
std::vector<double> lagrange_inversion_recursive(const std::vector<double>& f);

struct PartitionMultiplicity {
  std::vector<int> v;  // v[j-1] = multiplicity of part j
  int n() const;
  int parts() const;
};

std::vector<PartitionMultiplicity> partitions_with_k_parts(int n, int k);
// All partitions of n, cached per n.
const std::vector<PartitionMultiplicity>& partitions_of(int n);

// B_{n,k}(f[0], f[1], ...) where f[j-1] plays the role of f_j.
double bell_polynomial(int n, int k, const std::vector<double>& f);

double cauchy_hadamard_radius(const std::vector<double>& coeffs);

// x ~ y + sum_n P_n(ln y) / y^n; poly[n][j] is the coefficient of xi^j in P_n.
struct LogPolySeries {
  std::vector<std::vector<double>> poly;

  int n_max() const { return static_cast<int>(poly.size()) - 1; }
  double P(int n, double xi) const;
  std::vector<double> terms(double y) const;
};

struct LogPolyValue {
  double value;
  int terms_used;
  double last_term;  // magnitude of the smallest retained term
};

// Optimally truncated sum: P_0 always, then the n >= 1 terms through the
// smallest-magnitude one.
LogPolyValue logpoly_eval(const LogPolySeries& s, double y);
// Fixed truncation through P_n.
double logpoly_eval(const LogPolySeries& s, double y, int n);

// Asymptotic inverse of x ~ y + A ln x + B ln D(1/x), D(t) = sum b_k t^k.
LogPolySeries salvy_asymptotic_inverse(double A, double B, const std::vector<double>& b,
                                       int n_max);

}  // namespace qfa
