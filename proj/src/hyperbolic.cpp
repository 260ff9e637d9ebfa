#include "qfa/hyperbolic.hpp"

#include <cmath>

#include "qfa/errors.hpp"
#include "qfa/special.hpp"

namespace qfa {

namespace {

HypParams standardized(const HypParams& p) { return HypParams{p.alpha1, p.beta1, 1.0, 0.0}; }

void check_pair(const HypParams& p, double u0, double x0) {
  const Hyperbolic d(standardized(p));
  const double F = u0 <= 0.5 ? d.cdf(x0) : 1.0 - d.sf(x0);
  if (!(std::abs(F - u0) <= 1e-10))
    throw ParameterError("initial pair inconsistent: F(x0) != u0");
}

// Coefficients of sqrt(1 + A^2) given A's coefficients through n and the
// result through n - 1.
double sqrt1p_sq_next(const std::vector<double>& A, const std::vector<double>& s, int n) {
  double acc = n * A[n] * A[0];
  for (int k = 0; k <= n - 2; ++k) acc += (k + 1) * (A[k + 1] * A[n - k - 1] - s[k + 1] * s[n - k - 1]);
  return acc / (n * s[0]);
}

}  // namespace

double hyp_log_pdf_std(const HypParams& p, double x) {
  const double g = p.gamma1();
  return std::log(g / (2.0 * p.alpha1)) - log_bessel_k(1.0, g) - p.alpha1 * std::sqrt(1.0 + x * x) +
         p.beta1 * x;
}

PowerSeries hyp_taylor_coeffs(const HypParams& p, double u0, double x0, int N) {
  p.validate();
  if (N < 1) throw ParameterError("hyp_taylor_coeffs: N must be positive");
  check_pair(p, u0, x0);
  const double a1 = p.alpha1, b1 = p.beta1;
  // b is carried divided by b_0; the factor N0 b_0 = 1/f(x0) goes into P.
  const double P = std::exp(-hyp_log_pdf_std(p, x0));
  std::vector<double> q(N + 1), a(N + 1), b(N + 1);
  q[0] = x0;
  a[0] = std::sqrt(1.0 + x0 * x0);
  b[0] = 1.0;
  for (int n = 1; n <= N; ++n) {
    q[n] = P / n * b[n - 1];
    a[n] = sqrt1p_sq_next(q, a, n);
    double s = 0.0;
    for (int k = 1; k <= n; ++k) s += k * (a1 * a[k] - b1 * q[k]) * b[n - k];
    b[n] = s / n;
  }
  return PowerSeries(u0, std::move(q));
}

double HypTailSeries::y(double w) const {
  const double r = alpha1 - beta1;
  return -std::log(n0 * r * w) / r;
}

TailExpansion HypTailSeries::expansion() const {
  TailExpansion t;
  t.side = side;
  t.rate = alpha1 - beta1;
  t.log_c = std::log(n0 * t.rate);
  t.map = side == Side::left ? TailExpansion::Map::negate : TailExpansion::Map::identity;
  t.series.poly.resize(q.size());
  for (std::size_t n = 0; n < q.size(); ++n) t.series.poly[n] = {q[n]};
  return t;
}

double HypTailSeries::operator()(double u) const { return expansion()(u); }

HypTailSeries hyp_tail_coeffs(const HypParams& p, Side side, int N) {
  p.validate();
  if (N < 2) throw ParameterError("hyp_tail_coeffs: N must be at least 2");
  HypTailSeries t;
  t.side = side;
  t.alpha1 = p.alpha1;
  t.beta1 = side == Side::left ? -p.beta1 : p.beta1;
  t.n0 = p.n0();
  const double a1 = t.alpha1, b1 = t.beta1, r = a1 - b1;

  std::vector<double> q(N + 1, 0.0), a(N + 1, 0.0), b(N + 1, 0.0), c(N + 1, 0.0), d(N + 1, 0.0);
  c[0] = 1.0;
  q[1] = -a1 / (2.0 * r);
  a[1] = 0.5 + q[1];
  b[1] = a1 * a[1] - b1 * q[1];
  c[1] = b[1];
  for (int n = 2; n <= N; ++n) {
    double s = 0.0;
    for (int k = 0; k <= n - 2; ++k) s += (k + 1) * (q[k + 1] * q[n - k - 2] - a[k + 1] * a[n - k - 2]);
    d[n] = s / (n - 1);
    double bc = 0.0;
    for (int k = 1; k <= n - 1; ++k) bc += k * b[k] * c[n - k];
    q[n] = -((n - 1) * q[n - 1] + bc / n + a1 * d[n]) / r;
    a[n] = q[n] + d[n];
    b[n] = a1 * a[n] - b1 * q[n];
    double cc = 0.0;
    for (int k = 1; k <= n; ++k) cc += k * b[k] * c[n - k];
    c[n] = cc / n;
  }
  t.q = std::move(q);
  return t;
}

BaseDistribution hyp_base(const HypParams& p) {
  p.validate();
  const HypParams s = standardized(p);
  const Hyperbolic d(s);
  BaseDistribution b;
  b.left_kind = BaseDistribution::LeftKind::exponential;
  b.x_m = d.mode();
  b.p_m = d.cdf(b.x_m);
  b.left_rate = p.alpha1 + p.beta1;
  b.right_rate = p.alpha1 - p.beta1;
  return b;
}

PowerSeries hyp_recycle_coeffs(const HypParams& p, Side side, double u0, int N) {
  const BaseDistribution base = hyp_base(p);
  if (side == Side::left ? !(u0 > 0.0 && u0 <= base.p_m) : !(u0 >= base.p_m && u0 < 1.0))
    throw ParameterError("hyp_recycle_coeffs: u0 outside the side's domain");
  const double x0 = Hyperbolic(standardized(p)).quantile(u0);
  return hyp_recycle_coeffs(p, base, side, u0, x0, N);
}

PowerSeries hyp_recycle_coeffs(const HypParams& p, const BaseDistribution& base, Side side,
                               double u0, double x0, int N) {
  if (N < 1) throw ParameterError("hyp_recycle_coeffs: N must be positive");
  const double a1 = p.alpha1, b1 = p.beta1;
  const double rho = side == Side::left ? a1 + b1 : -(a1 - b1);
  const double z0 = base.quantile_branch(side, u0);
  // a_1 = f_B(z0) / f_T(x0); d is carried divided by d_0.
  const double K = std::exp(base.log_pdf_branch(side, z0) - hyp_log_pdf_std(p, x0));
  std::vector<double> a(N + 1), b(N + 1), c(N + 1), d(N + 1);
  a[0] = x0;
  b[0] = std::sqrt(1.0 + x0 * x0);
  d[0] = 1.0;
  for (int n = 1; n <= N; ++n) {
    a[n] = K / n * d[n - 1];
    b[n] = sqrt1p_sq_next(a, b, n);
    c[n] = a1 * b[n] - b1 * a[n] + (n == 1 ? rho : 0.0);
    double s = 0.0;
    for (int k = 1; k <= n; ++k) s += k * c[k] * d[n - k];
    d[n] = s / n;
  }
  return PowerSeries(z0, std::move(a));
}

}  // namespace qfa
