#include "qfa/gig.hpp"

#include <cmath>

#include "qfa/errors.hpp"
#include "qfa/special.hpp"

namespace qfa {

namespace {

GIGParams standardized(const GIGParams& p) { return GIGParams{p.lambda, 1.0, p.omega}; }

// c = y^{1-lambda} for a series y, c_0 taken as 1.
void power_step(const std::vector<double>& y, std::vector<double>& c, int n, double lambda) {
  double s = 0.0;
  for (int i = 1; i <= n; ++i) s += ((2.0 - lambda) * i / n - 1.0) * y[i] * c[n - i];
  c[n] = s / y[0];
}

// c = 1/y, c_0 = 1/y_0.
void recip_step(const std::vector<double>& y, std::vector<double>& c, int n) {
  double s = 0.0;
  for (int i = 1; i <= n; ++i) s += y[i] * c[n - i];
  c[n] = -s / y[0];
}

}  // namespace

double gig_log_pdf_std(const GIGParams& p, double x) {
  return (p.lambda - 1.0) * std::log(x) - 0.5 * p.omega * (x + 1.0 / x) - std::log(2.0) -
         log_bessel_k(p.lambda, p.omega);
}

PowerSeries gig_taylor_coeffs(const GIGParams& p, double u0, double x0, int N) {
  p.validate();
  if (N < 1) throw ParameterError("gig_taylor_coeffs: N must be positive");
  if (!(x0 > 0.0)) throw ParameterError("gig_taylor_coeffs: x0 must be positive");
  const GIGParams q = standardized(p);
  if (std::abs(GIG(q).cdf(x0) - u0) > 1e-10) throw ParameterError("gig_taylor_coeffs: initial pair inconsistent");
  const double w = q.omega, l = q.lambda;
  const double P = std::exp(-gig_log_pdf_std(q, x0));
  // Normalized: b = e^{w/2 (a + Q)} / b_0, c = Q^{1-lambda} / c_0, a = 1/Q.
  std::vector<double> x(N + 1, 0.0), a(N + 1, 0.0), b(N + 1, 0.0), c(N + 1, 0.0);
  x[0] = x0;
  a[0] = 1.0 / x0;
  b[0] = c[0] = 1.0;
  const bool unit = l == 1.0;
  for (int n = 1; n <= N; ++n) {
    const int m = n - 1;
    if (m >= 1) {
      recip_step(x, a, m);
      double s = 0.0;
      for (int i = 1; i <= m; ++i) s += i * (a[i] + x[i]) * b[m - i];
      b[m] = 0.5 * w * s / m;
      if (!unit) power_step(x, c, m, l);
    }
    double s = 0.0;
    if (unit) {
      s = b[m];
    } else {
      for (int i = 0; i <= m; ++i) s += b[i] * c[m - i];
    }
    x[n] = P * s / n;
  }
  return PowerSeries(u0, std::move(x));
}

std::vector<double> gig_cdf_tail_coeffs(const GIGParams& p, int K) {
  p.validate();
  if (K < 0) throw ParameterError("gig_cdf_tail_coeffs: K must be nonnegative");
  const double h = 0.5 * p.omega, l = p.lambda;
  std::vector<double> b(K + 1, 0.0);
  for (int k = 0; k <= K; ++k) {
    double s = 0.0;
    for (int j = 0; j <= k; ++j) {
      double prod = 1.0;
      for (int i = 0; i < j; ++i) prod *= l - k + i;
      const double sg = (k - j) % 2 ? -1.0 : 1.0;
      s += sg / std::tgamma(k - j + 1.0) * std::pow(h, k - 2 * j - 1) * prod;
    }
    b[k] = s;
  }
  return b;
}

TailExpansion gig_tail_expansion(const GIGParams& p, Side side, int N) {
  p.validate();
  GIGParams q = standardized(p);
  if (side == Side::left) q.lambda = -q.lambda;
  const double r = 0.5 * q.omega;
  TailExpansion t;
  t.side = side;
  t.rate = r;
  t.log_c = std::log(2.0) + log_bessel_k(q.lambda, q.omega);
  t.map = side == Side::left ? TailExpansion::Map::reciprocal : TailExpansion::Map::identity;
  t.series = salvy_asymptotic_inverse((q.lambda - 1.0) / r, 1.0 / r, gig_cdf_tail_coeffs(q, N), N);
  return t;
}

BaseDistribution gig_base(const GIGParams& p) {
  p.validate();
  const GIG d(standardized(p));
  BaseDistribution b;
  b.left_kind = BaseDistribution::LeftKind::inverse;
  b.x_m = d.mode();
  b.p_m = d.cdf(b.x_m);
  b.left_rate = b.right_rate = 0.5 * p.omega;
  return b;
}

PowerSeries gig_recycle_coeffs(const GIGParams& p, Side side, double u0, int N) {
  const BaseDistribution base = gig_base(p);
  if (side == Side::left ? !(u0 > 0.0 && u0 <= base.p_m) : !(u0 >= base.p_m && u0 < 1.0))
    throw ParameterError("gig_recycle_coeffs: u0 outside the side's domain");
  const double x0 = GIG(standardized(p)).quantile(u0);
  return gig_recycle_coeffs(p, base, side, u0, x0, N);
}

PowerSeries gig_recycle_coeffs(const GIGParams& p, const BaseDistribution& base, Side side, double u0,
                               double x0, int N) {
  if (N < 1) throw ParameterError("gig_recycle_coeffs: N must be positive");
  if (!(x0 > 0.0)) throw ParameterError("gig_recycle_coeffs: x0 must be positive");
  const double z0 = base.quantile_branch(side, u0);
  if (side == Side::left && !(z0 > 0.0)) throw ParameterError("gig_recycle_coeffs: z0 must be positive");
  const double w = p.omega, l = p.lambda, r = 0.5 * w;
  const double S = std::exp(base.log_pdf_branch(side, z0) - gig_log_pdf_std(standardized(p), x0));
  // a = A, c = 1/A, e = A^{1-lambda} / e_0, d = exp(...) / d_0.
  std::vector<double> a(N + 1, 0.0), c(N + 1, 0.0), d(N + 1, 0.0), e(N + 1, 0.0);
  a[0] = x0;
  c[0] = 1.0 / x0;
  d[0] = e[0] = 1.0;
  if (side == Side::left) {
    // b = e^{-r/z} / b_0 about z0; its derivative series is db.
    std::vector<double> iz(N + 1);
    for (int n = 0; n <= N; ++n) iz[n] = -r * std::pow(-1.0 / z0, n) / z0;
    iz[0] = 0.0;
    const PowerSeries bs = ps_exp(PowerSeries(z0, iz));
    std::vector<double> db(N);
    for (int k = 0; k < N; ++k) db[k] = (k + 1) * bs[k + 1];
    const double scale = S / db[0];
    for (int n = 1; n <= N; ++n) {
      const int m = n - 1;
      if (m >= 1) {
        recip_step(a, c, m);
        double s = 0.0;
        for (int i = 1; i <= m; ++i) s += i * (c[i] + a[i]) * d[m - i];
        d[m] = r * s / m;
        power_step(a, e, m, l);
      }
      double s = 0.0;
      for (int k = 0; k <= m; ++k)
        for (int j = 0; j <= m - k; ++j) s += db[k] * d[j] * e[m - k - j];
      a[n] = scale * s / n;
    }
  } else {
    std::vector<double> b(N + 1, 0.0);
    for (int n = 1; n <= N; ++n) {
      const int m = n - 1;
      if (m >= 1) {
        recip_step(a, c, m);
        b[m] = r * (c[m] + a[m] - (m == 1 ? 1.0 : 0.0));
        double s = 0.0;
        for (int i = 1; i <= m; ++i) s += i * b[i] * d[m - i];
        d[m] = s / m;
        power_step(a, e, m, l);
      }
      double s = 0.0;
      for (int k = 0; k <= m; ++k) s += d[k] * e[m - k];
      a[n] = S * s / n;
    }
  }
  return PowerSeries(z0, std::move(a));
}

}  // namespace qfa
