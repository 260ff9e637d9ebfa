#include "qfa/variance_gamma.hpp"

#include <cmath>
#include <numbers>

#include "qfa/errors.hpp"
#include "qfa/special.hpp"

namespace qfa {

namespace {

VGParams standardized(const VGParams& p) { return VGParams{p.lambda, p.alpha, p.beta, 0.0}; }

double log_n0(const VGParams& p) {
  const double l = p.lambda;
  return (l - 0.5) * std::log(2.0 * p.alpha) + 0.5 * std::log(std::numbers::pi) + ln_gamma(l) -
         2.0 * l * std::log(p.gamma());
}

void check_pair(const VGParams& p, double u0, double x0) {
  const VarianceGamma d(standardized(p));
  const double F = u0 <= 0.5 ? d.cdf(x0) : 1.0 - d.sf(x0);
  if (!(std::abs(F - u0) <= 1e-10))
    throw ParameterError("initial pair inconsistent: F(x0) != u0");
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Ratios h^{(n)}(x0)/h(x0) for a, b, c and g.
struct Ratios {
  std::vector<double> a, b, c, g;
};

Ratios ratios(const VGParams& p, double x0, int N) {
  const double nu = p.lambda - 0.5, z = p.alpha * std::abs(x0);
  Ratios r;
  r.a.assign(N + 1, 1.0);
  r.b.assign(N + 1, 1.0);
  for (int n = 1; n <= N; ++n) {
    r.a[n] = r.a[n - 1] * -p.beta;
    // d^n |y|^s / dy^n = s (s-1) ... (s-n+1) |y|^s / y^n on either side of 0
    r.b[n] = r.b[n - 1] * (0.5 - p.lambda - (n - 1)) / x0;
  }

  // c2 = K_nu(alpha |y|): c2^{(j)}/c2 = (-+alpha/2)^j sum_k C(j,k) K_{nu-(2k-j)}/K_nu
  const double lk = log_bessel_k(nu, z);
  const double h = x0 > 0.0 ? -0.5 * p.alpha : 0.5 * p.alpha;
  std::vector<double> r2(N + 1, 1.0);
  double hp = 1.0;
  for (int j = 1; j <= N; ++j) {
    hp *= h;
    double s = 0.0;
    for (int k = 0; k <= j; ++k) s += binom(j, k) * std::exp(log_bessel_k(nu - (2 * k - j), z) - lk);
    r2[j] = hp * s;
  }

  // Faa di Bruno for c = 1/c2:
  // c^{(n)}/c = sum n!/prod m_j! (-1)^k k! prod (r2_j / j!)^{m_j}
  std::vector<double> fact(N + 1, 1.0);
  for (int i = 1; i <= N; ++i) fact[i] = fact[i - 1] * i;
  r.c.assign(N + 1, 1.0);
  for (int n = 1; n <= N; ++n) {
    double s = 0.0;
    for (const PartitionMultiplicity& pm : partitions_of(n)) {
      double t = fact[n];
      int k = 0;
      for (int j = 1; j <= n; ++j) {
        const int m = pm.v[j - 1];
        if (m == 0) continue;
        k += m;
        t *= std::pow(r2[j] / fact[j], m) / fact[m];
      }
      s += (k % 2 ? -1.0 : 1.0) * fact[k] * t;
    }
    r.c[n] = s;
  }

  // Leibniz for g = N0 a b c
  r.g.assign(N + 1, 0.0);
  for (int n = 0; n <= N; ++n) {
    double s = 0.0;
    for (int k = 0; k <= n; ++k)
      for (int j = 0; j <= k; ++j) s += binom(n, k) * binom(k, j) * r.a[n - k] * r.b[j] * r.c[k - j];
    r.g[n] = s;
  }
  return r;
}

// Taylor series of g / g(x0) about x0, from g = N0 alpha^nu e^{-beta y} / h(alpha |y|)
// with h(z) = z^nu K_nu(z). h solves z h'' + (1 - 2 nu) h' - z h = 0, which gives a
// three-term recurrence for its Taylor coefficients about z0. The Leibniz /
// Faa di Bruno table multiplies factors that are each singular at y = 0 and
// loses all digits by order ~18; this route does not.
PowerSeries g_series(const VGParams& p, double x0, int N) {
  const double nu = p.lambda - 0.5, z0 = p.alpha * std::abs(x0);
  std::vector<double> h(N + 1, 0.0);
  h[0] = 1.0;
  if (N >= 1) h[1] = -std::exp(log_bessel_k(nu - 1.0, z0) - log_bessel_k(nu, z0));
  for (int n = 0; n + 2 <= N; ++n) {
    const double hm1 = n >= 1 ? h[n - 1] : 0.0;
    h[n + 2] = (z0 * h[n] + hm1 - (n + 1) * (n + 1 - 2.0 * nu) * h[n + 1]) / (z0 * (n + 2) * (n + 1));
  }
  // z - z0 = alpha sgn(x0) (y - x0)
  const double s = x0 > 0.0 ? p.alpha : -p.alpha;
  std::vector<double> e(N + 1, 1.0);
  double sp = 1.0;
  for (int n = 1; n <= N; ++n) {
    sp *= s;
    h[n] *= sp;
    e[n] = e[n - 1] * -p.beta / n;
  }
  return ps_mul(PowerSeries(x0, std::move(e)), ps_reciprocal(PowerSeries(x0, std::move(h))));
}

}  // namespace

double vg_log_pdf_std(const VGParams& p, double x) {
  const double nu = p.lambda - 0.5, ax = std::abs(x);
  return -log_n0(p) + nu * std::log(ax) + log_bessel_k(nu, p.alpha * ax) + p.beta * x;
}

VGDerivativeTable vg_g_derivatives(const VGParams& p, double x0, int N) {
  p.validate();
  if (x0 == 0.0) throw ParameterError("vg_g_derivatives: x0 = 0 is a non-smooth point");
  if (N < 0) throw ParameterError("vg_g_derivatives: N must be nonnegative");
  const Ratios r = ratios(p, x0, N);
  const double nu = p.lambda - 0.5, ax = std::abs(x0);
  const double a0 = std::exp(-p.beta * x0), b0 = std::pow(ax, -nu);
  const double c0 = std::exp(-log_bessel_k(nu, p.alpha * ax));
  const double g0 = std::exp(-vg_log_pdf_std(p, x0));
  VGDerivativeTable t;
  t.x0 = x0;
  t.a.resize(N + 1);
  t.b.resize(N + 1);
  t.c.resize(N + 1);
  t.g.resize(N + 1);
  for (int n = 0; n <= N; ++n) {
    t.a[n] = a0 * r.a[n];
    t.b[n] = b0 * r.b[n];
    t.c[n] = c0 * r.c[n];
    t.g[n] = g0 * r.g[n];
  }
  return t;
}

PowerSeries vg_taylor_coeffs(const VGParams& p, double u0, double x0, int N) {
  p.validate();
  if (x0 == 0.0) throw ParameterError("vg_taylor_coeffs: x0 = 0 is a non-smooth point");
  if (N < 1) throw ParameterError("vg_taylor_coeffs: N must be positive");
  check_pair(p, u0, x0);
  const double g0 = std::exp(-vg_log_pdf_std(p, x0));
  const PowerSeries G = g_series(p, x0, N - 1);
  // q_n = [g o Q]_{n-1} / n, with Q known through order n-1.
  std::vector<double> q(N + 1, 0.0);
  q[0] = x0;
  for (int n = 1; n <= N; ++n) {
    const PowerSeries Qn(u0, std::vector<double>(q.begin(), q.begin() + n));
    const PowerSeries h = ps_compose(ps_truncate(G, n - 1), Qn);
    q[n] = g0 * h[n - 1] / n;
  }
  return PowerSeries(u0, std::move(q));
}

std::vector<double> vg_cdf_tail_coeffs(const VGParams& p, int K) {
  p.validate();
  if (K < 0) throw ParameterError("vg_cdf_tail_coeffs: K must be nonnegative");
  const double r = p.alpha - p.beta, l = p.lambda;
  std::vector<double> b(K + 1, 0.0);
  for (int k = 0; k <= K; ++k) {
    double s = 0.0;
    for (int j = 0; j <= k; ++j) {
      double prod = 1.0;
      for (int i = 0; i < j; ++i) prod *= l - k + i;
      s += std::pow(r, -(j + 1)) * std::pow(p.alpha, -(k - j)) * prod * bessel_k_asymp_coeff(l - 0.5, k - j);
    }
    b[k] = s;
  }
  return b;
}

TailExpansion vg_tail_expansion(const VGParams& p, Side side, int N) {
  p.validate();
  VGParams q = standardized(p);
  if (side == Side::left) q.beta = -q.beta;
  const double r = q.alpha - q.beta, l = q.lambda;
  TailExpansion t;
  t.side = side;
  t.rate = r;
  // v = (1 - u)/C, y = -ln v / r
  const double lnC = -l * std::log(2.0 * q.alpha) + 2.0 * l * std::log(q.gamma()) - ln_gamma(l);
  t.log_c = -lnC;
  t.map = side == Side::left ? TailExpansion::Map::negate : TailExpansion::Map::identity;
  t.series = salvy_asymptotic_inverse((l - 1.0) / r, 1.0 / r, vg_cdf_tail_coeffs(q, N), N);
  return t;
}

BaseDistribution vg_base(const VGParams& p) {
  p.validate();
  const VarianceGamma d(standardized(p));
  BaseDistribution b;
  b.left_kind = BaseDistribution::LeftKind::exponential;
  b.x_m = 0.0;
  b.p_m = d.cdf(0.0);
  b.left_rate = p.alpha + p.beta;
  b.right_rate = p.alpha - p.beta;
  return b;
}

PowerSeries vg_recycle_coeffs(const VGParams& p, Side side, double u0, int N) {
  const BaseDistribution base = vg_base(p);
  if (side == Side::left ? !(u0 > 0.0 && u0 <= base.p_m) : !(u0 >= base.p_m && u0 < 1.0))
    throw ParameterError("vg_recycle_coeffs: u0 outside the side's domain");
  const double x0 = VarianceGamma(standardized(p)).quantile(u0);
  return vg_recycle_coeffs(p, base, side, u0, x0, N);
}

PowerSeries vg_recycle_coeffs(const VGParams& p, const BaseDistribution& base, Side side, double u0,
                              double x0, int N) {
  if (N < 1) throw ParameterError("vg_recycle_coeffs: N must be positive");
  if (x0 == 0.0) throw ParameterError("vg_recycle_coeffs: x0 = 0 is a non-smooth point");
  const double z0 = base.quantile_branch(side, u0);
  const double rho = side == Side::left ? base.left_rate : -base.right_rate;
  // A' = f_B(z) g(A(z)); both factors carried normalized, a_1 = f_B(z0) g(x0).
  const double K = std::exp(base.log_pdf_branch(side, z0) - vg_log_pdf_std(p, x0));
  const PowerSeries G = g_series(p, x0, N - 1);
  std::vector<double> e(N, 1.0);
  for (int n = 1; n < N; ++n) e[n] = e[n - 1] * rho / n;
  const PowerSeries E(z0, e);
  std::vector<double> a(N + 1, 0.0);
  a[0] = x0;
  for (int n = 1; n <= N; ++n) {
    const PowerSeries An(z0, std::vector<double>(a.begin(), a.begin() + n));
    const PowerSeries h = ps_mul(ps_truncate(E, n - 1), ps_compose(ps_truncate(G, n - 1), An));
    a[n] = K * h[n - 1] / n;
  }
  return PowerSeries(z0, std::move(a));
}

}  // namespace qfa
