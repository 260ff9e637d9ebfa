#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>
#include <numbers>

#include "picard.hpp"
#include "qfa/acceleration.hpp"
#include "qfa/errors.hpp"
#include "qfa/special.hpp"
#include "qfa/variance_gamma.hpp"

using namespace qfa;
using cplx = std::complex<double>;

namespace {

const VGParams kVG{2.0, 3.0, 1.0, 0.0};

// K_nu(z) = int_0^inf e^{-z cosh t} cosh(nu t) dt, valid for Re z > 0.
cplx bessel_k_complex(double nu, cplx z) {
  const double h = 0.01;
  cplx s = 0.5 * std::exp(-z);
  for (int k = 1;; ++k) {
    const double t = k * h;
    const cplx term = std::exp(-z * std::cosh(t)) * std::cosh(nu * t);
    s += term;
    if (std::abs(term) < 1e-18 * std::abs(s)) break;
  }
  return s * h;
}

// Taylor coefficients of g(x)/g(x0), g = 1/f, by the trapezoidal rule on a
// circle of radius rho about x0 > 0 (Cauchy integral).
PowerSeries g_by_cauchy(const VGParams& p, double x0, double rho, int N) {
  const double nu = p.lambda - 0.5;
  auto f = [&](cplx x) { return std::pow(x, nu) * bessel_k_complex(nu, p.alpha * x) * std::exp(p.beta * x); };
  const cplx f0 = f(cplx(x0, 0.0));
  const int M = 96;
  std::vector<double> c(N + 1, 0.0);
  for (int k = 0; k < M; ++k) {
    const double th = 2 * std::numbers::pi * k / M;
    const cplx w = std::polar(1.0, th);
    const cplx g = f0 / f(x0 + rho * w);
    cplx wn = 1.0;
    for (int n = 0; n <= N; ++n) {
      c[n] += std::real(g / wn) / M;
      wn *= w * rho;
    }
  }
  return PowerSeries(x0, c);
}

// For lambda = 2: g(x)/g(x0) = e^{(alpha-beta)(x-x0)} (1 + alpha x0)/(1 + alpha x), x > 0.
PowerSeries g_lambda2(const VGParams& p, double x0, int N) {
  std::vector<double> e(N + 1, 1.0), r(N + 1, 1.0);
  for (int n = 1; n <= N; ++n) {
    e[n] = e[n - 1] * (p.alpha - p.beta) / n;
    r[n] = r[n - 1] * -p.alpha / (1.0 + p.alpha * x0);
  }
  return ps_mul(PowerSeries(x0, e), PowerSeries(x0, r));
}

PowerSeries quantile_oracle_series(const PowerSeries& G, double g0, double u0, int N) {
  return picard(u0, G.center, N, [&](const PowerSeries&, const PowerSeries& y) {
    PowerSeries yy = y;
    yy.center = G.center;  // compose needs y[0] == G.center
    PowerSeries r = ps_scale(ps_compose(G, yy), g0);
    r.center = u0;
    return r;
  });
}

double fd3(const std::function<double(double)>& g, double x, double h) {
  return (g(x + 2 * h) - 2 * g(x + h) + 2 * g(x - h) - g(x - 2 * h)) / (2 * h * h * h);
}

}  // namespace

TEST_CASE("g derivative table") {
  const VarianceGamma d(kVG);
  const double x0 = 0.5;
  const VGDerivativeTable t = vg_g_derivatives(kVG, x0, 10);
  CHECK(t.g[0] == doctest::Approx(1.0 / d.pdf(x0)).epsilon(1e-13));
  auto g = [&](double x) { return 1.0 / d.pdf(x); };
  const double h = 1e-5;
  CHECK(t.g[1] == doctest::Approx((g(x0 + h) - g(x0 - h)) / (2 * h)).epsilon(1e-6));
  const double d3 = (4 * fd3(g, x0, 0.005) - fd3(g, x0, 0.01)) / 3;
  CHECK(t.g[3] == doctest::Approx(d3).epsilon(1e-4));
  CHECK_THROWS_AS(vg_g_derivatives(kVG, 0.0, 4), ParameterError);

  // Against the closed form at lambda = 2, through order 8 (the product
  // formula cancels heavily beyond that).
  const PowerSeries c = g_lambda2(kVG, x0, 8);
  double f = 1.0;
  for (int n = 0; n <= 8; ++n) {
    if (n) f *= n;
    CHECK(std::abs(t.g[n] / t.g[0] / f - c[n]) <= 5e-9 * std::abs(c[n]) + 1e-12);
  }
  // Component tables
  CHECK(t.a[2] == doctest::Approx(std::exp(-x0)).epsilon(1e-15));
  CHECK(t.b[1] == doctest::Approx(-1.5 * std::pow(x0, -2.5)).epsilon(1e-14));
  const double nu = 1.5, z = 3 * x0;
  CHECK(t.c[0] == doctest::Approx(1.0 / bessel_k(nu, z)).epsilon(1e-13));
  CHECK(t.c[1] == doctest::Approx(-3 * bessel_k_deriv(nu, z, 1) / std::pow(bessel_k(nu, z), 2)).epsilon(1e-12));
  // negative x0: b^{(n)}/b = prod (1/2 - lambda - i) / y^n on both sides
  const VGDerivativeTable tn = vg_g_derivatives(kVG, -0.5, 3);
  CHECK(tn.b[0] > 0.0);
  CHECK(tn.b[1] == doctest::Approx(1.5 * std::pow(0.5, -2.5)).epsilon(1e-14));
}

TEST_CASE("taylor coefficients against independent routes") {
  // lambda = 2: closed-form g, high order
  {
    const VarianceGamma d(kVG);
    const double x0 = d.mode(), u0 = d.cdf(x0);
    const PowerSeries q = vg_taylor_coeffs(kVG, u0, x0, 30);
    const PowerSeries o = quantile_oracle_series(g_lambda2(kVG, x0, 30), 1.0 / d.pdf(x0), u0, 30);
    for (int n = 0; n <= 30; ++n) CHECK(std::abs(q[n] - o[n]) <= 1e-11 * std::abs(o[n]));
  }
  // general lambda: Cauchy integral of the complex density
  for (const VGParams& p : {VGParams{1.3, 2.0, 0.5, 0.0}, VGParams{0.7, 1.5, -0.6, 0.0}}) {
    const VarianceGamma d(p);
    const double x0 = 0.8, u0 = d.cdf(x0);
    const PowerSeries q = vg_taylor_coeffs(p, u0, x0, 12);
    const PowerSeries o = quantile_oracle_series(g_by_cauchy(p, x0, 0.4, 12), 1.0 / d.pdf(x0), u0, 12);
    CHECK(q[1] == doctest::Approx(1.0 / d.pdf(x0)).epsilon(1e-13));
    for (int n = 1; n <= 12; ++n)
      CHECK_MESSAGE(std::abs(q[n] - o[n]) <= 1e-10 * std::abs(o[n]), "lambda=" << p.lambda << " n=" << n);
  }
}

TEST_CASE("taylor reflection and partial sums") {
  const VGParams m{kVG.lambda, kVG.alpha, -kVG.beta, 0.0};
  const VarianceGamma d(kVG), dm(m);
  const double x0 = d.quantile(0.6);
  const PowerSeries a = vg_taylor_coeffs(kVG, 0.6, x0, 12);
  const PowerSeries b = vg_taylor_coeffs(m, 0.4, -x0, 12);
  for (int n = 0; n <= 12; ++n) {
    const double sgn = n % 2 ? 1.0 : -1.0;
    CHECK(std::abs(a[n] - sgn * b[n]) <= 1e-11 * std::abs(a[n]));
  }
  for (double t : {0.05, 0.1}) CHECK(std::abs(a(0.6 + t) + b(0.4 - t)) < 1e-9);

  // Mode-anchored series; the radius is capped by the non-smooth point F(0).
  const double xm = d.mode(), um = d.cdf(xm), pminus = d.cdf(0.0);
  const PowerSeries q = vg_taylor_coeffs(kVG, um, xm, 15);
  const double r = std::min(cauchy_hadamard_radius(vg_taylor_coeffs(kVG, um, xm, 30).coeffs), um - pminus);
  for (double s : {-0.5, 0.5}) CHECK(std::abs(q(um + s * r) - d.quantile(um + s * r)) <= 1e-8);
  for (double s : {-0.5, -0.2, 0.2, 0.5}) {
    const double u = um + s * r;
    CHECK(std::abs(q.derivative_at(u) * d.pdf(q(u)) - 1.0) <= 1e-6);
  }
}

TEST_CASE("cdf tail coefficients") {
  const std::vector<double> b = vg_cdf_tail_coeffs(kVG, 4);
  CHECK(b[0] == doctest::Approx(1.0 / (kVG.alpha - kVG.beta)).epsilon(1e-15));
  // Integer lambda: the expansion terminates.
  for (std::size_t k = 2; k < b.size(); ++k) CHECK(std::abs(b[k]) < 1e-14);
  auto tail = [](const VGParams& p, int K, double x) {
    const std::vector<double> c = vg_cdf_tail_coeffs(p, K);
    const double l = p.lambda, r = p.alpha - p.beta;
    const double C = std::pow(2 * p.alpha, -l) * std::pow(p.gamma(), 2 * l) / std::tgamma(l);
    double s = 0.0;
    for (int k = 0; k <= K; ++k) s += c[k] * std::pow(x, -k);
    return C * std::pow(x, l - 1) * std::exp(-r * x) * s;
  };
  const VarianceGamma d(kVG);
  const double r = kVG.alpha - kVG.beta;
  CHECK(std::abs(tail(kVG, 4, 10 / r) / d.sf(10 / r) - 1.0) <= 1e-12);

  const VGParams p{2.3, 3.0, 1.0, 0.0};
  const VarianceGamma dp(p);
  CHECK(std::abs(tail(p, 4, 10 / r) / dp.sf(10 / r) - 1.0) <= 1e-4);
  double prev = INFINITY;
  for (double x : {2 / r, 5 / r, 10 / r}) {
    const double rel = std::abs(tail(p, 4, x) / dp.sf(x) - 1.0);
    CHECK(rel < prev);
    prev = rel;
  }
  const double x = 60 / r;
  CHECK(std::abs(tail(p, 0, x) / dp.sf(x) - 1.0) < 0.05);
}

TEST_CASE("tail expansion") {
  const TailExpansion t = vg_tail_expansion(kVG, Side::right, 10);
  const double r = kVG.alpha - kVG.beta;
  CHECK(t.series.poly[0][1] == doctest::Approx((kVG.lambda - 1) / r).epsilon(1e-15));
  CHECK(t.series.poly[0][0] == doctest::Approx(-std::log(r) / r).epsilon(1e-14));
  const TailExpansion t1 = vg_tail_expansion(VGParams{1.0, 2.0, 0.3, 0.0}, Side::right, 6);
  for (const auto& P : t1.series.poly)
    for (std::size_t j = 1; j < P.size(); ++j) CHECK(P[j] == 0.0);

  const VarianceGamma d(kVG);
  const TailExpansion l = vg_tail_expansion(kVG, Side::left, 10);
  CHECK(std::abs(t(1 - 1e-8) / d.quantile(1 - 1e-8) - 1.0) <= 1e-5);
  CHECK(std::abs(l(1e-8) / d.quantile(1e-8) - 1.0) <= 1e-5);
  const VarianceGamma d2(VGParams{0.6, 1.2, 0.4, 0.0});
  const TailExpansion t2 = vg_tail_expansion(VGParams{0.6, 1.2, 0.4, 0.0}, Side::right, 10);
  CHECK(std::abs(t2(1 - 1e-8) / d2.quantile(1 - 1e-8) - 1.0) <= 1e-5);
}

TEST_CASE("base distribution") {
  const BaseDistribution b = vg_base(kVG);
  const VarianceGamma d(kVG);
  CHECK(b.p_m == doctest::Approx(d.cdf(0.0)).epsilon(1e-15));
  CHECK(b.x_m == 0.0);
  for (double u : {0.1, b.p_m, 0.9}) CHECK(std::abs(b.cdf(b.quantile(u)) - u) <= 2e-16);
  CHECK(b.left_weight() == b.p_m);
  CHECK(b.right_weight() == doctest::Approx(1.0 - b.p_m).epsilon(1e-15));
}

TEST_CASE("recycling coefficients") {
  const VarianceGamma d(kVG);
  const BaseDistribution b = vg_base(kVG);
  CHECK_THROWS_AS(vg_recycle_coeffs(kVG, Side::left, 0.9, 5), ParameterError);
  for (auto [side, u0] : {std::pair{Side::left, 0.01}, std::pair{Side::left, 0.2},
                          std::pair{Side::right, 0.7}, std::pair{Side::right, 0.999}}) {
    const PowerSeries A = vg_recycle_coeffs(kVG, side, u0, 24);
    const double x0 = d.quantile(u0), z0 = b.quantile(u0);
    CHECK(A[0] == x0);
    CHECK(A.center == doctest::Approx(z0).epsilon(1e-14));
    CHECK(A[1] == doctest::Approx(b.pdf(z0) / d.pdf(x0)).epsilon(1e-12));
    // Picard on A' = f_B(z) g(A) with g from the Cauchy integral (x0 away from 0)
    if (std::abs(x0) > 0.3) {
      const VGParams pp = x0 > 0 ? kVG : VGParams{kVG.lambda, kVG.alpha, -kVG.beta, 0.0};
      const PowerSeries G = g_by_cauchy(pp, std::abs(x0), 0.4 * std::abs(x0), 10);
      const double g0 = 1.0 / d.pdf(x0), sg = x0 > 0 ? 1.0 : -1.0;
      const double lb0 = b.log_pdf_branch(side, z0), rho = b.log_pdf_branch(side, z0 + 1.0) - lb0;
      const PowerSeries o = picard(A.center, x0, 10, [&](const PowerSeries& z, const PowerSeries& y) {
        PowerSeries yy = ps_scale(y, sg);
        yy.center = std::abs(x0);
        PowerSeries e = ps_scale(ps_sub(z, PowerSeries::constant(z.center, z.center, z.order())), rho);
        PowerSeries gc = ps_compose(G, yy);
        gc.center = z.center;
        return ps_scale(ps_mul(ps_exp(e), gc), std::exp(lb0) * g0);
      });
      for (int n = 1; n <= 10; ++n) CHECK(std::abs(A[n] - o[n]) <= 1e-9 * std::abs(o[n]) + 1e-13 * std::abs(A[1]));
    }
    const double r = cauchy_hadamard_radius(A.coeffs);
    for (double t : {-0.3, 0.3}) {
      const double z = A.center + t * r;
      const double u = side == Side::left ? b.cdf_branch(side, z) : 1.0 - b.cdf_branch(side, z);
      if (!(u > 0.0 && u < 1.0)) continue;
      if (side == Side::left ? u > b.p_m : u < b.p_m) continue;
      CHECK(std::abs(A(z) - d.quantile(u)) < 1e-7);
    }
  }
}
