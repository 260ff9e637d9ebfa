#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <numbers>

#include "qfa/acceleration.hpp"
#include "qfa/errors.hpp"
#include "qfa/stable.hpp"

using namespace qfa;

namespace {

double k_alpha(double a) { return StableParams{a, 0.0, 0.0, 1.0}.k_alpha(); }

// Independent route: Gil-Pelaez inversion of the type (B) characteristic
// function, F(x) = 1/2 - (1/pi) int_0^inf Im(e^{-itx} phi(t)) / t dt.
// Piecewise Gauss-Legendre in s with t = s^4, which removes the t^{alpha-1}
// behaviour at the origin.
double cdf_by_inversion(double alpha, double beta2, double x) {
  using boost::math::quadrature::gauss;
  const double th = 0.5 * std::numbers::pi * beta2 * k_alpha(alpha);
  const double c = std::cos(th), s = std::sin(th);
  auto g = [&](double r) {
    if (r == 0.0) return 0.0;
    const double t = r * r * r * r;
    const double ta = std::pow(t, alpha);
    return std::exp(-ta * c) * std::sin(ta * s - t * x) * 4.0 / r;
  };
  const double R = std::pow(std::pow(45.0 / c, 1.0 / alpha), 0.25);
  double sum = 0.0;
  const int pieces = 400;
  for (int i = 0; i < pieces; ++i)
    sum += gauss<double, 30>::integrate(g, R * i / pieces, R * (i + 1) / pieces);
  return 0.5 - sum / std::numbers::pi;
}

}  // namespace

TEST_CASE("parametrization conversion") {
  const StableParams p{1.5, 0.4, 0.0, 1.0};
  const StableParams p1 = stable_convert(p, StableParametrization::P1);
  const StableParams back = stable_convert(p1, StableParametrization::P2);
  CHECK(std::abs(back.beta2 - p.beta2) < 1e-12);
  CHECK(std::abs(back.sigma2 - p.sigma2) < 1e-12);
  CHECK(std::abs(back.mu2 - p.mu2) < 1e-12);

  const StableParams s = stable_convert(StableParams{1.3, 0.0, 0.7, 2.0}, StableParametrization::P1);
  CHECK(s.beta2 == 0.0);
  CHECK(s.sigma2 == doctest::Approx(std::pow(2.0, 1 / 1.3)).epsilon(1e-15));
  CHECK(s.mu2 == doctest::Approx(1.4).epsilon(1e-15));

  CHECK(stable_convert(StableParams{2.0, 0.8, 0.0, 1.0}, StableParametrization::P1).beta2 == 0.0);
  CHECK_THROWS_AS(stable_convert(StableParams{1.0, 0.0, 0.0, 1.0}, StableParametrization::P1), ParameterError);

  // P1 and P2 forms describe the same law.
  const StableParams q{1.6, 0.5, 0.3, 1.2};
  const StableParams q1 = stable_convert(q, StableParametrization::P1);
  for (double x : {-1.0, 0.2, 2.5}) CHECK(std::abs(Stable(q).cdf(x) - Stable(q1).cdf(x)) < 1e-13);
}

TEST_CASE("series coefficients") {
  const StableSeriesPair s = stable_cdf_coeffs(StableParams{1.7, 0.5, 0.0, 1.0}, 12);
  CHECK(s.u0 == doctest::Approx(0.5 * (1 - 0.5 * k_alpha(1.7) / 1.7)).epsilon(1e-15));
  CHECK(s.tail[0] == 1.0);
  CHECK(s.central_convergent);
  CHECK_FALSE(s.tail_convergent);
  CHECK(stable_cdf_coeffs(StableParams{1.3, 0.0, 0.0, 1.0}, 4).u0 == 0.5);
  const StableSeriesPair g = stable_cdf_coeffs(StableParams{2.0, 0.0, 0.0, 1.0}, 10);
  for (int n = 1; n <= 10; ++n) CHECK(std::abs(g.tail[n]) < 1e-300);
  CHECK(stable_cdf_coeffs(StableParams{0.6, 0.2, 0.0, 1.0}, 4).tail_convergent);
}

TEST_CASE("cdf against characteristic-function inversion") {
  for (double a : {1.2, 1.5, 1.7, 1.95}) {
    for (double b : {-0.7, 0.0, 0.5, 1.0}) {
      for (double x : {-6.0, -2.0, -0.3, 0.0, 0.8, 3.0, 9.0}) {
        const double ref = cdf_by_inversion(a, b, x);
        const double v = stable_cdf_series(StableParams{a, b, 0.0, 1.0}, x);
        CHECK_MESSAGE(std::abs(v - ref) < 1e-10, "a=" << a << " b=" << b << " x=" << x);
      }
    }
  }
  for (double b : {0.0, 0.5}) {
    for (double x : {-2.0, 0.4, 1.5, 4.0}) {
      const double v = stable_cdf_series(StableParams{0.8, b, 0.0, 1.0}, x);
      CHECK(std::abs(v - cdf_by_inversion(0.8, b, x)) < 1e-9);
    }
  }
}

TEST_CASE("closed-form reductions and symmetry") {
  const StableParams g{2.0, 0.0, 0.0, 1.0};
  CHECK(std::abs(stable_cdf(g, 1.0) - 0.5 * std::erfc(-0.5)) < 1e-15);
  CHECK(std::abs(stable_cdf(g, 1.0) - 0.76024993890652326) < 1e-12);
  CHECK(std::abs(stable_cdf_series(StableParams{1.999999, 0.0, 0.0, 1.0}, 1.0) - 0.7602499) < 1e-6);
  CHECK(std::abs(stable_cdf(StableParams{1.0, 0.0, 0.0, 1.0}, 1.0) - 0.75) < 1e-15);
  const StableParams p{1.7, 0.5, 0.0, 1.0}, m{1.7, -0.5, 0.0, 1.0};
  CHECK(stable_cdf(p, 0.0) == doctest::Approx(stable_cdf_coeffs(p, 2).u0).epsilon(1e-15));
  for (double x : {0.1, 1.0, 4.0, 25.0}) CHECK(std::abs(stable_cdf(p, x) + stable_cdf(m, -x) - 1.0) < 1e-12);
}

TEST_CASE("convergence behaviour of the central series") {
  // alpha > 1: partial sums settle (Cauchy criterion).
  StableCdfSeries a15(1.5, 0.0);
  const auto ps = a15.central_partial_sums(0.5, 40);
  CHECK(std::abs(ps[39] - ps[29]) < 1e-14);
  CHECK(std::abs(ps[39] - a15.cdf_pos(0.5).first) < 1e-14);
  // alpha < 1: partial sums diverge; the epsilon algorithm keeps them bounded.
  StableCdfSeries a07(0.7, 0.3);
  const auto pd = a07.central_partial_sums(0.5, 30);
  const double ref = a07.cdf_pos(0.5).first;
  CHECK(std::abs(pd[29] - ref) > 1e3);
  double worst = 0.0;
  for (int n = 8; n <= 30; ++n) {
    std::vector<double> head(pd.begin(), pd.begin() + n);
    worst = std::max(worst, std::abs(wynn_epsilon(head) - ref));
  }
  CHECK(worst < 1.0);
}

TEST_CASE("quantile series") {
  const StableParams p{1.7, 0.5, 0.0, 1.0};
  const PowerSeries q = stable_quantile_central(p, 12);
  const double rho = 1.0 - stable_cdf_coeffs(p, 1).u0;
  const double q1 = std::numbers::pi / std::sin(std::numbers::pi * rho) / std::tgamma(1 + 1 / 1.7);
  CHECK(q[1] == doctest::Approx(q1).epsilon(1e-13));
  const PowerSeries f = stable_cdf_coeffs(p, 12).central;
  const PowerSeries id = ps_compose(f, q);
  CHECK(std::abs(id[1] - 1.0) < 1e-13);
  for (int n = 2; n <= 12; ++n) CHECK(std::abs(id[n]) < 1e-10 * std::abs(f[n]) + 1e-12);

  const PowerSeries qs = stable_quantile_central(StableParams{1.4, 0.0, 0.0, 1.0}, 12);
  for (int n = 2; n <= 12; n += 2) CHECK(std::abs(qs[n]) < 1e-13 * std::abs(qs[n - 1]));

  const StableTailQuantile t = stable_quantile_tail(p, 20);
  CHECK(t.ginv[1] == doctest::Approx(1.0 / stable_cdf_coeffs(p, 2).tail[1]).epsilon(1e-14));
  const Stable d(p);
  CHECK(std::abs(t(0.999) / d.quantile(0.999) - 1.0) < 1e-5);
  const StableParams p8{0.8, 0.0, 0.0, 1.0};
  CHECK(std::abs(stable_quantile_tail(p8, 30)(0.99) / Stable(p8).quantile(0.99) - 1.0) < 1e-7);
  CHECK_THROWS_AS(stable_quantile_tail(StableParams{2.0, 0.0, 0.0, 1.0}, 6), ParameterError);
}

TEST_CASE("quantile dispatcher") {
  const StableParams g{2.0, 0.0, 0.0, 1.0};
  const double z = 1.959963984540054;
  CHECK(std::abs(stable_quantile(g, 0.975) - std::numbers::sqrt2 * z) < 1e-6);
  const StableParams p{1.7, 0.5, 0.0, 1.0}, m{1.7, -0.5, 0.0, 1.0};
  CHECK(std::abs(stable_quantile(p, stable_cdf_coeffs(p, 1).u0)) < 1e-15);
  const StableParams s{1.5, 0.0, 0.0, 1.0};
  CHECK(std::abs(stable_quantile(s, 0.25) + stable_quantile(s, 0.75)) < 1e-12);
  for (double u : {1e-6, 0.01, 0.2, 0.45, 0.5, 0.8, 0.99, 0.9995})
    CHECK(std::abs(stable_quantile(p, u) + stable_quantile(m, 1 - u)) < 1e-9);
  // location and scale
  const StableParams ls{1.7, 0.5, 0.4, 2.0};
  CHECK(std::abs(stable_quantile(ls, 0.3) - (0.8 + std::pow(2.0, 1 / 1.7) * stable_quantile(p, 0.3))) < 1e-12);
  CHECK_THROWS_AS(stable_quantile(p, 1.0), ParameterError);
}

TEST_CASE("quantile dispatcher is monotone") {
  for (double a : {1.3, 1.7}) {
    for (double b : {0.0, 0.5}) {
      const StableQuantileFunction Q(StableParams{a, b, 0.0, 1.0});
      double prev = -INFINITY;
      bool ok = true;
      for (int k = 1; k <= 999; ++k) {
        const double q = Q(k / 1000.0);
        ok = ok && q > prev;
        prev = q;
      }
      CHECK_MESSAGE(ok, "a=" << a << " b=" << b);
    }
  }
}
