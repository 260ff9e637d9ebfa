#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "qfa/distributions.hpp"
#include "qfa/errors.hpp"
#include "qfa/special.hpp"

using namespace qfa;

namespace {

const HypParams kBMW = HypParams::from_standard(89.72, 4.7184, 0.0014, -0.0015);

double Phi(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// Full-line integral of the density by Gauss-Kronrod after x = c + w t/(1-t^2),
// split at c.
double total_mass(const Distribution& d, double c) {
  using boost::math::quadrature::gauss_kronrod;
  const double w = d.width();
  auto g = [&](double t) {
    const double s = 1.0 - t * t;
    const double x = c + w * t / s;
    const double v = d.pdf(x);
    return std::isfinite(v) ? v * w * (1.0 + t * t) / (s * s) : 0.0;
  };
  double err = 0.0;
  return gauss_kronrod<double, 61>::integrate(g, -1.0, 0.0, 12, 1e-13, &err) +
         gauss_kronrod<double, 61>::integrate(g, 0.0, 1.0, 12, 1e-13, &err);
}

// Inverse Gaussian with mean 1 and shape s; GIG(-1/2, 1, s).
double ig_cdf(double x, double s) {
  const double r = std::sqrt(s / x);
  return Phi(r * (x - 1.0)) + std::exp(2.0 * s) * Phi(-r * (x + 1.0));
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_THROWS_WITH_AS(HypParams::from_standard(1.0, 1.0, 1.0, 0.0), "constraint |beta|<alpha violated",
                       ParameterError);
  CHECK_THROWS_AS((VGParams{1.0, 1.0, 2.0, 0.0}.validate()), ParameterError);
  CHECK_THROWS_AS((VGParams{-1.0, 2.0, 0.0, 0.0}.validate()), ParameterError);
  CHECK_THROWS_AS((GIGParams{0.5, 1.0, 0.0}.validate()), ParameterError);
  CHECK_THROWS_AS((StableParams{1.0, 0.3, 0.0, 1.0}.validate()), ParameterError);
  CHECK_NOTHROW((StableParams{1.0, 0.0, 0.0, 1.0}.validate()));
  CHECK_THROWS_AS((StableParams{0.7, 0.95, 0.0, 1.0}.validate()), ParameterError);
  CHECK(family_from_name("hyp") == Family::hyperbolic);
  CHECK_THROWS_AS(family_from_name("nig"), ParameterError);
}

TEST_CASE("densities at closed-form points") {
  const double a1 = 2.5;
  Hyperbolic h(HypParams{a1, 0.0, 1.0, 0.0});
  CHECK(h.pdf(0.0) == doctest::Approx(a1 / (2 * a1 * bessel_k(1.0, a1)) * std::exp(-a1)).epsilon(1e-14));

  GIG g(GIGParams{1.0, 1.0, 2.0});
  CHECK(g.pdf(1.0) == doctest::Approx(std::exp(-2.0) / (2 * bessel_k(1.0, 2.0))).epsilon(1e-14));
  CHECK_THROWS_AS(g.pdf(-1.0), ParameterError);

  VarianceGamma v(VGParams{0.4, 2.0, 0.5, 0.0});
  CHECK(std::isinf(v.pdf(0.0)));
}

TEST_CASE("densities integrate to one") {
  Hyperbolic h(kBMW);
  VarianceGamma v(VGParams{2.0, 3.0, 1.0, 0.0});
  VarianceGamma v2(VGParams{0.8, 1.5, -0.4, 0.3});
  GIG g(GIGParams{0.5, 1.0, 2.0});
  GIG g2(GIGParams{-1.3, 2.0, 0.7});
  CHECK(std::abs(total_mass(h, h.mode()) - 1.0) < 1e-10);
  CHECK(std::abs(total_mass(v, 0.0) - 1.0) < 1e-10);
  CHECK(std::abs(total_mass(v2, 0.3) - 1.0) < 1e-10);
  // GIG: integrate in log x, where the density is smooth and light-tailed.
  for (const GIG* d : {&g, &g2}) {
    using boost::math::quadrature::gauss_kronrod;
    auto f = [&](double s) { return d->pdf(std::exp(s)) * std::exp(s); };
    double err = 0.0;
    const double c = std::log(d->mode());
    const double m = gauss_kronrod<double, 61>::integrate(f, c - 12.0, c, 12, 1e-13, &err) +
                     gauss_kronrod<double, 61>::integrate(f, c, c + 6.0, 12, 1e-13, &err);
    CHECK(std::abs(m - 1.0) < 1e-10);
  }
}

TEST_CASE("cdf against closed forms") {
  // GIG(1/2, 1, s) is the reciprocal of an inverse Gaussian.
  GIG g(GIGParams{0.5, 1.0, 2.0});
  GIG gm(GIGParams{-0.5, 1.0, 2.0});
  for (double x : {0.05, 0.3, 1.0, 2.2, 7.0}) {
    CHECK(std::abs(gm.cdf(x) - ig_cdf(x, 2.0)) < 1e-13);
    CHECK(std::abs(g.cdf(x) - (1.0 - ig_cdf(1.0 / x, 2.0))) < 1e-13);
  }
  // VG with lambda = 1 is an asymmetric Laplace with rates a+b (left), a-b (right).
  const double a = 3.0, b = 1.0, mu = 0.2;
  VarianceGamma v(VGParams{1.0, a, b, mu});
  const double pl = (a - b) / (2 * a);
  for (double x : {-3.0, -0.5, 0.0, 0.1, 1.0, 6.0}) {
    const double t = x - mu;
    const double ref = t < 0 ? pl * std::exp((a + b) * t) : 1.0 - (1.0 - pl) * std::exp(-(a - b) * t);
    CHECK(std::abs(v.cdf(x) - ref) < 1e-13);
  }
  Hyperbolic h(HypParams{3.0, 0.0, 1.0, 0.0});
  CHECK(std::abs(h.cdf(0.0) - 0.5) < 1e-14);
}

TEST_CASE("reflection and reciprocal identities") {
  Hyperbolic hp(HypParams{2.0, 0.7, 1.0, 0.0}), hm(HypParams{2.0, -0.7, 1.0, 0.0});
  VarianceGamma vp(VGParams{2.0, 3.0, 1.0, 0.0}), vm(VGParams{2.0, 3.0, -1.0, 0.0});
  for (double x : {-4.0, -1.0, -0.2, 0.3, 2.0, 5.0}) {
    CHECK(std::abs(hp.cdf(x) - (1.0 - hm.cdf(-x))) < 1e-10);
    CHECK(std::abs(vp.cdf(x) - (1.0 - vm.cdf(-x))) < 1e-10);
  }
  GIG g(GIGParams{0.8, 1.0, 1.5}), gr(GIGParams{-0.8, 1.0, 1.5});
  for (double x : {0.1, 0.6, 1.0, 3.0, 9.0}) CHECK(std::abs(g.cdf(x) + gr.cdf(1.0 / x) - 1.0) < 1e-10);
  for (double u : {1e-9, 0.01, 0.3, 0.5, 0.77, 0.999, 1 - 1e-9})
    CHECK(std::abs(g.quantile(u) * gr.quantile(1.0 - u) - 1.0) < 1e-8);
}

TEST_CASE("oracle round trip on 99 interior points") {
  Hyperbolic h(kBMW);
  VarianceGamma v(VGParams{2.0, 3.0, 1.0, 0.0});
  VarianceGamma v2(VGParams{0.4, 2.0, 0.5, 0.0});
  GIG g(GIGParams{0.5, 1.0, 2.0});
  Stable s(StableParams{1.7, 0.5, 0.0, 1.0});
  int i = 0;
  for (const Distribution* d : {static_cast<const Distribution*>(&h), static_cast<const Distribution*>(&v),
                                static_cast<const Distribution*>(&v2), static_cast<const Distribution*>(&g),
                                static_cast<const Distribution*>(&s)}) {
    double worst = 0.0;
    for (int k = 1; k <= 99; ++k) {
      const double u = k / 100.0;
      const double x = d->quantile(u);
      worst = std::max(worst, std::abs(d->cdf(x) - u));
    }
    CHECK_MESSAGE(worst <= 1e-12, "family index " << i << " worst " << worst);
    ++i;
  }
  // extreme levels, measured on the small side
  for (double u : {1e-12, 1e-10}) {
    CHECK(std::abs(h.cdf(h.quantile(u)) - u) <= 1e-12 * u + 1e-25);
    const double up = 1 - u, v = 1 - up;  // v is the representable upper tail mass
    CHECK(std::abs(h.sf(h.quantile(up)) - v) <= 1e-11 * v);
  }
}

TEST_CASE("oracle values and determinism") {
  Hyperbolic h(kBMW);
  const double q = h.quantile(0.5);
  CHECK(q == Hyperbolic(kBMW).quantile(0.5));
  CHECK(std::abs(q - (-0.0008363965675000592)) < 1e-12);
  Hyperbolic sym(HypParams{2.0, 0.0, 0.5, 1.25});
  CHECK(std::abs(sym.quantile(0.5) - 1.25) < 1e-13);
  CHECK_THROWS_AS(h.quantile(0.0), ParameterError);
  CHECK_THROWS_AS(h.quantile(1.5), ParameterError);
}

TEST_CASE("modes") {
  Hyperbolic h(HypParams{2.0, 0.7, 1.3, 0.1});
  CHECK(std::abs(argmax_pdf(h, -5, 5) - h.mode()) < 1e-8);
  CHECK(std::abs(h.mode() - (0.1 + 1.3 * 0.7 / std::sqrt(4.0 - 0.49))) < 1e-15);
  GIG g1(GIGParams{1.0, 1.0, 3.7});
  CHECK(g1.mode() == doctest::Approx(1.0).epsilon(1e-15));
  GIG g(GIGParams{-0.6, 1.5, 0.9});
  CHECK(std::abs(argmax_pdf(g, 1e-3, 10) - g.mode()) < 1e-8);
  // No formula for VG with lambda > 1: check the density is maximal there.
  VarianceGamma v(VGParams{2.0, 3.0, 1.0, 0.0});
  CHECK(v.mode() > 0.0);
  for (double dx : {1e-6, 1e-3, 0.1}) {
    CHECK(v.pdf(v.mode()) >= v.pdf(v.mode() + dx));
    CHECK(v.pdf(v.mode()) >= v.pdf(v.mode() - dx));
  }
  VarianceGamma v0(VGParams{0.8, 3.0, 1.0, 0.5});
  CHECK(v0.mode() == 0.5);
}

TEST_CASE("condition number") {
  Hyperbolic sym(HypParams{2.0, 0.0, 1.0, 0.0});
  CHECK_THROWS_AS(sym.condition_number(0.5), ParameterError);
  GIG g(GIGParams{0.5, 1.0, 2.0});
  for (double u : {0.1, 0.5, 0.9}) {
    const double h = 1e-5;
    const double dq = (g.quantile(u + h) - g.quantile(u - h)) / (2 * h);
    CHECK(g.condition_number(u) == doctest::Approx(u * dq / g.quantile(u)).epsilon(1e-6));
  }
  // kappa grows without bound toward the upper tail
  CHECK(sym.condition_number(1 - 1e-8) > sym.condition_number(0.9));
}
