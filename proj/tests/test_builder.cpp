#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "qfa/builder.hpp"
#include "qfa/errors.hpp"
#include "qfa/serialize.hpp"

using namespace qfa;

namespace {

const ParamList kBMW{{"alpha", 89.72}, {"beta", 4.7184}, {"delta", 0.0014}, {"mu", -0.0015}};
const ParamList kVG{{"lambda", 2.0}, {"alpha", 3.0}, {"beta", 1.0}};
const ParamList kGIG{{"lambda", 0.5}, {"omega", 2.0}};
constexpr double kBMWEps = 2.98e-8;

const QuantileApproximant& bmw(Method m) {
  static std::map<Method, QuantileApproximant> cache;
  auto it = cache.find(m);
  if (it == cache.end()) {
    BuildOptions o;
    o.method = m;
    it = cache.emplace(m, build(Family::hyperbolic, kBMW, kBMWEps, o)).first;
  }
  return it->second;
}

// F(x) by Gauss-Kronrod on the density, independent of the library CDF.
double cdf_by_quadrature(const Distribution& d, double x) {
  using boost::math::quadrature::gauss_kronrod;
  const double w = d.width();
  auto g = [&](double t) {
    const double s = x - w * t / (1 - t);
    return d.pdf(s) * w / ((1 - t) * (1 - t));
  };
  double err = 0;
  return gauss_kronrod<double, 61>::integrate(g, 0.0, 1.0, 15, 1e-14, &err);
}

}  // namespace

TEST_CASE("partition") {
  for (const auto& [f, p] : {std::pair{Family::hyperbolic, kBMW}, std::pair{Family::vg, kVG},
                             std::pair{Family::gig, kGIG}}) {
    const RegionPartition r = partition_domain(f, p, 1e-8);
    CHECK(0.0 < r.tau_l);
    CHECK(r.tau_l < r.u1);
    CHECK(r.u1 < r.u2);
    CHECK(r.u2 < 1.0 - r.tau_r);
    CHECK(r.tau_l <= 1e-9);
    CHECK(r.tau_r >= 1e-10);
    const double rb = 0.5 * (r.u2 - r.u1);
    CHECK(rb <= std::min(std::abs(r.u_m - 0.1), std::abs(r.u_m - 0.9)) + 1e-15);
  }
  // BMW: p_m against quadrature, and u1 < p_m < u2
  const auto fp = make_params(Family::hyperbolic, kBMW);
  const auto d = make_distribution(fp);
  const RegionPartition r = partition_domain(Family::hyperbolic, kBMW, kBMWEps);
  CHECK(std::abs(r.u_m - cdf_by_quadrature(*d, d->mode())) < 1e-12);
  CHECK(r.u1 < r.u_m);
  CHECK(r.u_m < r.u2);
  // symmetric family: equal tails
  const RegionPartition s = partition_domain(Family::hyperbolic, {{"alpha", 2.0}, {"beta", 0.0}}, 1e-12);
  CHECK(s.tau_l == doctest::Approx(s.tau_r).epsilon(1e-6));
  CHECK(s.u_m == doctest::Approx(0.5).epsilon(1e-14));
  // VG: the central region stops at the non-smooth point F(mu)
  const RegionPartition v = partition_domain(Family::vg, kVG, 1e-8);
  const double pminus = make_distribution(make_params(Family::vg, kVG))->cdf(0.0);
  CHECK(v.u1 >= pminus - 1e-15);
}

TEST_CASE("BMW builds meet epsilon with every method") {
  for (Method m : {Method::pade, Method::cheby_pade, Method::chebyshev}) {
    const QuantileApproximant& a = bmw(m);
    CHECK(a.target_met);
    CHECK(a.central_degree() <= 24);
    const VerifyReport r = verify(a, 10000);
    CHECK_MESSAGE(r.max_error <= kBMWEps, method_name(m) << " " << r.max_error);
    CHECK(r.passed);
    CHECK(r.region_max.size() == 5);
  }
}

TEST_CASE("other families") {
  for (Method m : {Method::pade, Method::cheby_pade, Method::chebyshev}) {
    BuildOptions o;
    o.method = m;
    const QuantileApproximant g = build(Family::gig, kGIG, 1e-7, o);
    CHECK_MESSAGE(verify(g, 4000).max_error <= 1e-7, method_name(m));
    const QuantileApproximant v = build(Family::vg, kVG, 1e-8, o);
    CHECK_MESSAGE(verify(v, 4000).max_error <= 1e-8, method_name(m));
  }
  // location and scale are applied after the standardized approximant
  const QuantileApproximant g2 = build(Family::gig, {{"lambda", -0.7}, {"eta", 2.5}, {"omega", 1.2}}, 1e-9);
  CHECK(verify(g2, 2000).passed);
  const QuantileApproximant v2 = build(Family::vg, {{"lambda", 1.6}, {"alpha", 2.0}, {"beta", -0.5}, {"mu", 0.3}}, 1e-9);
  CHECK(verify(v2, 2000).passed);
}

TEST_CASE("loose target") {
  const QuantileApproximant a = build(Family::hyperbolic, kBMW, 1e-1);
  CHECK(a.central_degree() <= 2);
  CHECK(verify(a, 1000).passed);
}

TEST_CASE("evaluation properties") {
  const QuantileApproximant& a = bmw(Method::cheby_pade);
  const auto d = make_distribution(a.fp);
  // anchored at the mode
  const double um = a.partition.u_m, xm = d->mode();
  CHECK(std::abs(evaluate(a, um) - xm) <= kBMWEps / d->pdf(xm));
  // boundaries: both neighbours within 10 eps there
  for (std::size_t i = 1; i < a.pieces.size(); ++i) {
    const double b = a.pieces[i].lo;
    CHECK(roundtrip_error(*d, b, evaluate_piece(a, i - 1, b)) <= 10 * kBMWEps);
    CHECK(roundtrip_error(*d, b, evaluate_piece(a, i, b)) <= 10 * kBMWEps);
  }
  // monotone on a 10^4 grid
  double prev = -INFINITY;
  bool mono = true;
  for (int k = 1; k < 10000; ++k) {
    const double q = evaluate(a, k / 10000.0);
    mono = mono && q >= prev;
    prev = q;
  }
  CHECK(mono);
  CHECK_THROWS_AS(evaluate(a, 0.0), ParameterError);
  CHECK_THROWS_AS(evaluate(a, 1.0), ParameterError);
  // symmetric law: median is the location
  const QuantileApproximant s = build(Family::hyperbolic, {{"alpha", 3.0}, {"beta", 0.0}, {"mu", 0.25}}, 1e-10);
  CHECK(std::abs(evaluate(s, 0.5) - 0.25) <= 1e-10 / make_distribution(s.fp)->pdf(0.25));
}

TEST_CASE("verification grid") {
  const RegionPartition& p = bmw(Method::pade).partition;
  const std::vector<double> g = verification_grid(p, 1000);
  CHECK(std::find(g.begin(), g.end(), p.tau_l) != g.end());
  CHECK(std::find(g.begin(), g.end(), 1.0 - p.tau_r) != g.end());
  CHECK(g.front() <= 1e-10);
  CHECK(1.0 - g.back() <= 1.0000001e-10);
  CHECK(std::is_sorted(g.begin(), g.end()));
  CHECK(g.size() >= 990);
}

TEST_CASE("serialization and determinism") {
  const QuantileApproximant& a = bmw(Method::cheby_pade);
  BuildOptions o;
  const QuantileApproximant b = build(Family::hyperbolic, kBMW, kBMWEps, o);
  const std::string ja = to_json(a), jb = to_json(b);
  CHECK(ja == jb);
  const QuantileApproximant c = from_json(ja);
  CHECK(to_json(c) == ja);
  REQUIRE(c.params.size() == kBMW.size());
  for (std::size_t i = 0; i < kBMW.size(); ++i) {
    CHECK(c.params[i].first == kBMW[i].first);
    CHECK(c.params[i].second == kBMW[i].second);
  }
  bool same = true;
  for (int k = 1; k < 1000; ++k) same = same && evaluate(a, k / 1000.0) == evaluate(c, k / 1000.0);
  CHECK(same);
  CHECK(evaluate(a, 1e-12) == evaluate(c, 1e-12));

  // a corrupted coefficient is caught by verification
  QuantileApproximant t = c;
  for (Piece& p : t.pieces)
    if (p.region == RegionKind::central) p.rat.numer[1] *= 1.001;
  CHECK_FALSE(verify(t, 2000).passed);

  CHECK_THROWS_AS(from_json("{}"), ParameterError);
  CHECK_THROWS_AS(from_json("not json"), ParameterError);
}

TEST_CASE("stable models use the dispatcher") {
  const ParamList p{{"alpha", 1.7}, {"beta", 0.5}};
  const QuantileApproximant a = build(Family::stable, p, 1e-9);
  const StableParams sp{1.7, 0.5, 0.0, 1.0};
  for (double u : {0.01, 0.3, 0.7, 0.999}) CHECK(evaluate(a, u) == stable_quantile(sp, u));
  const QuantileApproximant b = from_json(to_json(a));
  CHECK(evaluate(b, 0.3) == evaluate(a, 0.3));
}

TEST_CASE("parameter errors") {
  CHECK_THROWS_WITH_AS(build(Family::hyperbolic, {{"alpha", 1.0}, {"beta", 2.0}}, 1e-8),
                       "constraint |beta|<alpha violated", ParameterError);
  CHECK_THROWS_AS(build(Family::gig, {{"lambda", 1.0}}, 1e-8), ParameterError);
  CHECK_THROWS_AS(build(Family::vg, {{"lambda", 1.0}, {"alpha", 2.0}, {"gamma", 1.0}}, 1e-8), ParameterError);
  CHECK_THROWS_AS(build(Family::gig, kGIG, 0.0), ParameterError);
}

TEST_CASE("anchor rule knob") {
  BuildOptions o;
  o.anchor = AnchorRule::symmetric;
  const QuantileApproximant a = build(Family::hyperbolic, kBMW, kBMWEps, o);
  CHECK(verify(a, 4000).passed);
}
