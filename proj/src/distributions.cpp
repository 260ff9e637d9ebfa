#include "qfa/distributions.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <numbers>

#include "qfa/errors.hpp"
#include "qfa/special.hpp"

namespace qfa {

namespace {

constexpr double kQuadTol = 1e-15;

template <class F>
double half_line(F f) {
  // integrate() is not const-qualified in this boost version.
  static thread_local boost::math::quadrature::exp_sinh<double> es(12);
  double err = 0.0, l1 = 0.0;
  std::size_t levels = 0;
  const double r = es.integrate(f, kQuadTol, &err, &l1, &levels);
  if (!std::isfinite(r)) throw ConvergenceError("cdf: quadrature produced a non-finite value");
  return r;
}

template <class F>
double finite_interval(F f, double a, double b) {
  static thread_local boost::math::quadrature::tanh_sinh<double> ts(12);
  if (!(b > a)) return 0.0;
  double err = 0.0, l1 = 0.0;
  std::size_t levels = 0;
  const double r = ts.integrate(f, a, b, kQuadTol, &err, &l1, &levels);
  if (!std::isfinite(r)) throw ConvergenceError("cdf: quadrature produced a non-finite value");
  return r;
}

double clamp01(double p) { return std::min(1.0, std::max(0.0, p)); }

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::hyperbolic: return "hyp";
    case Family::vg: return "vg";
    case Family::gig: return "gig";
    case Family::stable: return "stable";
  }
  return "?";
}

Family family_from_name(const std::string& s) {
  if (s == "hyp" || s == "hyperbolic") return Family::hyperbolic;
  if (s == "vg") return Family::vg;
  if (s == "gig") return Family::gig;
  if (s == "stable") return Family::stable;
  throw ParameterError("unknown distribution family '" + s + "'");
}

// ---- parameter records -----------------------------------------------------

HypParams HypParams::from_standard(double alpha, double beta, double delta, double mu) {
  HypParams p{delta * alpha, delta * beta, delta, mu};
  if (!(delta > 0.0)) throw ParameterError("constraint delta>0 violated");
  if (!(alpha > 0.0)) throw ParameterError("constraint alpha>0 violated");
  if (!(std::abs(beta) < alpha)) throw ParameterError("constraint |beta|<alpha violated");
  p.validate();
  return p;
}

double HypParams::gamma1() const { return std::sqrt(alpha1 * alpha1 - beta1 * beta1); }

double HypParams::n0() const { return 2.0 * alpha1 * bessel_k(1.0, gamma1()) / gamma1(); }

void HypParams::validate() const {
  if (!(alpha1 > 0.0) || !std::isfinite(alpha1)) throw ParameterError("constraint alpha>0 violated");
  if (!(std::abs(beta1) < alpha1)) throw ParameterError("constraint |beta|<alpha violated");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ParameterError("constraint delta>0 violated");
  if (!std::isfinite(mu)) throw ParameterError("constraint mu finite violated");
}

double VGParams::gamma() const { return std::sqrt(alpha * alpha - beta * beta); }

void VGParams::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ParameterError("constraint lambda>0 violated");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ParameterError("constraint alpha>0 violated");
  if (!(std::abs(beta) < alpha)) throw ParameterError("constraint |beta|<alpha violated");
  if (!std::isfinite(mu)) throw ParameterError("constraint mu finite violated");
}

void GIGParams::validate() const {
  if (!std::isfinite(lambda)) throw ParameterError("constraint lambda finite violated");
  if (!(eta > 0.0) || !std::isfinite(eta)) throw ParameterError("constraint eta>0 violated");
  if (!(omega > 0.0) || !std::isfinite(omega)) throw ParameterError("constraint omega>0 violated");
}

double StableParams::k_alpha() const {
  const double s = alpha < 1.0 ? 1.0 : (alpha > 1.0 ? -1.0 : 0.0);
  return alpha - 1.0 + s;
}

void StableParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw ParameterError("constraint 0<alpha<=2 violated");
  if (!(beta2 >= -1.0 && beta2 <= 1.0)) throw ParameterError("constraint |beta|<=1 violated");
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw ParameterError("constraint sigma>0 violated");
  if (!std::isfinite(mu2)) throw ParameterError("constraint mu finite violated");
  if (alpha == 1.0 && beta2 != 0.0)
    throw ParameterError("constraint beta=0 when alpha=1 violated");
  if (alpha < 1.0 && std::abs(beta2) > 0.9)
    throw ParameterError("constraint |beta|<=0.9 when alpha<1 violated");
}

// ---- generic machinery -----------------------------------------------------

double Distribution::lower_mass(double x) const {
  const double lo = support_lo();
  if (x <= lo) return 0.0;
  if (std::isfinite(lo)) return finite_interval([&](double t) { return pdf(t); }, lo, x);
  const double w = width();
  return w * half_line([&](double t) { return pdf(x - w * t); });
}

double Distribution::upper_mass(double x) const {
  const double lo = support_lo();
  if (x < lo) x = lo;
  const double w = width();
  return w * half_line([&](double t) { return pdf(x + w * t); });
}

double Distribution::cdf(double x) const {
  if (x <= support_lo()) return 0.0;
  return x <= mode() ? clamp01(lower_mass(x)) : clamp01(1.0 - upper_mass(x));
}

double Distribution::sf(double x) const {
  if (x <= support_lo()) return 1.0;
  return x > mode() ? clamp01(upper_mass(x)) : clamp01(1.0 - lower_mass(x));
}

double Distribution::tail_guess(double) const { return mode(); }

double Distribution::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw ParameterError("quantile: u must lie in (0,1)");
  const bool upper = u > 0.5;
  const double v = 1.0 - u;
  // Increasing in x; evaluated on the side where it carries full precision.
  auto h = [&](double x) { return upper ? v - sf(x) : cdf(x) - u; };

  const double lo_sup = support_lo();
  const double w = width();
  double x = (u < 0.05 || u > 0.95) ? tail_guess(u) : mode();
  if (!std::isfinite(x) || x <= lo_sup) x = mode();

  double a = x, b = x, ha = h(x), hb = ha;
  double step = w;
  for (int it = 0; ha > 0.0; ++it) {
    if (it > 200) throw ConvergenceError("quantile: bracket failure");
    b = a;
    hb = ha;
    a = std::isfinite(lo_sup) ? lo_sup + (a - lo_sup) * 0.5 : a - step;
    if (std::isfinite(lo_sup) && a - lo_sup < 1e-300) throw ConvergenceError("quantile: bracket failure");
    step *= 2.0;
    ha = h(a);
  }
  step = w;
  for (int it = 0; hb < 0.0; ++it) {
    if (it > 200) throw ConvergenceError("quantile: bracket failure");
    a = b;
    ha = hb;
    b += step;
    step *= 2.0;
    hb = h(b);
  }
  if (ha == 0.0) return a;
  if (hb == 0.0) return b;

  // Safeguarded Newton inside [a, b].
  x = std::abs(ha) < std::abs(hb) ? a : b;
  double hx = x == a ? ha : hb;
  for (int it = 0; it < 200; ++it) {
    const double f = pdf(x);
    double xn = (f > 0.0 && std::isfinite(f)) ? x - hx / f : 0.5 * (a + b);
    if (!(xn > a && xn < b)) xn = 0.5 * (a + b);
    const double dx = std::abs(xn - x);
    x = xn;
    hx = h(x);
    if (hx == 0.0) return x;
    if (hx < 0.0) a = x; else b = x;
    const double tol = 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(x), 1e-300);
    if (dx <= tol || b - a <= tol) return x;
  }
  return x;
}

double Distribution::condition_number(double u) const {
  const double q = quantile(u);
  // The oracle resolves a zero only to rounding level.
  if (std::abs(q) <= 1e-12 * width()) throw ParameterError("condition_number: Q(u) = 0");
  return u / (pdf(q) * std::abs(q));
}

double argmax_pdf(const Distribution& d, double a, double b) {
  auto negl = [&](double x) {
    const double f = d.pdf(x);
    return f > 0.0 ? -std::log(f) : std::numeric_limits<double>::max();
  };
  std::uintmax_t iters = 500;
  return boost::math::tools::brent_find_minima(negl, a, b, 52, iters).first;
}

// ---- hyperbolic -------------------------------------------------------------

Hyperbolic::Hyperbolic(const HypParams& p) : p_(p) {
  p_.validate();
  const double g = p_.gamma1();
  log_norm_ = std::log(g / (2.0 * p_.alpha1)) - log_bessel_k(1.0, g);
}

double Hyperbolic::pdf_std(double x) const {
  return std::exp(log_norm_ - p_.alpha1 * std::hypot(1.0, x) + p_.beta1 * x);
}

double Hyperbolic::pdf(double x) const { return pdf_std((x - p_.mu) / p_.delta) / p_.delta; }

double Hyperbolic::mode() const { return p_.mu + p_.delta * p_.beta1 / p_.gamma1(); }

double Hyperbolic::width() const {
  const double xm = p_.beta1 / p_.gamma1();
  const double core = std::sqrt(std::pow(1.0 + xm * xm, 1.5) / p_.alpha1);
  return p_.delta * std::min(core, 1.0 / (p_.alpha1 - std::abs(p_.beta1)));
}

double Hyperbolic::tail_guess(double u) const {
  const double n0 = p_.n0();
  double y;
  if (u > 0.5) {
    const double r = p_.alpha1 - p_.beta1;
    y = -std::log(n0 * r * (1.0 - u)) / r;
  } else {
    const double r = p_.alpha1 + p_.beta1;
    y = std::log(n0 * r * u) / r;
  }
  return p_.mu + p_.delta * y;
}

// ---- variance gamma ---------------------------------------------------------

VarianceGamma::VarianceGamma(const VGParams& p) : p_(p) {
  p_.validate();
  const double l = p_.lambda;
  log_n0_ = (l - 0.5) * std::log(2.0 * p_.alpha) + 0.5 * std::log(std::numbers::pi) + ln_gamma(l) -
            2.0 * l * std::log(p_.gamma());
  // The density is maximal at mu unless it is smooth there (lambda > 1).
  mode_ = p_.mu;
  if (l > 1.0 && p_.beta != 0.0) {
    const double span = 4.0 * l / (p_.alpha - std::abs(p_.beta));
    const double a = p_.beta > 0.0 ? p_.mu : p_.mu - span;
    const double b = p_.beta > 0.0 ? p_.mu + span : p_.mu;
    mode_ = argmax_pdf(*this, a, b);
  }
  p_minus_ = lower_mass(p_.mu);
}

double VarianceGamma::pdf(double x) const {
  const double y = x - p_.mu;
  const double nu = p_.lambda - 0.5;
  if (y == 0.0) {
    if (nu <= 0.0) return std::numeric_limits<double>::infinity();
    // |y|^nu K_nu(a|y|) -> Gamma(nu) 2^{nu-1} a^{-nu}
    return std::exp(-log_n0_ + ln_gamma(nu) + (nu - 1.0) * std::log(2.0) - nu * std::log(p_.alpha));
  }
  const double ay = std::abs(y);
  return std::exp(-log_n0_ + nu * std::log(ay) + log_bessel_k(nu, p_.alpha * ay) + p_.beta * y);
}

// The density is not smooth at mu, so the quadrature is split there.
double VarianceGamma::cdf(double x) const {
  return x <= p_.mu ? clamp01(lower_mass(x)) : clamp01(1.0 - upper_mass(x));
}

double VarianceGamma::sf(double x) const {
  return x > p_.mu ? clamp01(upper_mass(x)) : clamp01(1.0 - lower_mass(x));
}

double VarianceGamma::mode() const { return mode_; }

double VarianceGamma::width() const {
  return std::sqrt(p_.lambda) / std::sqrt(p_.alpha * p_.alpha - p_.beta * p_.beta) +
         0.5 / (p_.alpha - std::abs(p_.beta));
}

double VarianceGamma::tail_guess(double u) const {
  // 1 - F ~ C x^{l-1} e^{-(a-b) x}; leading order only.
  const double lc = -(log_n0_ - 0.5 * std::log(std::numbers::pi) + 0.5 * std::log(2.0 * p_.alpha));
  if (u > 0.5) {
    const double r = p_.alpha - p_.beta;
    return p_.mu - (std::log(1.0 - u) - lc + std::log(r)) / r;
  }
  const double r = p_.alpha + p_.beta;
  return p_.mu + (std::log(u) - lc + std::log(r)) / r;
}

// ---- GIG --------------------------------------------------------------------

GIG::GIG(const GIGParams& p) : p_(p) {
  p_.validate();
  log_kl_ = log_bessel_k(p_.lambda, p_.omega);
}

double GIG::pdf(double x) const {
  if (x < 0.0) throw ParameterError("GIG pdf: x must be positive");
  if (x == 0.0) return 0.0;
  const double t = x / p_.eta;
  const double l = p_.lambda, w = p_.omega;
  return std::exp((l - 1.0) * std::log(t) - 0.5 * w * (1.0 / t + t) - std::log(2.0) - log_kl_) / p_.eta;
}

double GIG::mode() const {
  const double l = p_.lambda, w = p_.omega;
  return p_.eta * (l - 1.0 + std::sqrt((l - 1.0) * (l - 1.0) + w * w)) / w;
}

double GIG::width() const { return 1.0 / pdf(mode()); }

double GIG::tail_guess(double u) const {
  const double w = p_.omega;
  const double lk = std::log(2.0) + log_kl_;  // K_{-l} = K_l
  double y;
  if (u > 0.5) {
    y = -(2.0 / w) * (lk + std::log(1.0 - u));
  } else {
    const double r = -(2.0 / w) * (lk + std::log(u));
    y = r > 0.0 ? 1.0 / r : mode() / p_.eta;
  }
  return y > 0.0 ? p_.eta * y : mode();
}

std::unique_ptr<Distribution> make_distribution(const HypParams& p) {
  return std::make_unique<Hyperbolic>(p);
}
std::unique_ptr<Distribution> make_distribution(const VGParams& p) {
  return std::make_unique<VarianceGamma>(p);
}
std::unique_ptr<Distribution> make_distribution(const GIGParams& p) {
  return std::make_unique<GIG>(p);
}
std::unique_ptr<Distribution> make_distribution(const StableParams& p) {
  return std::make_unique<Stable>(p);
}

}  // namespace qfa
