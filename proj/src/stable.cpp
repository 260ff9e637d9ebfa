#include "qfa/stable.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/sin_pi.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <mutex>
#include <numbers>

#include "qfa/acceleration.hpp"
#include "qfa/errors.hpp"

namespace qfa {

namespace mp = boost::multiprecision;
using mp50 = mp::cpp_bin_float_50;
using mp100 = mp::cpp_bin_float_100;

namespace {

constexpr double kLn10 = 2.302585092994045684;

double k_of(double alpha) {
  const double s = alpha < 1.0 ? 1.0 : (alpha > 1.0 ? -1.0 : 0.0);
  return alpha - 1.0 + s;
}

// f_n / n! of the central series and ft_n / n! of the tail series, in double.
double central_coeff(double alpha, double zeta, int n) {
  const double mag = std::exp(std::lgamma(n / alpha + 1.0) - std::lgamma(n + 1.0)) / n;
  const double sgn = (n % 2 == 1) ? 1.0 : -1.0;
  return sgn * mag * boost::math::sin_pi(0.5 * n * zeta) / std::numbers::pi;
}

double tail_coeff(double alpha, double eta, int n) {
  const double mag = std::exp(std::lgamma(alpha * n + 1.0) - std::lgamma(n + 1.0)) / n;
  const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
  return sgn * mag * boost::math::sin_pi(0.5 * n * eta) / (alpha * std::numbers::pi);
}

// Term n of either series at x, formed in log space so that huge
// coefficients times tiny powers do not overflow.
double central_term(double alpha, double zeta, int n, double x) {
  const double l = std::lgamma(n / alpha + 1.0) - std::lgamma(n + 1.0) - std::log(n * std::numbers::pi) +
                   n * std::log(x);
  const double sgn = (n % 2 == 1) ? 1.0 : -1.0;
  return sgn * std::exp(l) * boost::math::sin_pi(0.5 * n * zeta);
}

double tail_term(double alpha, double eta, int n, double x) {
  const double l = std::lgamma(alpha * n + 1.0) - std::lgamma(n + 1.0) -
                   std::log(n * alpha * std::numbers::pi) - alpha * n * std::log(x);
  const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
  return sgn * std::exp(l) * boost::math::sin_pi(0.5 * n * eta);
}

// log10 of |term n| without the sine factor.
double central_log10(double alpha, int n, double x) {
  return (std::lgamma(n / alpha + 1.0) - std::lgamma(n + 1.0) - std::log(n * std::numbers::pi) +
          n * std::log(x)) / kLn10;
}

double tail_log10(double alpha, int n, double x) {
  return (std::lgamma(alpha * n + 1.0) - std::lgamma(n + 1.0) -
          std::log(n * alpha * std::numbers::pi) - alpha * n * std::log(x)) / kLn10;
}

template <class T>
struct CoeffCache {
  std::vector<T> c;  // c[0] unused
  T lfact = 0;
};

}  // namespace

struct StableCdfSeries::Impl {
  double alpha, beta, zeta, eta;
  bool central_conv;
  mutable std::mutex mu;
  mutable CoeffCache<mp50> c50;
  mutable CoeffCache<mp100> c100;

  template <class T>
  void extend(CoeffCache<T>& cc, int n) const {
    if (cc.c.empty()) cc.c.push_back(T(0));
    const T a(alpha);
    const T pi = boost::math::constants::pi<T>();
    for (int k = static_cast<int>(cc.c.size()); k <= n; ++k) {
      cc.lfact += log(T(k));
      T v;
      if (central_conv) {
        v = exp(boost::math::lgamma(T(k) / a + 1) - cc.lfact) / k / pi;
        v *= boost::math::sin_pi(T(k) * T(zeta) / 2);
        if (k % 2 == 0) v = -v;
      } else {
        v = exp(boost::math::lgamma(a * k + 1) - cc.lfact) / k / (a * pi);
        v *= boost::math::sin_pi(T(k) * T(eta) / 2);
        if (k % 2 == 1) v = -v;
      }
      cc.c.push_back(v);
    }
  }

  template <class T>
  std::vector<T> coeffs(CoeffCache<T>& cc, int n) const {
    std::lock_guard<std::mutex> lock(mu);
    if (static_cast<int>(cc.c.size()) <= n) extend(cc, n);
    return std::vector<T>(cc.c.begin(), cc.c.begin() + n + 1);
  }

  double conv_log10(int n, double x) const {
    return central_conv ? central_log10(alpha, n, x) : tail_log10(alpha, n, x);
  }
  double asym_log10(int n, double x) const {
    return central_conv ? tail_log10(alpha, n, x) : central_log10(alpha, n, x);
  }

  // Smallest term bound of the asymptotic side, and where it sits.
  std::pair<double, int> asym_min(double x) const {
    double best = 1e300;
    int at = 1;
    for (int n = 1; n < 400; ++n) {
      const double t = asym_log10(n, x);
      if (t < best) {
        best = t;
        at = n;
        if (t < -22.0) break;
      } else if (n > at + 8) {
        break;
      }
    }
    return {best, at};
  }

  // Terms needed by the convergent side and its peak magnitude.
  std::pair<int, double> conv_extent(double x) const {
    double peak = -1e300;
    int n = 1;
    for (;; ++n) {
      const double t = conv_log10(n, x);
      peak = std::max(peak, t);
      if (n > 4 && t < peak && t < -24.0) break;
      if (n > 20000) throw ConvergenceError("stable_cdf: series too long at this argument");
    }
    return {n, peak};
  }
};

StableCdfSeries::StableCdfSeries(double alpha, double beta2) : impl_(std::make_unique<Impl>()) {
  if (alpha == 1.0) throw ParameterError("StableCdfSeries: alpha = 1 has no series pair");
  const double k = k_of(alpha);
  impl_->alpha = alpha;
  impl_->beta = beta2;
  impl_->zeta = 1.0 + beta2 * k / alpha;
  impl_->eta = alpha + beta2 * k;
  impl_->central_conv = alpha > 1.0;
  u0_ = 0.5 * (1.0 - beta2 * k / alpha);
}

StableCdfSeries::~StableCdfSeries() = default;

namespace {

template <class T>
std::pair<T, T> sum_convergent(const std::vector<T>& c, bool central, double x, double alpha) {
  // central: S = sum c_n x^n; tail: S = sum c_n y^n with y = x^{-alpha}
  T v = central ? T(x) : pow(T(x), -T(alpha));
  T s = 0;
  for (int n = static_cast<int>(c.size()) - 1; n >= 1; --n) s = (s + c[n]) * v;
  T d = 0;  // sum n c_n v^{n-1}
  for (int n = static_cast<int>(c.size()) - 1; n >= 1; --n) d = d * v + c[n] * n;
  return {s, d};
}

}  // namespace

std::pair<double, double> StableCdfSeries::cdf_pos(double x) const {
  if (x < 0.0) throw ParameterError("StableCdfSeries::cdf_pos: x must be >= 0");
  if (x == 0.0) return {u0_, 1.0 - u0_};
  if (std::isinf(x)) return {1.0, 0.0};
  const Impl& m = *impl_;
  const auto [amin, at] = m.asym_min(x);
  if (amin <= -17.0) {
    std::vector<double> terms;
    for (int n = 1; n <= at + 1; ++n) {
      terms.push_back(m.central_conv ? tail_term(m.alpha, m.eta, n, x)
                                     : central_term(m.alpha, m.zeta, n, x));
    }
    double s = 0.0;
    for (int n = 0; n < at; ++n) s += terms[n];
    if (m.central_conv) return {1.0 + s, -s};
    return {u0_ + s, (1.0 - u0_) - s};
  }
  const auto [n, peak] = m.conv_extent(x);
  auto finish = [&](auto s) -> std::pair<double, double> {
    using T = decltype(s);
    if (m.central_conv) return {static_cast<double>(T(u0_) + s), static_cast<double>(T(1) - T(u0_) - s)};
    return {static_cast<double>(T(1) + s), static_cast<double>(-s)};
  };
  if (peak <= 30.0) return finish(sum_convergent(m.coeffs(m.c50, n), m.central_conv, x, m.alpha).first);
  if (peak <= 80.0) return finish(sum_convergent(m.coeffs(m.c100, n), m.central_conv, x, m.alpha).first);
  throw ConvergenceError("stable_cdf: argument outside the supported region");
}

double StableCdfSeries::pdf_pos(double x) const {
  if (x < 0.0) throw ParameterError("StableCdfSeries::pdf_pos: x must be >= 0");
  const Impl& m = *impl_;
  if (x == 0.0) {
    if (m.central_conv) return central_coeff(m.alpha, m.zeta, 1);
    x = 1e-300;
  }
  const auto [amin, at] = m.asym_min(x);
  if (amin <= -17.0) {
    double s = 0.0;
    for (int n = 1; n <= at; ++n) {
      if (m.central_conv) {
        s += tail_term(m.alpha, m.eta, n, x) * (-m.alpha * n) / x;
      } else {
        s += central_term(m.alpha, m.zeta, n, x) * n / x;
      }
    }
    return s;
  }
  const auto [n, peak] = m.conv_extent(x);
  auto finish = [&](auto d) -> double {
    using T = decltype(d);
    if (m.central_conv) return static_cast<double>(d);
    // dG/dx = dG/dy * dy/dx, y = x^{-alpha}
    return static_cast<double>(d * T(-m.alpha) * pow(T(x), -T(m.alpha) - 1));
  };
  if (peak <= 30.0) return finish(sum_convergent(m.coeffs(m.c50, n), m.central_conv, x, m.alpha).second);
  if (peak <= 80.0) return finish(sum_convergent(m.coeffs(m.c100, n), m.central_conv, x, m.alpha).second);
  throw ConvergenceError("stable_pdf: argument outside the supported region");
}

std::vector<double> StableCdfSeries::central_partial_sums(double x, int n) const {
  std::vector<double> s;
  double acc = u0_;
  for (int k = 1; k <= n; ++k) {
    acc += central_coeff(impl_->alpha, impl_->zeta, k) * std::pow(x, k);
    s.push_back(acc);
  }
  return s;
}

// ---- parametrizations ---------------------------------------------------------

StableParams stable_convert(const StableParams& p, StableParametrization to) {
  if (p.alpha == 1.0) throw ParameterError("stable_convert: alpha = 1 is degenerate");
  if (p.tag == to) return p;
  const double a = p.alpha, k = k_of(a);
  StableParams r = p;
  r.tag = to;
  if (to == StableParametrization::P1) {
    const double h = 0.5 * std::numbers::pi * k * p.beta2;
    r.mu2 = p.mu2 * p.sigma2;
    r.sigma2 = std::pow(std::cos(h) * p.sigma2, 1.0 / a);
    r.beta2 = a == 2.0 ? 0.0 : std::tan(h) / std::tan(0.5 * std::numbers::pi * a);
    return r;
  }
  // P1 -> P2: invert beta1 = cot(pi a/2) tan(pi K beta2 / 2), monotone in beta2.
  const double b2 = a == 2.0 ? 0.0
                             : 2.0 / (std::numbers::pi * k) *
                                   std::atan(p.beta2 * std::tan(0.5 * std::numbers::pi * a));
  const double h = 0.5 * std::numbers::pi * k * b2;
  r.beta2 = b2;
  r.sigma2 = std::pow(p.sigma2, a) / std::cos(h);
  r.mu2 = p.mu2 / r.sigma2;
  return r;
}

StableSeriesPair stable_cdf_coeffs(const StableParams& p, int N) {
  if (p.alpha == 1.0) throw ParameterError("stable_cdf_coeffs: alpha = 1 has no series pair");
  const double a = p.alpha, k = k_of(a);
  const double zeta = 1.0 + p.beta2 * k / a, eta = a + p.beta2 * k;
  StableSeriesPair s;
  s.u0 = 0.5 * (1.0 - p.beta2 * k / a);
  std::vector<double> c(N + 1), t(N + 1);
  c[0] = s.u0;
  t[0] = 1.0;
  for (int n = 1; n <= N; ++n) {
    c[n] = central_coeff(a, zeta, n);
    t[n] = tail_coeff(a, eta, n);
  }
  s.central = PowerSeries(0.0, c);
  s.tail = PowerSeries(0.0, t);
  s.central_convergent = a > 1.0;
  s.tail_convergent = a < 1.0;
  return s;
}

double stable_cdf_series(const StableParams& p, double x) {
  if (x >= 0.0) return StableCdfSeries(p.alpha, p.beta2).cdf_pos(x).first;
  return StableCdfSeries(p.alpha, -p.beta2).cdf_pos(-x).second;
}

// ---- Stable distribution -------------------------------------------------------

Stable::Stable(const StableParams& p)
    : p_(p.tag == StableParametrization::P2 ? p : stable_convert(p, StableParametrization::P2)) {
  p_.validate();
  if (p_.alpha != 1.0 && p_.alpha != 2.0) {
    pos_ = std::make_unique<StableCdfSeries>(p_.alpha, p_.beta2);
    neg_ = std::make_unique<StableCdfSeries>(p_.alpha, -p_.beta2);
  }
  mode_ = 0.0;
  if (p_.beta2 != 0.0 && p_.alpha != 2.0) {
    const double s = scale(), c = location();
    mode_ = argmax_pdf(*this, c - 3.0 * s, c + 3.0 * s);
  } else {
    mode_ = location();
  }
}

Stable::~Stable() = default;

double Stable::scale() const { return std::pow(p_.sigma2, 1.0 / p_.alpha); }
double Stable::location() const { return p_.mu2 * p_.sigma2; }

double Stable::cdf_std(double x) const {
  if (p_.alpha == 2.0) return 0.5 * boost::math::erfc(-0.5 * x);  // N(0, 2)
  if (p_.alpha == 1.0) return 0.5 + std::atan(x) / std::numbers::pi;
  return x >= 0.0 ? pos_->cdf_pos(x).first : neg_->cdf_pos(-x).second;
}

double Stable::pdf_std(double x) const {
  if (p_.alpha == 2.0) return std::exp(-0.25 * x * x) / (2.0 * std::sqrt(std::numbers::pi));
  if (p_.alpha == 1.0) return 1.0 / (std::numbers::pi * (1.0 + x * x));
  return std::max(0.0, x >= 0.0 ? pos_->pdf_pos(x) : neg_->pdf_pos(-x));
}

double Stable::pdf(double x) const { return pdf_std((x - location()) / scale()) / scale(); }

double Stable::cdf(double x) const { return cdf_std((x - location()) / scale()); }

double Stable::sf(double x) const {
  const double t = (x - location()) / scale();
  if (p_.alpha == 2.0) return 0.5 * boost::math::erfc(0.5 * t);
  if (p_.alpha == 1.0) return 0.5 - std::atan(t) / std::numbers::pi;
  return t >= 0.0 ? pos_->cdf_pos(t).second : neg_->cdf_pos(-t).first;
}

double Stable::mode() const { return mode_; }
double Stable::width() const { return scale(); }

double Stable::tail_guess(double u) const {
  const bool upper = u > 0.5;
  const double v = upper ? 1.0 - u : u;
  const double b = upper ? p_.beta2 : -p_.beta2;
  double t;
  if (p_.alpha == 2.0) {
    t = 2.0 * std::sqrt(-std::log(2.0 * v));
  } else if (p_.alpha == 1.0) {
    t = 1.0 / (std::numbers::pi * v);
  } else {
    const double f1 = tail_coeff(p_.alpha, p_.alpha + b * k_of(p_.alpha), 1);
    t = f1 < 0.0 ? std::pow(v / -f1, -1.0 / p_.alpha) : 3.0;
  }
  return location() + scale() * (upper ? t : -t);
}

double stable_cdf(const StableParams& p, double x) { return Stable(p).cdf(x); }

// ---- quantile series --------------------------------------------------------------

PowerSeries stable_quantile_central(const StableParams& p, int N) {
  const StableSeriesPair s = stable_cdf_coeffs(p, N);
  if (s.central[1] == 0.0) throw ParameterError("stable_quantile_central: f_1 = 0");
  return ps_revert(s.central);
}

StableTailQuantile stable_quantile_tail(const StableParams& p, int N) {
  const StableSeriesPair s = stable_cdf_coeffs(p, N);
  if (std::abs(s.tail[1]) < 1e-14) throw ParameterError("stable_quantile_tail: degenerate tail series");
  return {ps_revert(s.tail), p.alpha};
}

double StableTailQuantile::operator()(double u) const {
  std::vector<double> terms;
  const double h = u - 1.0;
  double pw = h;
  for (int n = 1; n <= ginv.order(); ++n, pw *= h) terms.push_back(ginv[n] * pw);
  const double g = optimal_truncation(terms).second;
  if (!(g > 0.0)) throw ConvergenceError("stable tail quantile: G^{-1}(u) <= 0");
  return std::pow(g, -1.0 / alpha);
}

struct StableQuantileFunction::Side {
  StableParams p;  // standard form
  Stable d;
  double u0;
  bool central = false, tail = false;
  RationalApproximant pade;
  double radius = 0.0;
  StableTailQuantile tq;

  explicit Side(const StableParams& sp) : p(sp), d(sp), u0(0.5 * (1.0 - sp.beta2 * k_of(sp.alpha) / sp.alpha)) {
    if (p.alpha > 1.0 && p.alpha < 2.0) {
      const PowerSeries qs = stable_quantile_central(p, 24);
      radius = cauchy_hadamard_radius(qs.coeffs);
      pade = pade_from_taylor(qs, 12, 12);
      central = true;
    }
    if (p.alpha != 2.0 && p.alpha != 1.0) {
      tq = stable_quantile_tail(p, 40);
      tail = true;
    }
  }

  // u > u0 only.
  double eval(double u) const {
    double q = std::numeric_limits<double>::quiet_NaN();
    if (central && u - u0 <= 0.7 * radius) {
      q = pade(u);
    } else if (tail && u >= 0.995) {
      q = tq(u);
    }
    // Accept the series value only when it reproduces u; otherwise root-find.
    if (std::isfinite(q)) {
      const double res = u > 0.5 ? std::abs((1.0 - u) - d.sf(q)) : std::abs(d.cdf(q) - u);
      if (res <= 1e-12) return q;
    }
    return d.quantile(u);
  }
};

StableQuantileFunction::StableQuantileFunction(const StableParams& p0)
    : p_(p0.tag == StableParametrization::P2 ? p0 : stable_convert(p0, StableParametrization::P2)) {
  p_.validate();
  StableParams s = p_;
  s.mu2 = 0.0;
  s.sigma2 = 1.0;
  pos_ = std::make_unique<Side>(s);
  if (p_.beta2 != 0.0 && p_.alpha != 2.0) {
    s.beta2 = -s.beta2;
    neg_ = std::make_unique<Side>(s);
  }
}

StableQuantileFunction::~StableQuantileFunction() = default;

double StableQuantileFunction::u0() const { return pos_->u0; }

double StableQuantileFunction::operator()(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw ParameterError("stable_quantile: u must lie in (0,1)");
  double q;
  if (p_.alpha == 2.0 || p_.alpha == 1.0) {
    q = pos_->d.quantile(u);
  } else if (u == pos_->u0) {
    q = 0.0;
  } else if (u > pos_->u0) {
    q = pos_->eval(u);
  } else {
    // Reflection: Q(u; beta) = -Q(1 - u; -beta).
    q = -(neg_ ? *neg_ : *pos_).eval(1.0 - u);
  }
  return p_.mu2 * p_.sigma2 + std::pow(p_.sigma2, 1.0 / p_.alpha) * q;
}

double stable_quantile(const StableParams& p, double u) { return StableQuantileFunction(p)(u); }

}  // namespace qfa
