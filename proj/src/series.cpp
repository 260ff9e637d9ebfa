#include "qfa/series.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

#include "qfa/acceleration.hpp"
#include "qfa/errors.hpp"

namespace qfa {

namespace {

void require_same_center(const PowerSeries& a, const PowerSeries& b, const char* op) {
  if (a.center != b.center)
    throw ParameterError(std::string(op) + ": series centers differ");
}

int common_order(const PowerSeries& a, const PowerSeries& b) {
  return std::min(a.order(), b.order());
}

void require_nonempty(const PowerSeries& a, const char* op) {
  if (a.coeffs.empty()) throw ParameterError(std::string(op) + ": empty series");
}

}  // namespace

double PowerSeries::operator()(double x) const { return partial_sum(x, order()); }

double PowerSeries::partial_sum(double x, int n) const {
  const double t = x - center;
  double s = 0.0;
  for (int k = n; k >= 0; --k) s = s * t + coeffs[k];
  return s;
}

double PowerSeries::derivative_at(double x) const {
  const double t = x - center;
  double s = 0.0;
  for (int k = order(); k >= 1; --k) s = s * t + k * coeffs[k];
  return s;
}

PowerSeries PowerSeries::constant(double center, double value, int order) {
  std::vector<double> c(order + 1, 0.0);
  c[0] = value;
  return {center, std::move(c)};
}

PowerSeries PowerSeries::identity(double center, int order) {
  std::vector<double> c(order + 1, 0.0);
  c[0] = center;
  if (order >= 1) c[1] = 1.0;
  return {center, std::move(c)};
}

PowerSeries ps_add(const PowerSeries& a, const PowerSeries& b) {
  require_same_center(a, b, "ps_add");
  const int n = common_order(a, b);
  std::vector<double> c(n + 1);
  for (int i = 0; i <= n; ++i) c[i] = a[i] + b[i];
  return {a.center, std::move(c)};
}

PowerSeries ps_sub(const PowerSeries& a, const PowerSeries& b) {
  require_same_center(a, b, "ps_sub");
  const int n = common_order(a, b);
  std::vector<double> c(n + 1);
  for (int i = 0; i <= n; ++i) c[i] = a[i] - b[i];
  return {a.center, std::move(c)};
}

PowerSeries ps_scale(const PowerSeries& a, double s) {
  PowerSeries r = a;
  for (double& c : r.coeffs) c *= s;
  return r;
}

PowerSeries ps_mul(const PowerSeries& a, const PowerSeries& b) {
  require_same_center(a, b, "ps_mul");
  const int n = common_order(a, b);
  std::vector<double> c(n + 1, 0.0);
  for (int i = 0; i <= n; ++i) {
    double s = 0.0;
    for (int k = 0; k <= i; ++k) s += a[k] * b[i - k];
    c[i] = s;
  }
  return {a.center, std::move(c)};
}

PowerSeries ps_reciprocal(const PowerSeries& a) {
  require_nonempty(a, "ps_reciprocal");
  if (a[0] == 0.0) throw ParameterError("ps_reciprocal: zero constant term");
  const int n = a.order();
  std::vector<double> b(n + 1, 0.0);
  b[0] = 1.0 / a[0];
  for (int i = 1; i <= n; ++i) {
    double s = 0.0;
    for (int k = 1; k <= i; ++k) s += a[k] * b[i - k];
    b[i] = -s / a[0];
  }
  return {a.center, std::move(b)};
}

PowerSeries ps_exp(const PowerSeries& a) {
  require_nonempty(a, "ps_exp");
  const int n = a.order();
  std::vector<double> b(n + 1, 0.0);
  b[0] = std::exp(a[0]);
  for (int i = 1; i <= n; ++i) {
    double s = 0.0;
    for (int k = 1; k <= i; ++k) s += k * a[k] * b[i - k];
    b[i] = s / i;
  }
  return {a.center, std::move(b)};
}

PowerSeries ps_log(const PowerSeries& a) {
  require_nonempty(a, "ps_log");
  if (!(a[0] > 0.0)) throw ParameterError("ps_log: constant term must be positive");
  const int n = a.order();
  std::vector<double> b(n + 1, 0.0);
  b[0] = std::log(a[0]);
  for (int i = 1; i <= n; ++i) {
    double s = 0.0;
    for (int k = 1; k < i; ++k) s += k * b[k] * a[i - k];
    b[i] = (a[i] - s / i) / a[0];
  }
  return {a.center, std::move(b)};
}

PowerSeries ps_pow_real(const PowerSeries& a, double p) {
  require_nonempty(a, "ps_pow_real");
  const bool integral = p == std::floor(p);
  if (integral ? a[0] == 0.0 : !(a[0] > 0.0))
    throw ParameterError("ps_pow_real: constant term not admissible for this exponent");
  const int n = a.order();
  std::vector<double> b(n + 1, 0.0);
  b[0] = std::pow(a[0], p);
  for (int i = 1; i <= n; ++i) {
    double s = 0.0;
    for (int k = 1; k <= i; ++k) s += ((p + 1.0) * k - i) * a[k] * b[i - k];
    b[i] = s / (i * a[0]);
  }
  return {a.center, std::move(b)};
}

PowerSeries ps_derivative(const PowerSeries& a) {
  const int n = a.order();
  if (n <= 0) return PowerSeries::constant(a.center, 0.0, 0);
  std::vector<double> b(n);
  for (int i = 1; i <= n; ++i) b[i - 1] = i * a[i];
  return {a.center, std::move(b)};
}

PowerSeries ps_truncate(const PowerSeries& a, int order) {
  if (order > a.order()) throw ParameterError("ps_truncate: order exceeds series order");
  return {a.center, std::vector<double>(a.coeffs.begin(), a.coeffs.begin() + order + 1)};
}

PowerSeries ps_compose(const PowerSeries& outer, const PowerSeries& inner) {
  require_nonempty(outer, "ps_compose");
  require_nonempty(inner, "ps_compose");
  const double tol = 1e-12 * std::max(1.0, std::abs(outer.center));
  if (std::abs(inner[0] - outer.center) > tol)
    throw ParameterError("ps_compose: inner constant term differs from outer center");
  const int n = common_order(outer, inner);
  PowerSeries w = ps_truncate(inner, n);
  w.coeffs[0] = 0.0;
  // Horner in the series w.
  PowerSeries r = PowerSeries::constant(inner.center, outer[n], n);
  for (int k = n - 1; k >= 0; --k) {
    r = ps_mul(r, w);
    r.coeffs[0] += outer[k];
  }
  return r;
}

// ---------------------------------------------------------------- partitions

int PartitionMultiplicity::n() const {
  int s = 0;
  for (std::size_t j = 0; j < v.size(); ++j) s += static_cast<int>(j + 1) * v[j];
  return s;
}

int PartitionMultiplicity::parts() const {
  int s = 0;
  for (int x : v) s += x;
  return s;
}

namespace {

void enumerate(int remaining, int max_part, std::vector<int>& v,
               std::vector<PartitionMultiplicity>& out) {
  if (remaining == 0) {
    out.push_back({v});
    return;
  }
  for (int part = std::min(remaining, max_part); part >= 1; --part) {
    ++v[part - 1];
    enumerate(remaining - part, part, v, out);
    --v[part - 1];
  }
}

}  // namespace

const std::vector<PartitionMultiplicity>& partitions_of(int n) {
  if (n < 1) throw ParameterError("partitions_of: n must be positive");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<const std::vector<PartitionMultiplicity>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) {
    auto parts = std::make_unique<std::vector<PartitionMultiplicity>>();
    std::vector<int> v(n, 0);
    enumerate(n, n, v, *parts);
    it = cache.emplace(n, std::move(parts)).first;
  }
  return *it->second;
}

std::vector<PartitionMultiplicity> partitions_with_k_parts(int n, int k) {
  if (n < 1 || k < 1 || k > n) throw ParameterError("partitions_with_k_parts: need 1 <= k <= n");
  std::vector<PartitionMultiplicity> out;
  for (const auto& p : partitions_of(n))
    if (p.parts() == k) out.push_back(p);
  return out;
}

double bell_polynomial(int n, int k, const std::vector<double>& f) {
  if (k < 1 || k > n) throw ParameterError("bell_polynomial: need 1 <= k <= n");
  if (static_cast<int>(f.size()) < n - k + 1)
    throw ParameterError("bell_polynomial: too few arguments");
  const double log_nfact = std::lgamma(n + 1.0);
  double sum = 0.0;
  for (const auto& p : partitions_of(n)) {
    if (p.parts() != k) continue;
    // n! / prod v_j! (j!)^v_j, accumulated in logs to stay finite for n <= 170.
    double log_c = log_nfact;
    double prod = 1.0;
    for (int j = 1; j <= n; ++j) {
      const int vj = p.v[j - 1];
      if (vj == 0) continue;
      log_c -= std::lgamma(vj + 1.0) + vj * std::lgamma(j + 1.0);
      prod *= std::pow(f[j - 1], vj);
    }
    sum += std::round(std::exp(log_c)) * prod;
  }
  return sum;
}

// ----------------------------------------------------------------- reversion

std::vector<double> lagrange_inversion(const std::vector<double>& f) {
  const int N = static_cast<int>(f.size()) - 1;
  if (N < 1 || f[1] == 0.0) throw ParameterError("ps_revert: vanishing first coefficient");
  const double f1 = f[1];
  std::vector<double> q(N + 1, 0.0);
  q[1] = 1.0 / f1;
  // h_j = f_{j+1} / ((j+1) f_1), j >= 1
  std::vector<double> h(std::max(N - 1, 0), 0.0);
  for (int j = 1; j <= N - 1; ++j) h[j - 1] = f[j + 1] / ((j + 1) * f1);
  for (int n = 2; n <= N; ++n) {
    double s = 0.0;
    double rising = 1.0;  // (n+k-1)!/(n-1)!
    for (int k = 1; k <= n - 1; ++k) {
      rising *= (n + k - 1);
      const double sign = (k % 2) ? -1.0 : 1.0;
      s += sign * rising * bell_polynomial(n - 1, k, h);
    }
    q[n] = s / std::pow(f1, n);
  }
  return q;
}

std::vector<double> lagrange_inversion_recursive(const std::vector<double>& f) {
  const int N = static_cast<int>(f.size()) - 1;
  if (N < 1 || f[1] == 0.0) throw ParameterError("ps_revert: vanishing first coefficient");
  const double f1 = f[1];
  std::vector<double> fa(f.begin() + 1, f.end());
  std::vector<double> q(N + 1, 0.0);
  q[1] = 1.0 / f1;
  for (int n = 2; n <= N; ++n) {
    double s = 0.0;
    for (int k = 1; k <= n - 1; ++k) s += q[k] * bell_polynomial(n, k, fa);
    q[n] = -s / std::pow(f1, n);
  }
  return q;
}

namespace {

PowerSeries revert_via(const PowerSeries& f,
                       std::vector<double> (*route)(const std::vector<double>&)) {
  const int N = f.order();
  if (N < 1) throw ParameterError("ps_revert: order must be at least 1");
  std::vector<double> d(N + 1, 0.0);
  double fact = 1.0;
  for (int n = 1; n <= N; ++n) {
    fact *= n;
    d[n] = f[n] * fact;
  }
  const std::vector<double> q = route(d);
  std::vector<double> g(N + 1, 0.0);
  g[0] = f.center;
  fact = 1.0;
  for (int n = 1; n <= N; ++n) {
    fact *= n;
    g[n] = q[n] / fact;
  }
  return {f[0], std::move(g)};
}

}  // namespace

PowerSeries ps_revert(const PowerSeries& f) { return revert_via(f, &lagrange_inversion); }

PowerSeries ps_revert_lagrange_recursive(const PowerSeries& f) {
  return revert_via(f, &lagrange_inversion_recursive);
}

PowerSeries ps_revert_newton(const PowerSeries& f) {
  const int N = f.order();
  if (N < 1 || f[1] == 0.0) throw ParameterError("ps_revert: vanishing first coefficient");
  // fh(t) = f(center + t) - f0, solve fh(h(w)) = w for h with h(0) = 0.
  PowerSeries fh(0.0, f.coeffs);
  fh.coeffs[0] = 0.0;
  const PowerSeries dfh = ps_derivative(fh);
  PowerSeries h(0.0, std::vector<double>(N + 1, 0.0));
  h.coeffs[1] = 1.0 / f[1];
  const PowerSeries w = PowerSeries::identity(0.0, N);
  int iters = 2;
  for (int m = 1; m < N; m *= 2) ++iters;
  for (int it = 0; it < iters; ++it) {
    const PowerSeries resid = ps_sub(ps_compose(fh, h), w);
    PowerSeries dh = ps_compose(dfh, ps_truncate(h, N - 1));
    PowerSeries dfull(0.0, std::vector<double>(N + 1, 0.0));
    for (int i = 0; i <= N - 1; ++i) dfull.coeffs[i] = dh[i];
    // dfh has order N-1; the missing top coefficient cannot affect the
    // correction because resid starts at degree >= 1.
    dfull.coeffs[N] = 0.0;
    const PowerSeries corr = ps_mul(resid, ps_reciprocal(dfull));
    h = ps_sub(h, corr);
    h.coeffs[0] = 0.0;
  }
  std::vector<double> g = h.coeffs;
  g[0] = f.center;
  return {f[0], std::move(g)};
}

// --------------------------------------------------------------------- radius

double cauchy_hadamard_radius(const std::vector<double>& coeffs) {
  const int N = static_cast<int>(coeffs.size()) - 1;
  bool any = false;
  for (int n = 1; n <= N; ++n) any = any || coeffs[n] != 0.0;
  if (!any) throw ParameterError("cauchy_hadamard_radius: all coefficients vanish");
  const int lo = std::max(1, N - N / 3);
  double best = 0.0;
  for (int n = lo; n <= N; ++n)
    if (coeffs[n] != 0.0) best = std::max(best, std::pow(std::abs(coeffs[n]), 1.0 / n));
  if (best == 0.0) {
    for (int n = 1; n <= N; ++n)
      if (coeffs[n] != 0.0) best = std::max(best, std::pow(std::abs(coeffs[n]), 1.0 / n));
  }
  return 1.0 / best;
}

// ------------------------------------------------------------- log-polynomial

double LogPolySeries::P(int n, double xi) const {
  const auto& c = poly[n];
  double s = 0.0;
  for (int j = static_cast<int>(c.size()) - 1; j >= 0; --j) s = s * xi + c[j];
  return s;
}

std::vector<double> LogPolySeries::terms(double y) const {
  if (!(y > 1.0)) throw ParameterError("logpoly_eval: requires y > 1");
  const double xi = std::log(y);
  std::vector<double> t(poly.size());
  double ypow = 1.0;
  for (std::size_t n = 0; n < poly.size(); ++n) {
    t[n] = P(static_cast<int>(n), xi) / ypow;
    ypow *= y;
  }
  return t;
}

LogPolyValue logpoly_eval(const LogPolySeries& s, double y) {
  const std::vector<double> t = s.terms(y);
  if (t.size() < 2) {
    const double v = t.empty() ? 0.0 : t[0];
    return {y + v, static_cast<int>(t.size()), t.empty() ? 0.0 : std::abs(v)};
  }
  // P_0 is always kept; a vanishing P_0 must not end the sum.
  const std::vector<double> rest(t.begin() + 1, t.end());
  if (rest.size() < 2) return {y + t[0] + rest[0], 2, std::abs(rest[0])};
  const auto [used, sum] = optimal_truncation(rest);
  return {y + t[0] + sum, used + 1, std::abs(rest[used - 1])};
}

double logpoly_eval(const LogPolySeries& s, double y, int n) {
  if (n > s.n_max()) throw ParameterError("logpoly_eval: n exceeds series length");
  const std::vector<double> t = s.terms(y);
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) sum += t[k];
  return y + sum;
}

LogPolySeries salvy_asymptotic_inverse(double A, double B, const std::vector<double>& b,
                                       int n_max) {
  if (n_max < 0) throw ParameterError("salvy_asymptotic_inverse: n_max must be nonnegative");
  if (static_cast<int>(b.size()) < n_max + 1)
    throw ParameterError("salvy_asymptotic_inverse: n_max exceeds available b coefficients");
  if (!(b[0] > 0.0)) throw ParameterError("salvy_asymptotic_inverse: b_0 must be positive");

  // Constants c_k from u <- A ln(1 + t u) + B ln D(t / (1 + t u)).
  const int N = n_max;
  const PowerSeries D(0.0, std::vector<double>(b.begin(), b.begin() + N + 1));
  PowerSeries u = PowerSeries::constant(0.0, B * std::log(b[0]), N);
  for (int it = 0; it <= N + 1; ++it) {
    PowerSeries w = PowerSeries::constant(0.0, 1.0, N);
    for (int i = 1; i <= N; ++i) w.coeffs[i] = u[i - 1];
    const PowerSeries s = ps_mul(PowerSeries::identity(0.0, N), ps_reciprocal(w));
    const PowerSeries Ds = ps_compose(D, s);
    u = ps_add(ps_scale(ps_log(w), A), ps_scale(ps_log(Ds), B));
  }

  LogPolySeries out;
  out.poly.resize(N + 1);
  out.poly[0] = {u[0], A};
  for (int n = 1; n <= N; ++n) {
    const auto& prev = out.poly[n - 1];
    std::vector<double> p(n + 1, 0.0);
    for (std::size_t j = 1; j < prev.size(); ++j) p[j] += A * prev[j];
    for (std::size_t j = 0; j < prev.size(); ++j)
      p[j + 1] -= A * (n - 1) * prev[j] / static_cast<double>(j + 1);
    p[0] = u[n];
    out.poly[n] = std::move(p);
  }
  return out;
}

}  // namespace qfa
