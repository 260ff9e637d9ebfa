#include "qfa/acceleration.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "qfa/errors.hpp"

namespace qfa {

// ------------------------------------------------------------------ evaluation

double clenshaw(const std::vector<double>& c, double t) {
  double b1 = 0.0, b2 = 0.0;
  for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k) {
    const double b0 = 2.0 * t * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  const double c0 = c.empty() ? 0.0 : c[0];
  return t * b1 - b2 + c0;
}

namespace {

double horner(const std::vector<double>& c, double t) {
  double s = 0.0;
  for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) s = s * t + c[k];
  return s;
}

double eval_basis(Basis basis, const std::vector<double>& c, double t) {
  return basis == Basis::monomial ? horner(c, t) : clenshaw(c, t);
}

}  // namespace

double RationalApproximant::operator()(double x) const {
  const double t = (x - center) / scale;
  return eval_basis(basis, numer, t) / eval_basis(basis, denom, t);
}

bool RationalApproximant::has_defect(int samples) const {
  if (!(hi > lo) || denom.size() <= 1) return false;
  const double q0 = eval_basis(basis, denom, (lo - center) / scale);
  if (q0 == 0.0 || !std::isfinite(q0)) return true;
  for (int i = 1; i <= samples; ++i) {
    const double x = lo + (hi - lo) * i / samples;
    const double q = eval_basis(basis, denom, (x - center) / scale);
    if (!std::isfinite(q) || q == 0.0 || (q > 0.0) != (q0 > 0.0)) return true;
  }
  return false;
}

double ChebyshevSeries::operator()(double x) const {
  const double t = (2.0 * x - a - b) / (b - a);
  std::vector<double> c = coeffs;
  if (!c.empty()) c[0] *= 0.5;
  return clenshaw(c, t);
}

ChebyshevSeries ChebyshevSeries::truncated(int K) const {
  ChebyshevSeries r = *this;
  if (K + 1 < static_cast<int>(coeffs.size())) r.coeffs.resize(K + 1);
  return r;
}

// -------------------------------------------------------------- acceleration

namespace {

struct LevinEntry {
  double value;
  double error;
};

// Levin u-transforms L_k^{(0)}, k = 1..K. Entries whose denominator sum loses
// more than 8 digits to cancellation are dropped.
std::vector<LevinEntry> levin_table(const std::vector<double>& s, int start) {
  const int K = static_cast<int>(s.size()) - 1 - start;
  std::vector<double> inv_w(K + 1), a(K + 1);
  for (int j = 0; j <= K; ++j) {
    const int idx = start + j;
    a[j] = idx == 0 ? s[0] : s[idx] - s[idx - 1];
    inv_w[j] = 1.0 / ((1.0 + idx) * a[j]);
  }
  std::vector<LevinEntry> out;
  double prev = s[start];
  for (int k = 1; k <= K; ++k) {
    double num = 0.0, den = 0.0, den_abs = 0.0;
    double binom = 1.0;
    const double bk = 1.0 + start + k;
    for (int j = 0; j <= k; ++j) {
      if (j > 0) binom *= static_cast<double>(k - j + 1) / j;
      const double w = ((j % 2) ? -1.0 : 1.0) * binom *
                       std::pow((1.0 + start + j) / bk, k - 1) * inv_w[j];
      num += w * s[start + j];
      den += w;
      den_abs += std::abs(w);
    }
    if (!(std::abs(den) > 1e-8 * den_abs) || !std::isfinite(num / den)) continue;
    const double v = num / den;
    out.push_back({v, std::abs(v - prev)});
    prev = v;
  }
  return out;
}

int levin_start(const std::vector<double>& s) {
  int start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double a = i == 0 ? s[0] : s[i] - s[i - 1];
    if (a == 0.0) start = static_cast<int>(i) + 1;
  }
  return start;
}

// Exact zero terms repeat a partial sum and carry no information.
std::vector<double> distinct_sums(const std::vector<double>& s) {
  std::vector<double> c;
  for (double v : s)
    if (c.empty() || v != c.back()) c.push_back(v);
  return c;
}

bool constant_tail(const std::vector<double>& s) {
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i] != s[i - 1]) return false;
  return true;
}

}  // namespace

Acceleration levin_u_guarded(const std::vector<double>& s0) {
  if (s0.size() < 2) throw ParameterError("levin_u: need at least 2 partial sums");
  const std::vector<double> s = distinct_sums(s0);
  const double raw = s.back();
  const double raw_err = std::abs(s0.back() - s0[s0.size() - 2]);
  if (s.size() < 2) return {raw, 0.0, false};
  const int start = levin_start(s);
  if (static_cast<int>(s.size()) - start < 3) return {raw, raw_err, false};
  const auto table = levin_table(s, start);
  if (table.size() < 2) return {raw, raw_err, false};
  // Entry k's error is estimated by its distance from entry k-1.
  std::size_t best = 1;
  for (std::size_t i = 2; i < table.size(); ++i)
    if (table[i].error <= table[best].error) best = i;
  if (table[best].error >= raw_err) return {raw, raw_err, false};
  return {table[best].value, table[best].error, true};
}

double levin_u(const std::vector<double>& s0) {
  if (s0.size() < 4) throw ParameterError("levin_u: need at least 4 partial sums");
  const std::vector<double> s = distinct_sums(s0);
  if (constant_tail(s)) return s.back();
  const int start = levin_start(s);
  if (static_cast<int>(s.size()) - start < 3) return s.back();
  const auto table = levin_table(s, start);
  if (table.empty()) throw ConvergenceError("levin_u: numerically unstable table");
  if (table.size() == 1) return table[0].value;
  std::size_t best = 1;
  for (std::size_t i = 2; i < table.size(); ++i)
    if (table[i].error <= table[best].error) best = i;
  return table[best].value;
}

double wynn_epsilon(const std::vector<double>& s0) {
  if (s0.size() < 4) throw ParameterError("wynn_epsilon: need at least 4 partial sums");
  const std::vector<double> s = distinct_sums(s0);
  const int N = static_cast<int>(s.size());
  if (N < 3) return s.back();
  std::vector<double> prev(N + 1, 0.0);  // column k-1
  std::vector<double> cur(s.begin(), s.end());  // column k
  double best = s.back();
  for (int k = 0; static_cast<int>(cur.size()) >= 2; ++k) {
    std::vector<double> next(cur.size() - 1);
    for (std::size_t n = 0; n + 1 < cur.size(); ++n) {
      const double d = cur[n + 1] - cur[n];
      if (d == 0.0) {
        // Converged column: its entries are the limit.
        return (k % 2 == 0) ? cur[n + 1] : best;
      }
      next[n] = prev[n + 1] + 1.0 / d;
    }
    if ((k + 1) % 2 == 0) {
      if (!std::isfinite(next.back())) break;
      best = next.back();
    }
    prev = std::move(cur);
    cur = std::move(next);
  }
  return best;
}

std::pair<int, double> optimal_truncation(const std::vector<double>& t) {
  if (t.size() < 2) throw ParameterError("optimal_truncation: need at least 2 terms");
  double mn = std::numeric_limits<double>::infinity();
  for (double x : t) mn = std::min(mn, std::abs(x));
  std::size_t kmin = 0;
  while (std::abs(t[kmin]) > mn * (1.0 + 1e-12)) ++kmin;
  double sum = 0.0;
  for (std::size_t k = 0; k <= kmin; ++k) sum += t[k];
  return {static_cast<int>(kmin) + 1, sum};
}

// ----------------------------------------------------------------------- Pade

namespace {

RationalApproximant pade_once(const std::vector<double>& c, int m, int n, double center,
                              double scale) {
  RationalApproximant r;
  r.basis = Basis::monomial;
  r.center = center;
  r.scale = scale;
  auto coef = [&](int k) { return k < 0 ? 0.0 : c[k]; };
  r.denom.assign(n + 1, 0.0);
  r.denom[0] = 1.0;
  if (n > 0) {
    Eigen::MatrixXd M(n, n);
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i) {
      const int k = m + 1 + i;
      for (int j = 0; j < n; ++j) M(i, j) = coef(k - (j + 1));
      rhs(i) = -coef(k);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    lu.setThreshold(1e-13);
    if (!lu.isInvertible()) throw SingularSystemError("pade_from_taylor: singular Hankel system");
    const Eigen::VectorXd b = lu.solve(rhs);
    if (!b.allFinite()) throw SingularSystemError("pade_from_taylor: singular Hankel system");
    for (int j = 0; j < n; ++j) r.denom[j + 1] = b(j);
  }
  r.numer.assign(m + 1, 0.0);
  for (int k = 0; k <= m; ++k) {
    double s = 0.0;
    for (int j = 0; j <= std::min(k, n); ++j) s += r.denom[j] * c[k - j];
    r.numer[k] = s;
  }
  return r;
}

}  // namespace

RationalApproximant pade_from_taylor(const PowerSeries& ts, int m, int n, double lo, double hi,
                                     double scale) {
  if (m < 0 || n < 0) throw ParameterError("pade_from_taylor: negative degree");
  if (ts.order() < m + n) throw ParameterError("pade_from_taylor: series order below m+n");
  if (!(scale > 0.0)) {
    double g = 0.0;
    for (int k = 1; k <= m + n; ++k)
      if (ts[k] != 0.0) g = std::max(g, std::pow(std::abs(ts[k]), 1.0 / k));
    scale = g > 0.0 ? 1.0 / g : 1.0;
  }
  std::vector<double> c(m + n + 1);
  double sp = 1.0;
  for (int k = 0; k <= m + n; ++k) {
    c[k] = ts[k] * sp;
    sp *= scale;
  }
  for (;;) {
    RationalApproximant r = pade_once(c, m, n, ts.center, scale);
    r.lo = lo;
    r.hi = hi;
    if (n == 0 || !r.has_defect()) return r;
    ++m;
    --n;
  }
}

// ------------------------------------------------------------------ Chebyshev

ChebyshevSeries chebyshev_from_taylor(const PowerSeries& ts, double a, double b, int K,
                                      double radius) {
  if (!(b > a)) throw ParameterError("chebyshev_from_taylor: empty interval");
  const int N = ts.order();
  if (K < 0 || K > N) throw ParameterError("chebyshev_from_taylor: K must lie in [0, order]");
  const double c = 0.5 * (a + b), h = 0.5 * (b - a), d = c - ts.center;
  if (!(radius > 0.0)) radius = cauchy_hadamard_radius(ts.coeffs);
  if (std::abs(d) + h > radius * (1.0 + 1e-9))
    throw ParameterError("chebyshev_from_taylor: interval exceeds radius of convergence");

  // Coefficients in t where x = c + h t.
  std::vector<double> g(N + 1, 0.0);
  // long double: h^j overflows double for wide intervals at high order
  if (d == 0.0) {
    long double hp = 1.0L;
    for (int j = 0; j <= N; ++j, hp *= h) g[j] = static_cast<double>(ts[j] * hp);
  } else {
    long double hp = 1.0L;
    for (int j = 0; j <= N; ++j, hp *= h) {
      long double s = 0.0L, binom = 1.0L, dp = 1.0L;
      for (int n = j; n <= N; ++n) {
        s += static_cast<long double>(ts[n]) * binom * dp;
        binom = binom * (n + 1) / (n + 1 - j);
        dp *= d;
      }
      g[j] = static_cast<double>(s * hp);
    }
  }

  // Inner sums converge like rho^j; accelerate only when truncation shows.
  const double rho = (std::abs(d) + h) / radius;
  const bool slow = N * std::log(rho) > std::log(1e-15);

  ChebyshevSeries out;
  out.a = a;
  out.b = b;
  out.coeffs.assign(N + 1, 0.0);
  double err = 0.0;
  for (int k = 0; k <= N; ++k) {
    std::vector<double> partial;
    double s = 0.0;
    for (int j = k; j <= N; j += 2) {
      const double theta =
          std::exp((1.0 - j) * std::log(2.0) + std::lgamma(j + 1.0) -
                   std::lgamma((j - k) / 2 + 1.0) - std::lgamma((j + k) / 2 + 1.0));
      s += g[j] * theta;
      partial.push_back(s);
    }
    double value = s, e = partial.size() >= 2 ? std::abs(s - partial[partial.size() - 2]) : 0.0;
    if (slow && partial.size() >= 4) {
      const Acceleration acc = levin_u_guarded(partial);
      value = acc.value;
      e = acc.error;
    }
    out.coeffs[k] = value;
    err = std::max(err, e);
  }
  double dropped = 0.0;
  for (int k = K + 1; k <= N; ++k) dropped += std::abs(out.coeffs[k]);
  out.coeffs.resize(K + 1);
  out.error_estimate = err + dropped;
  return out;
}

namespace {

RationalApproximant cheb_pade_once(const std::vector<double>& cp, int m, int n, double a,
                                   double b) {
  // cp[k]: plain Chebyshev coefficients (cp[0] already halved).
  auto e = [&](int i, int j) {
    if (i == 0) return 0.5 * ((j == 0 ? cp[0] : 0.0) + cp[j]);
    double s = cp[i + j];
    if (i >= j) s += cp[i - j];
    if (j >= i) s += cp[j - i];
    return 0.5 * s;
  };
  RationalApproximant r;
  r.basis = Basis::chebyshev;
  r.center = 0.5 * (a + b);
  r.scale = 0.5 * (b - a);
  r.lo = a;
  r.hi = b;
  r.denom.assign(n + 1, 0.0);
  r.denom[0] = 1.0;
  if (n > 0) {
    Eigen::MatrixXd M(n, n);
    Eigen::VectorXd rhs(n);
    for (int r_i = 0; r_i < n; ++r_i) {
      const int i = m + 1 + r_i;
      for (int j = 1; j <= n; ++j) M(r_i, j - 1) = e(i, j);
      rhs(r_i) = -e(i, 0);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    lu.setThreshold(1e-13);
    if (!lu.isInvertible()) throw SingularSystemError("chebyshev_pade: singular system");
    const Eigen::VectorXd sol = lu.solve(rhs);
    if (!sol.allFinite()) throw SingularSystemError("chebyshev_pade: singular system");
    for (int j = 1; j <= n; ++j) r.denom[j] = sol(j - 1);
  }
  r.numer.assign(m + 1, 0.0);
  for (int i = 0; i <= m; ++i) {
    double s = 0.0;
    for (int j = 0; j <= n; ++j) s += r.denom[j] * e(i, j);
    r.numer[i] = s;
  }
  return r;
}

}  // namespace

RationalApproximant chebyshev_pade(const ChebyshevSeries& cheb, int m, int n) {
  if (m < 0 || n < 0) throw ParameterError("chebyshev_pade: negative degree");
  const int K = static_cast<int>(cheb.coeffs.size()) - 1;
  if (K < m + 2 * n)
    throw ParameterError("chebyshev_pade: need Chebyshev coefficients through m+2n");
  std::vector<double> cp = cheb.coeffs;
  cp[0] *= 0.5;
  for (;;) {
    RationalApproximant r = cheb_pade_once(cp, m, n, cheb.a, cheb.b);
    if (n == 0 || !r.has_defect()) return r;
    ++m;
    --n;
  }
}

}  // namespace qfa
