#include "qfa/builder.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>

#include "qfa/errors.hpp"
#include "qfa/gig.hpp"
#include "qfa/hyperbolic.hpp"
#include "qfa/variance_gamma.hpp"

namespace qfa {

std::string method_name(Method m) {
  switch (m) {
    case Method::pade:
      return "pade";
    case Method::chebyshev:
      return "chebyshev";
    default:
      return "cheby-pade";
  }
}

Method method_from_name(const std::string& s) {
  if (s == "pade") return Method::pade;
  if (s == "chebyshev") return Method::chebyshev;
  if (s == "cheby-pade" || s == "cheby_pade") return Method::cheby_pade;
  throw ParameterError("unknown method '" + s + "'");
}

namespace {
const char* kRegionNames[] = {"left_tail", "left", "central", "right", "right_tail"};
}

std::string region_name(RegionKind k) { return kRegionNames[static_cast<int>(k)]; }

RegionKind region_from_name(const std::string& s) {
  for (int i = 0; i < 5; ++i)
    if (s == kRegionNames[i]) return static_cast<RegionKind>(i);
  throw ParameterError("unknown region '" + s + "'");
}

int Piece::degree() const {
  if (var == PieceVar::stable) return 0;
  if (var == PieceVar::tail && !tail_rational) return tail.series.n_max();
  return rat.m() + rat.n();
}

// ---- parameters ---------------------------------------------------------------

FamilyParams make_params(Family f, const ParamList& params) {
  std::map<std::string, double> m;
  for (const auto& [k, v] : params) m[k] = v;
  auto take = [&](const char* key, double def, bool required) {
    auto it = m.find(key);
    if (it == m.end()) {
      if (required) throw ParameterError(std::string("missing parameter '") + key + "'");
      return def;
    }
    const double v = it->second;
    m.erase(it);
    return v;
  };
  FamilyParams out;
  switch (f) {
    case Family::hyperbolic: {
      const double a = take("alpha", 0, true), b = take("beta", 0, false);
      const double d = take("delta", 1, false), mu = take("mu", 0, false);
      if (!(std::abs(b) < a)) throw ParameterError("constraint |beta|<alpha violated");
      out = HypParams::from_standard(a, b, d, mu);
      break;
    }
    case Family::vg: {
      VGParams p{take("lambda", 0, true), take("alpha", 0, true), take("beta", 0, false), take("mu", 0, false)};
      p.validate();
      out = p;
      break;
    }
    case Family::gig: {
      GIGParams p{take("lambda", 0, true), take("eta", 1, false), take("omega", 0, true)};
      p.validate();
      out = p;
      break;
    }
    case Family::stable: {
      StableParams p{take("alpha", 0, true), take("beta", 0, false), take("mu", 0, false), take("sigma", 1, false)};
      p.validate();
      out = p;
      break;
    }
  }
  if (!m.empty()) throw ParameterError("unknown parameter '" + m.begin()->first + "'");
  return out;
}

std::unique_ptr<Distribution> make_distribution(const FamilyParams& p) {
  return std::visit([](const auto& q) { return make_distribution(q); }, p);
}

double roundtrip_error(const Distribution& d, double u, double x) {
  if (!std::isfinite(x)) return std::numeric_limits<double>::infinity();
  if (d.family() == Family::gig && !(x > 0.0)) return u <= 0.5 ? u : 1.0;
  return u <= 0.5 ? std::abs(u - d.cdf(x)) : std::abs((1.0 - u) - d.sf(x));
}

// ---- family adapters ----------------------------------------------------------

namespace {

constexpr int kSeriesOrder = 40;
constexpr int kTailOrder = 20;

// Everything the builder needs, in standardized coordinates.
struct FamilyModel {
  Family family;
  std::unique_ptr<Distribution> dist;
  BaseDistribution base;
  double x_m = 0.0;
  double kink = std::numeric_limits<double>::quiet_NaN();  // u where Q is not analytic
  bool has_central = true;
  double loc = 0.0, scale = 1.0;
  std::function<PowerSeries(double, double, int)> taylor;
  std::function<PowerSeries(Side, double, double, int)> recycle;
  std::function<Piece(Side)> tail;  // interval left unset
};

Piece logpoly_tail(const TailExpansion& t) {
  Piece p;
  p.var = PieceVar::tail;
  p.tail = t;
  return p;
}

FamilyModel make_model(const FamilyParams& fp) {
  FamilyModel m;
  if (const auto* h = std::get_if<HypParams>(&fp)) {
    const HypParams s{h->alpha1, h->beta1, 1.0, 0.0};
    m.family = Family::hyperbolic;
    m.dist = make_distribution(s);
    m.base = hyp_base(s);
    m.x_m = m.base.x_m;
    m.loc = h->mu;
    m.scale = h->delta;
    m.taylor = [s](double u0, double x0, int N) { return hyp_taylor_coeffs(s, u0, x0, N); };
    m.recycle = [s, b = m.base](Side side, double u0, double x0, int N) {
      return hyp_recycle_coeffs(s, b, side, u0, x0, N);
    };
    m.tail = [s](Side side) {
      const HypTailSeries ts = hyp_tail_coeffs(s, side, kTailOrder);
      Piece p;
      p.var = PieceVar::tail;
      p.tail = ts.expansion();
      p.tail.series.poly.resize(1);
      p.tail_rational = true;
      p.rat = pade_from_taylor(PowerSeries(0.0, ts.q), 10, 10);
      return p;
    };
  } else if (const auto* v = std::get_if<VGParams>(&fp)) {
    const VGParams s{v->lambda, v->alpha, v->beta, 0.0};
    m.family = Family::vg;
    m.dist = make_distribution(s);
    m.base = vg_base(s);
    m.x_m = m.dist->mode();
    m.kink = m.base.p_m;
    m.has_central = m.x_m != 0.0;
    m.loc = v->mu;
    m.taylor = [s](double u0, double x0, int N) { return vg_taylor_coeffs(s, u0, x0, N); };
    m.recycle = [s, b = m.base](Side side, double u0, double x0, int N) {
      return vg_recycle_coeffs(s, b, side, u0, x0, N);
    };
    m.tail = [s](Side side) { return logpoly_tail(vg_tail_expansion(s, side, 12)); };
  } else if (const auto* g = std::get_if<GIGParams>(&fp)) {
    const GIGParams s{g->lambda, 1.0, g->omega};
    m.family = Family::gig;
    m.dist = make_distribution(s);
    m.base = gig_base(s);
    m.x_m = m.base.x_m;
    m.scale = g->eta;
    m.taylor = [s](double u0, double x0, int N) { return gig_taylor_coeffs(s, u0, x0, N); };
    m.recycle = [s, b = m.base](Side side, double u0, double x0, int N) {
      return gig_recycle_coeffs(s, b, side, u0, x0, N);
    };
    m.tail = [s](Side side) { return logpoly_tail(gig_tail_expansion(s, side, 12)); };
  } else {
    throw ParameterError("build: stable models use the stable dispatcher");
  }
  return m;
}

// ---- piece evaluation -----------------------------------------------------------

double tail_value(const Piece& p, double u) {
  const double y = p.tail.y_of_mass(p.tail.mass(u));
  if (!p.tail_rational) return p.tail.eval_mass(p.tail.mass(u));
  return p.tail.apply_map(y + p.rat(1.0 / y));
}

double variable_of(const BaseDistribution& b, PieceVar var, double u) {
  switch (var) {
    case PieceVar::z_left:
      return b.quantile_branch(Side::left, u);
    case PieceVar::z_right:
      return b.quantile_branch(Side::right, u);
    default:
      return u;
  }
}

double u_of_variable(const BaseDistribution& b, PieceVar var, double z) {
  switch (var) {
    case PieceVar::z_left:
      return b.cdf_branch(Side::left, z);
    case PieceVar::z_right:
      return 1.0 - b.cdf_branch(Side::right, z);
    default:
      return z;
  }
}

// Standardized value of a non-stable piece.
double piece_value_std(const BaseDistribution& b, const Piece& p, double u) {
  if (p.var == PieceVar::tail) return tail_value(p, u);
  return p.rat(variable_of(b, p.var, u));
}

// ---- piece construction -----------------------------------------------------------

struct Builder {
  const FamilyModel& m;
  double eps;
  const BuildOptions& opt;
  std::vector<Piece> out;
  bool target_met = true;

  double target() const { return opt.safety * eps; }

  // Check points: Chebyshev-Lobatto nodes in the piece variable, mapped to u
  // and evaluated exactly the way evaluate() will.
  std::vector<double> check_points(PieceVar var, double va, double vb) const {
    const int n = 16;
    std::vector<double> us;
    for (int i = 0; i <= n; ++i) {
      const double t = std::cos(std::numbers::pi * (n - i) / n);
      const double v = i == 0 ? va : (i == n ? vb : 0.5 * (va + vb) + 0.5 * (vb - va) * t);
      us.push_back(u_of_variable(m.base, var, v));
    }
    std::sort(us.begin(), us.end());
    return us;
  }

  double check(const Piece& p, const std::vector<double>& us) const {
    double worst = 0.0, prev = -std::numeric_limits<double>::infinity();
    for (double u : us) {
      if (!(u > 0.0 && u < 1.0)) continue;
      const double x = piece_value_std(m.base, p, u);
      if (!(x >= prev)) return std::numeric_limits<double>::infinity();  // not monotone
      prev = x;
      worst = std::max(worst, roundtrip_error(*m.dist, u, x));
    }
    return worst;
  }

  int order() const { return opt.method == Method::chebyshev ? std::max(kSeriesOrder, opt.max_cheb) : kSeriesOrder; }

  PowerSeries series_at(PieceVar var, double v0) const {
    if (var == PieceVar::u) return m.taylor(v0, m.dist->quantile(v0), order());
    const Side side = var == PieceVar::z_left ? Side::left : Side::right;
    // u0 is rounded to double; the series is centred at Q_B(u0) so that
    // A(z0) = Q(u0) holds to working precision.
    const double u0 = u_of_variable(m.base, var, v0);
    return m.recycle(side, u0, m.dist->quantile(u0), order());
  }

  // Candidates along the method's ladder, best first that meets the target.
  bool ladder(Piece& proto, const PowerSeries& S, double va, double vb, const std::vector<double>& us,
              Piece& best, double& best_err) const {
    const int kmin = proto.region == RegionKind::central ? 1 : 4;
    auto consider = [&](RationalApproximant r) {
      if (r.has_defect()) return false;
      Piece c = proto;
      c.rat = std::move(r);
      const double e = check(c, us);
      c.check_error = e;
      if (e < best_err) {
        best_err = e;
        best = c;
      }
      return e <= target();
    };
    try {
      if (opt.method == Method::pade) {
        for (int k = kmin; k <= opt.max_k; ++k) {
          // A degenerate diagonal entry means a lower denominator degree
          // already represents the series; walk down the antidiagonal.
          for (int j = k; j >= 0; --j) {
            try {
              if (consider(pade_from_taylor(S, 2 * k - j, j, va, vb))) return true;
              break;
            } catch (const ConvergenceError&) {
            }
          }
        }
      } else if (opt.method == Method::cheby_pade) {
        const ChebyshevSeries cs = chebyshev_from_taylor(S, va, vb, 3 * opt.max_k);
        for (int k = kmin; k <= opt.max_k; ++k) {
          for (int j = k; j >= 0; --j) {
            try {
              RationalApproximant r = chebyshev_pade(cs, 2 * k - j, j);
              r.lo = va;
              r.hi = vb;
              if (consider(std::move(r))) return true;
              break;
            } catch (const ConvergenceError&) {
            }
          }
        }
      } else {
        const ChebyshevSeries cs = chebyshev_from_taylor(S, va, vb, opt.max_cheb);
        for (int K = 2 * kmin; K <= opt.max_cheb; ++K) {
          RationalApproximant r;
          r.basis = Basis::chebyshev;
          r.numer.assign(cs.coeffs.begin(), cs.coeffs.begin() + K + 1);
          r.numer[0] *= 0.5;
          r.denom = {1.0};
          r.center = 0.5 * (va + vb);
          r.scale = 0.5 * (vb - va);
          r.lo = va;
          r.hi = vb;
          if (consider(std::move(r))) return true;
        }
      }
    } catch (const ParameterError&) {
      // interval beyond the radius of convergence: subdivide
    }
    return false;
  }

  void piece(RegionKind region, PieceVar var, double lo, double hi, int depth, double anchor) {
    if (!(hi > lo)) return;
    double va = variable_of(m.base, var, lo), vb = variable_of(m.base, var, hi);
    if (va > vb) std::swap(va, vb);
    const double v0 = std::isnan(anchor) ? 0.5 * (va + vb) : anchor;
    Piece proto;
    proto.region = region;
    proto.lo = lo;
    proto.hi = hi;
    proto.var = var;
    Piece best = proto;
    double best_err = std::numeric_limits<double>::infinity();
    const std::vector<double> us = check_points(var, va, vb);
    bool ok = false;
    std::string why;
    try {
      ok = ladder(proto, series_at(var, v0), va, vb, us, best, best_err);
    } catch (const ParameterError& e) {
      why = e.what();
    } catch (const ConvergenceError& e) {
      why = e.what();
    }
    if (ok || depth >= opt.max_depth) {
      if (!ok) target_met = false;
      if (!std::isfinite(best_err)) throw ConvergenceError("build: no usable approximant on a " + region_name(region) + " piece" + (why.empty() ? "" : ": " + why));
      out.push_back(best);
      return;
    }
    const double vm = 0.5 * (va + vb);
    double um = u_of_variable(m.base, var, vm);
    um = std::clamp(um, lo, hi);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    piece(region, var, lo, um, depth + 1, nan);
    piece(region, var, um, hi, depth + 1, nan);
  }
};

double tail_relative_error(const FamilyModel& m, const Piece& t, double u) {
  const double x = tail_value(t, u), q = m.dist->quantile(u);
  return std::abs(x - q) / std::abs(q);
}

// Largest tau in [tau_default, tau_cap] at which the tail meets eps (relative
// x error); the error grows with tau.
double search_tau(const FamilyModel& m, const Piece& t, Side side, double eps, const BuildOptions& opt) {
  auto err = [&](double tau) { return tail_relative_error(m, t, side == Side::left ? tau : 1.0 - tau); };
  if (err(opt.tau_cap) <= eps) return opt.tau_cap;
  if (!(err(opt.tau_default) <= eps)) return opt.tau_default;
  double a = std::log(opt.tau_default), b = std::log(opt.tau_cap);
  for (int i = 0; i < 30; ++i) {
    const double c = 0.5 * (a + b);
    (err(std::exp(c)) <= eps ? a : b) = c;
  }
  return std::exp(a);
}

struct Central {
  double u_m, r_tilde, u1, u2;
};

Central central_interval(const FamilyModel& m) {
  const double u_m = m.dist->cdf(m.x_m);
  if (!m.has_central) return {u_m, 0.0, u_m, u_m};
  const PowerSeries q = m.taylor(u_m, m.x_m, kSeriesOrder);
  const double rt = cauchy_hadamard_radius(q.coeffs);
  double r = std::min({rt, std::abs(u_m - 0.1), std::abs(u_m - 0.9)});
  if (!std::isnan(m.kink)) r = std::min(r, std::abs(u_m - m.kink));
  return {u_m, rt, u_m - r, u_m + r};
}

RegionPartition partition_impl(const FamilyModel& m, double eps, const BuildOptions& opt, Piece& lt, Piece& rt,
                               double& r_tilde) {
  const Central c = central_interval(m);
  r_tilde = c.r_tilde;
  lt = m.tail(Side::left);
  rt = m.tail(Side::right);
  RegionPartition p;
  p.u_m = c.u_m;
  p.u1 = c.u1;
  p.u2 = c.u2;
  p.tau_l = search_tau(m, lt, Side::left, eps, opt);
  p.tau_r = search_tau(m, rt, Side::right, eps, opt);
  return p;
}

}  // namespace

RegionPartition partition_domain(Family f, const ParamList& params, double eps, const BuildOptions& opt) {
  if (!(eps > 0.0)) throw ParameterError("constraint eps>0 violated");
  const FamilyModel m = make_model(make_params(f, params));
  Piece lt, rt;
  double r;
  return partition_impl(m, eps, opt, lt, rt, r);
}

QuantileApproximant build(Family f, const ParamList& params, double eps, const BuildOptions& opt) {
  if (!(eps > 0.0)) throw ParameterError("constraint eps>0 violated");
  QuantileApproximant a;
  a.family = f;
  a.params = params;
  a.fp = make_params(f, params);
  a.epsilon = eps;
  a.method = opt.method;
  if (f == Family::stable) {
    a.partition = RegionPartition{0.0, 0.0, 1.0, 0.0, 0.5};
    Piece p;
    p.var = PieceVar::stable;
    p.lo = 0.0;
    p.hi = 1.0;
    a.pieces.push_back(p);
    finalize(a);
    return a;
  }
  const FamilyModel m = make_model(a.fp);
  a.base = m.base;
  a.loc = m.loc;
  a.scale = m.scale;
  a.x_m = m.x_m;
  Piece lt, rt;
  a.partition = partition_impl(m, eps, opt, lt, rt, a.r_tilde);
  const RegionPartition& P = a.partition;

  Builder b{m, eps, opt, {}, true};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (P.u2 > P.u1) b.piece(RegionKind::central, PieceVar::u, P.u1, P.u2, 0, P.u_m);

  // Side anchors.
  const BaseDistribution& B = m.base;
  const double zl = 0.5 * (B.quantile(P.tau_l) + B.quantile(0.5 * P.u_m));
  const double zr = opt.anchor == AnchorRule::standard ? 0.5 * (B.quantile_upper(P.tau_r) + B.quantile(0.5 * P.u_m))
                                                    : 0.5 * (B.quantile_upper(P.tau_r) + B.quantile(0.5 * (1 + P.u_m)));
  const double pb = B.p_m;
  const double hl = std::min(P.u1, pb);
  b.piece(RegionKind::left, PieceVar::z_left, P.tau_l, hl, 0, zl);
  if (pb < P.u1) b.piece(RegionKind::left, PieceVar::z_right, pb, P.u1, 0, nan);
  if (pb > P.u2) b.piece(RegionKind::right, PieceVar::z_left, P.u2, pb, 0, nan);
  b.piece(RegionKind::right, PieceVar::z_right, std::max(P.u2, pb), 1.0 - P.tau_r, 0, zr);

  lt.region = RegionKind::left_tail;
  lt.lo = 0.0;
  lt.hi = P.tau_l;
  rt.region = RegionKind::right_tail;
  rt.lo = 1.0 - P.tau_r;
  rt.hi = 1.0;
  if (lt.tail_rational) lt.rat.hi = 1.0 / lt.tail.y_of_mass(P.tau_l);
  if (rt.tail_rational) rt.rat.hi = 1.0 / rt.tail.y_of_mass(P.tau_r);
  lt.check_error = tail_relative_error(m, lt, P.tau_l);
  rt.check_error = tail_relative_error(m, rt, 1.0 - P.tau_r);
  b.out.push_back(lt);
  b.out.push_back(rt);

  a.pieces = std::move(b.out);
  std::sort(a.pieces.begin(), a.pieces.end(), [](const Piece& x, const Piece& y) { return x.lo < y.lo; });
  a.target_met = b.target_met;
  for (const Piece& p : a.pieces) a.check_error = std::max(a.check_error, p.check_error);
  return a;
}

void finalize(QuantileApproximant& a) {
  if (a.family == Family::stable) a.stable = std::make_shared<StableQuantileFunction>(std::get<StableParams>(a.fp));
}

double evaluate(const QuantileApproximant& a, double u) {
  if (!(u > 0.0 && u < 1.0)) throw ParameterError("evaluate: u must lie in (0,1)");
  auto it = std::upper_bound(a.pieces.begin(), a.pieces.end(), u,
                             [](double v, const Piece& p) { return v < p.lo; });
  if (it != a.pieces.begin()) --it;
  const Piece& p = *it;
  if (p.var == PieceVar::stable) {
    if (!a.stable) throw ParameterError("evaluate: stable model not finalized");
    return (*a.stable)(u);
  }
  return a.loc + a.scale * piece_value_std(a.base, p, u);
}

double evaluate_piece(const QuantileApproximant& a, std::size_t i, double u) {
  const Piece& p = a.pieces.at(i);
  if (p.var == PieceVar::stable) return evaluate(a, u);
  return a.loc + a.scale * piece_value_std(a.base, p, u);
}

double QuantileApproximant::operator()(double u) const { return evaluate(*this, u); }

double QuantileApproximant::central_degree() const {
  int d = 0;
  for (const Piece& p : pieces)
    if (p.region == RegionKind::central) d = std::max(d, p.degree());
  return d;
}

// ---- verification ---------------------------------------------------------------

std::vector<double> verification_grid(const RegionPartition& p, int n) {
  n = std::max(n, 8);
  const double lo = std::min(p.tau_l > 0 ? p.tau_l : 1e-10, 1e-10);
  const double hi = std::min(p.tau_r > 0 ? p.tau_r : 1e-10, 1e-10);
  const int ng = n / 4, nu = n - 2 * ng;
  std::vector<double> g;
  g.reserve(n + 2);
  for (int i = 0; i < ng; ++i) {
    const double t = static_cast<double>(i) / ng;
    g.push_back(lo * std::pow(0.1 / lo, t));
    g.push_back(1.0 - hi * std::pow(0.1 / hi, t));
  }
  for (int i = 0; i < nu; ++i) g.push_back(0.1 + 0.8 * i / (nu - 1));
  if (p.tau_l > 0) g.push_back(p.tau_l);
  if (p.tau_r > 0) g.push_back(1.0 - p.tau_r);
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

VerifyReport verify(const QuantileApproximant& a, int grid_size) {
  const auto d = make_distribution(a.fp);
  VerifyReport r;
  std::map<RegionKind, double> reg;
  for (double u : verification_grid(a.partition, grid_size)) {
    const double q = evaluate(a, u);
    const double e = roundtrip_error(*d, u, q);
    r.rows.push_back({u, q, e});
    r.max_error = std::max(r.max_error, e);
    auto it = std::upper_bound(a.pieces.begin(), a.pieces.end(), u,
                               [](double v, const Piece& p) { return v < p.lo; });
    if (it != a.pieces.begin()) --it;
    double& m = reg[it->region];
    m = std::max(m, e);
  }
  for (const auto& [k, v] : reg) r.region_max.emplace_back(k, v);
  for (int i = 1; i <= 64; ++i) {
    const double u = 0.5 - 0.5 * std::cos(std::numbers::pi * (i - 0.5) / 64);
    r.max_x_error = std::max(r.max_x_error, std::abs(evaluate(a, u) - d->quantile(u)));
  }
  r.passed = r.max_error <= a.epsilon;
  return r;
}

}  // namespace qfa
