#include "qfa/serialize.hpp"

#include "json.hpp"
#include "qfa/errors.hpp"

namespace qfa {

using json = nlohmann::ordered_json;

namespace {

const char* var_name(PieceVar v) {
  switch (v) {
    case PieceVar::u:
      return "u";
    case PieceVar::z_left:
      return "z_left";
    case PieceVar::z_right:
      return "z_right";
    case PieceVar::tail:
      return "y";
    default:
      return "stable";
  }
}

PieceVar var_from(const std::string& s) {
  for (PieceVar v : {PieceVar::u, PieceVar::z_left, PieceVar::z_right, PieceVar::tail, PieceVar::stable})
    if (s == var_name(v)) return v;
  throw ParameterError("model: unknown variable '" + s + "'");
}

const char* map_name(TailExpansion::Map m) {
  switch (m) {
    case TailExpansion::Map::negate:
      return "negate";
    case TailExpansion::Map::reciprocal:
      return "reciprocal";
    default:
      return "identity";
  }
}

TailExpansion::Map map_from(const std::string& s) {
  if (s == "negate") return TailExpansion::Map::negate;
  if (s == "reciprocal") return TailExpansion::Map::reciprocal;
  if (s == "identity") return TailExpansion::Map::identity;
  throw ParameterError("model: unknown tail map '" + s + "'");
}

void put_rational(json& j, const RationalApproximant& r) {
  j["basis"] = r.basis == Basis::chebyshev ? "chebyshev" : "monomial";
  j["center"] = r.center;
  j["scale"] = r.scale;
  j["validity"] = {r.lo, r.hi};
  j["numer"] = r.numer;
  j["denom"] = r.denom;
}

RationalApproximant get_rational(const json& j) {
  RationalApproximant r;
  const std::string b = j.at("basis");
  if (b != "chebyshev" && b != "monomial") throw ParameterError("model: unknown basis '" + b + "'");
  r.basis = b == "chebyshev" ? Basis::chebyshev : Basis::monomial;
  r.center = j.at("center");
  r.scale = j.at("scale");
  r.lo = j.at("validity").at(0);
  r.hi = j.at("validity").at(1);
  r.numer = j.at("numer").get<std::vector<double>>();
  r.denom = j.at("denom").get<std::vector<double>>();
  if (r.numer.empty() || r.denom.empty()) throw ParameterError("model: empty rational");
  return r;
}

}  // namespace

std::string to_json(const QuantileApproximant& a, int indent) {
  json j;
  j["family"] = family_name(a.family);
  json params = json::object();
  for (const auto& [k, v] : a.params) params[k] = v;
  j["params"] = params;
  j["method"] = method_name(a.method);
  const RegionPartition& p = a.partition;
  j["partition"] = {{"tau_l", p.tau_l}, {"u1", p.u1}, {"u2", p.u2}, {"tau_r", p.tau_r}, {"u_m", p.u_m}};
  if (a.family != Family::stable) {
    const BaseDistribution& b = a.base;
    j["base"] = {{"left_kind", b.left_kind == BaseDistribution::LeftKind::inverse ? "inverse" : "exponential"},
                 {"x_m", b.x_m},
                 {"p_m", b.p_m},
                 {"left_rate", b.left_rate},
                 {"right_rate", b.right_rate}};
    j["transform"] = {{"loc", a.loc}, {"scale", a.scale}};
  }
  json regions = json::array();
  for (const Piece& pc : a.pieces) {
    json r;
    r["kind"] = region_name(pc.region);
    r["interval"] = {pc.lo, pc.hi};
    r["var"] = var_name(pc.var);
    if (pc.var == PieceVar::tail) {
      r["side"] = pc.tail.side == Side::left ? "left" : "right";
      r["log_c"] = pc.tail.log_c;
      r["rate"] = pc.tail.rate;
      r["map"] = map_name(pc.tail.map);
      if (pc.tail_rational) {
        put_rational(r, pc.rat);
      } else {
        r["basis"] = "logpoly";
        r["logpoly"] = pc.tail.series.poly;
      }
    } else if (pc.var != PieceVar::stable) {
      put_rational(r, pc.rat);
    }
    r["check_error"] = pc.check_error;
    regions.push_back(r);
  }
  j["regions"] = regions;
  j["meta"] = {{"epsilon", a.epsilon},
               {"build_info",
                {{"format", 1},
                 {"x_m", a.x_m},
                 {"r_tilde", a.r_tilde},
                 {"central_degree", a.central_degree()},
                 {"check_error", a.check_error},
                 {"target_met", a.target_met}}}};
  return j.dump(indent) + "\n";
}

QuantileApproximant from_json(const std::string& text) {
  QuantileApproximant a;
  try {
    const json j = json::parse(text);
    a.family = family_from_name(j.at("family"));
    for (const auto& [k, v] : j.at("params").items()) a.params.emplace_back(k, v.get<double>());
    a.fp = make_params(a.family, a.params);
    a.method = method_from_name(j.at("method"));
    const json& p = j.at("partition");
    a.partition = {p.at("tau_l"), p.at("u1"), p.at("u2"), p.at("tau_r"), p.at("u_m")};
    if (a.family != Family::stable) {
      const json& b = j.at("base");
      a.base.left_kind = b.at("left_kind") == "inverse" ? BaseDistribution::LeftKind::inverse
                                                         : BaseDistribution::LeftKind::exponential;
      a.base.x_m = b.at("x_m");
      a.base.p_m = b.at("p_m");
      a.base.left_rate = b.at("left_rate");
      a.base.right_rate = b.at("right_rate");
      a.loc = j.at("transform").at("loc");
      a.scale = j.at("transform").at("scale");
    }
    for (const json& r : j.at("regions")) {
      Piece pc;
      pc.region = region_from_name(r.at("kind"));
      pc.lo = r.at("interval").at(0);
      pc.hi = r.at("interval").at(1);
      pc.var = var_from(r.at("var"));
      pc.check_error = r.value("check_error", 0.0);
      if (pc.var == PieceVar::tail) {
        pc.tail.side = r.at("side") == "left" ? Side::left : Side::right;
        pc.tail.log_c = r.at("log_c");
        pc.tail.rate = r.at("rate");
        pc.tail.map = map_from(r.at("map"));
        if (r.at("basis") == "logpoly") {
          pc.tail.series.poly = r.at("logpoly").get<std::vector<std::vector<double>>>();
        } else {
          pc.tail_rational = true;
          pc.rat = get_rational(r);
        }
      } else if (pc.var != PieceVar::stable) {
        pc.rat = get_rational(r);
      }
      a.pieces.push_back(std::move(pc));
    }
    if (a.pieces.empty()) throw ParameterError("model: no regions");
    for (std::size_t i = 1; i < a.pieces.size(); ++i)
      if (!(a.pieces[i].lo >= a.pieces[i - 1].lo)) throw ParameterError("model: regions out of order");
    const json& m = j.at("meta");
    a.epsilon = m.at("epsilon");
    const json& bi = m.at("build_info");
    a.x_m = bi.value("x_m", 0.0);
    a.r_tilde = bi.value("r_tilde", 0.0);
    a.check_error = bi.value("check_error", 0.0);
    a.target_met = bi.value("target_met", true);
  } catch (const json::exception& e) {
    throw ParameterError(std::string("model: ") + e.what());
  }
  finalize(a);
  return a;
}

}  // namespace qfa
