#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "qfa/builder.hpp"
#include "qfa/errors.hpp"
#include "qfa/sampler.hpp"
#include "qfa/serialize.hpp"

using namespace qfa;

namespace {

constexpr int kOk = 0, kVerifyFail = 1, kUsage = 2;

// "alpha=1,beta=0.5" in the order given
ParamList parse_params(const std::string& s) {
  ParamList out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ParameterError("bad parameter '" + item + "', expected key=value");
    const std::string key = item.substr(0, eq), val = item.substr(eq + 1);
    char* end = nullptr;
    const double v = std::strtod(val.c_str(), &end);
    if (val.empty() || *end != '\0') throw ParameterError("bad value for '" + key + "': '" + val + "'");
    out.emplace_back(key, v);
  }
  return out;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParameterError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

QuantileApproximant load_model(const std::string& path) { return from_json(read_file(path)); }

// stdout when path is empty or "-"
struct Output {
  std::ofstream file;
  std::ostream* os = &std::cout;
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file.open(path, std::ios::binary);
      if (!file) throw ParameterError("cannot write " + path);
      os = &file;
    }
  }
  std::ostream& operator*() { return *os; }
};

void check_u(double u) {
  if (!(u > 0.0 && u < 1.0)) throw ParameterError("u must lie in (0,1), got " + fmt(u));
}

// u values from the first column of a CSV with a header line
std::vector<double> read_u_column(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string line;
  std::vector<double> u;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    u.push_back(std::strtod(line.substr(0, line.find(',')).c_str(), nullptr));
    check_u(u.back());
  }
  return u;
}

int cmd_build(const std::string& dist, const std::string& params, double eps, const std::string& method,
              const std::string& anchor, const std::string& out, int grid) {
  const Family f = family_from_name(dist);
  BuildOptions opt;
  opt.method = method_from_name(method);
  if (anchor == "symmetric") opt.anchor = AnchorRule::symmetric;
  else if (anchor != "standard") throw ParameterError("unknown anchor rule '" + anchor + "'");
  const ParamList p = parse_params(params);

  const auto t0 = std::chrono::steady_clock::now();
  const QuantileApproximant a = build(f, p, eps, opt);
  const double setup = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (!out.empty()) {
    std::ofstream o(out, std::ios::binary);
    if (!o) throw ParameterError("cannot write " + out);
    o << to_json(a) << '\n';
  }
  const VerifyReport r = verify(a, grid);
  std::printf("setup %.3f s, method %s\n", setup, method_name(a.method).c_str());
  if (f != Family::stable) {
    std::printf("partition tau_L %.3g, u1 %.9g, u2 %.9g, tau_R %.3g\n", a.partition.tau_l, a.partition.u1,
                a.partition.u2, a.partition.tau_r);
  }
  std::map<RegionKind, std::pair<int, int>> deg;  // max degree, piece count
  for (const Piece& pc : a.pieces) {
    auto& d = deg[pc.region];
    d.first = std::max(d.first, pc.degree());
    ++d.second;
  }
  for (const auto& [k, d] : deg) std::printf("  %-10s degree %d, %d piece(s)\n", region_name(k).c_str(), d.first, d.second);
  for (const auto& [k, e] : r.region_max) std::printf("  %-10s max error %.3g\n", region_name(k).c_str(), e);
  std::printf("max error %.3g (eps %.3g) %s\n", r.max_error, eps, r.passed ? "ok" : "FAILED");
  return r.passed ? kOk : kVerifyFail;
}

int cmd_eval(const std::string& model, const std::vector<double>& us, int grid, const std::string& out) {
  const QuantileApproximant a = load_model(model);
  std::vector<double> u = us;
  for (int k = 0; k < grid; ++k) u.push_back(0.5 * (1.0 - std::cos(std::numbers::pi * (k + 0.5) / grid)));
  if (u.empty()) throw ParameterError("give --u or --grid");
  for (double v : u) check_u(v);
  Output o(out);
  *o << "u,q\n";
  for (double v : u) *o << fmt(v) << ',' << fmt(evaluate(a, v)) << '\n';
  return kOk;
}

int cmd_verify(const std::string& model, int grid, const std::string& in, const std::string& out) {
  const QuantileApproximant a = load_model(model);
  VerifyReport r;
  if (!in.empty()) {
    const auto d = make_distribution(a.fp);
    for (double u : read_u_column(in)) {
      const double q = evaluate(a, u);
      const double e = roundtrip_error(*d, u, q);
      r.rows.push_back({u, q, e});
      r.max_error = std::max(r.max_error, e);
    }
    r.passed = r.max_error <= a.epsilon;
  } else {
    r = verify(a, grid);
  }
  Output o(out);
  *o << "u,q,abs_err\n";
  for (const VerifyRow& row : r.rows) *o << fmt(row.u) << ',' << fmt(row.q) << ',' << fmt(row.abs_err) << '\n';
  std::fprintf(stderr, "max error %.3g (eps %.3g) %s\n", r.max_error, a.epsilon, r.passed ? "ok" : "FAILED");
  return r.passed ? kOk : kVerifyFail;
}

int cmd_sample(const std::string& model, long long n, std::uint64_t seed, const std::string& out) {
  if (n < 0) throw ParameterError("-n must be nonnegative");
  const QuantileApproximant a = load_model(model);
  Output o(out);
  *o << "x\n";
  // chunks keep memory flat for large n; the stream is the same as one call
  Xoshiro256 g(seed);
  std::vector<double> u, x;
  const long long chunk = 1 << 16;
  for (long long done = 0; done < n; done += chunk) {
    const std::size_t m = static_cast<std::size_t>(std::min(chunk, n - done));
    u.resize(m);
    x.resize(m);
    for (double& v : u) v = g.uniform();
    evaluate_batch(a, u.data(), x.data(), m);
    for (double v : x) *o << fmt(v) << '\n';
  }
  return kOk;
}

int cmd_oracle(const std::string& dist, const std::string& params, double u) {
  check_u(u);
  const Family f = family_from_name(dist);
  const auto d = make_distribution(make_params(f, parse_params(params)));
  std::printf("%s\n", fmt(d->quantile(u)).c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantile function approximation"};
  app.require_subcommand(1);

  std::string dist, params, method = "cheby-pade", anchor = "standard", out, model, in;
  double eps = 0.0, u1 = 0.0;
  std::vector<double> us;
  int grid = 0, grid_size = 10000;
  long long n = 0;
  std::uint64_t seed = 0;

  auto* b = app.add_subcommand("build", "build a model and verify it");
  b->add_option("--dist", dist, "hyp|vg|gig|stable")->required();
  b->add_option("--params", params, "k=v,...")->required();
  b->add_option("--eps", eps, "target |u - F(Q_A(u))|")->required();
  b->add_option("--method", method, "pade|chebyshev|cheby-pade");
  b->add_option("--anchor", anchor, "recycling anchor: standard|symmetric");
  b->add_option("--out", out, "model JSON");
  b->add_option("--grid-size", grid_size, "verification grid");

  auto* e = app.add_subcommand("eval", "evaluate a model");
  e->add_option("--model", model)->required();
  e->add_option("--u", us, "probability (repeatable)");
  e->add_option("--grid", grid, "N Chebyshev-spaced interior points");
  e->add_option("--out", out);

  auto* v = app.add_subcommand("verify", "error report of a model");
  v->add_option("--model", model)->required();
  v->add_option("--grid-size", grid_size);
  v->add_option("--in", in, "CSV whose first column holds u (e.g. eval output)");
  v->add_option("--out", out);

  auto* s = app.add_subcommand("sample", "inversion variates");
  s->add_option("--model", model)->required();
  s->add_option("-n", n)->required();
  s->add_option("--seed", seed);
  s->add_option("--out", out);

  auto* o = app.add_subcommand("oracle", "reference quantile");
  o->add_option("--dist", dist)->required();
  o->add_option("--params", params)->required();
  o->add_option("--u", u1)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return err.get_exit_code() == 0 ? kOk : kUsage;
  }

  try {
    if (*b) return cmd_build(dist, params, eps, method, anchor, out, grid_size);
    if (*e) return cmd_eval(model, us, grid, out);
    if (*v) return cmd_verify(model, grid_size, in, out);
    if (*s) return cmd_sample(model, n, seed, out);
    if (*o) return cmd_oracle(dist, params, u1);
  } catch (const ParameterError& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return kUsage;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return kVerifyFail;
  }
  return kUsage;
}
