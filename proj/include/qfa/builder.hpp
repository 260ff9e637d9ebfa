#pragma once

#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qfa/acceleration.hpp"
#include "qfa/base.hpp"
#include "qfa/distributions.hpp"
#include "qfa/stable.hpp"
#include "qfa/tail.hpp"

namespace qfa {

enum class Method { pade, chebyshev, cheby_pade };
std::string method_name(Method m);
Method method_from_name(const std::string& s);  // accepts cheby-pade and cheby_pade

// Anchor of the side recycling series. standard: z0 = (Q_B(tau) + Q_B(u_m/2))/2
// on both sides; symmetric uses Q_B((1 + u_m)/2) on the right.
enum class AnchorRule { standard, symmetric };

enum class RegionKind { left_tail, left, central, right, right_tail };
std::string region_name(RegionKind k);
RegionKind region_from_name(const std::string& s);

struct RegionPartition {
  double tau_l = 1e-10, u1 = 0.0, u2 = 0.0, tau_r = 1e-10;
  double u_m = 0.5;  // centre of the central region
};

// The variable a piece is expressed in: u itself, z on one branch of the base
// distribution, the tail variable y, or the stable dispatcher.
enum class PieceVar { u, z_left, z_right, tail, stable };

struct Piece {
  RegionKind region = RegionKind::central;
  double lo = 0.0, hi = 1.0;  // [lo, hi) in u
  PieceVar var = PieceVar::u;
  RationalApproximant rat;    // u and z pieces; rational tails in t = 1/y
  TailExpansion tail;         // tail pieces: y map, reflection map, log series
  bool tail_rational = false; // y + rat(1/y) instead of the log series
  double check_error = 0.0;   // worst |u - F(Q_A(u))| at the build check points

  int degree() const;
};

using ParamList = std::vector<std::pair<std::string, double>>;
using FamilyParams = std::variant<HypParams, VGParams, GIGParams, StableParams>;

// Parse k=v pairs (missing location/scale keys take defaults); throws
// ParameterError on unknown keys or violated constraints.
FamilyParams make_params(Family f, const ParamList& params);
std::unique_ptr<Distribution> make_distribution(const FamilyParams& p);

struct BuildOptions {
  Method method = Method::cheby_pade;
  AnchorRule anchor = AnchorRule::standard;
  int max_depth = 6;       // subdivision depth when a ladder fails
  int max_k = 12;          // diagonal (k,k) ladders stop here
  int max_cheb = 60;       // truncated Chebyshev degree limit
  double tau_cap = 1e-9;   // tail search interval [tau_default, tau_cap]
  double tau_default = 1e-10;
  double safety = 0.5;     // check-point errors must be below safety * eps
};

struct QuantileApproximant {
  Family family = Family::hyperbolic;
  ParamList params;  // as given
  FamilyParams fp;
  double epsilon = 0.0;
  Method method = Method::cheby_pade;
  RegionPartition partition;
  BaseDistribution base;
  double loc = 0.0, scale = 1.0;  // x = loc + scale * x_std (GIG: scale = eta)
  double x_m = 0.0, r_tilde = 0.0;
  bool target_met = true;
  double check_error = 0.0;
  std::vector<Piece> pieces;  // sorted, covering (0, 1)
  std::shared_ptr<const StableQuantileFunction> stable;

  double operator()(double u) const;
  double central_degree() const;
};

RegionPartition partition_domain(Family f, const ParamList& params, double eps,
                                 const BuildOptions& opt = {});
QuantileApproximant build(Family f, const ParamList& params, double eps,
                          const BuildOptions& opt = {});
double evaluate(const QuantileApproximant& a, double u);
// Piece i evaluated at u, also outside its own interval (boundary checks).
double evaluate_piece(const QuantileApproximant& a, std::size_t i, double u);
// Restore evaluators that are not serialized (the stable dispatcher).
void finalize(QuantileApproximant& a);

struct VerifyRow {
  double u, q, abs_err;
};

struct VerifyReport {
  double max_error = 0.0;
  std::vector<std::pair<RegionKind, double>> region_max;
  std::vector<VerifyRow> rows;
  double max_x_error = 0.0;  // |Q - Q_A| at 64 points, oracle quantile
  bool passed = false;       // max_error <= epsilon
};

// Geometric in both tails plus uniform in the middle; includes tau_L, 1 - tau_R
// and reaches down to min(tau, 1e-10).
std::vector<double> verification_grid(const RegionPartition& p, int n);
VerifyReport verify(const QuantileApproximant& a, int grid_size);

// |u - F(x)|, measured through 1 - F for u > 1/2.
double roundtrip_error(const Distribution& d, double u, double x);

}  // namespace qfa
