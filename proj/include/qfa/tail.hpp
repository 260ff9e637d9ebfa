#pragma once

#include "qfa/distributions.hpp"
#include "qfa/series.hpp"

namespace qfa {

// Log-type tail expansion x ~ y + sum_n P_n(ln y)/y^n of a right tail, with
// y = -(ln w + log_c) / rate and w the tail mass (1 - u on the right, u on
// the left). Left tails are right tails of a reflected or reciprocal law,
// mapped back by `map`. Values are for the standardized variable.
struct TailExpansion {
  enum class Map { identity, negate, reciprocal };

  Side side = Side::right;
  double log_c = 0.0, rate = 1.0;
  Map map = Map::identity;
  LogPolySeries series;

  double mass(double u) const { return side == Side::right ? 1.0 - u : u; }
  double y_of_mass(double w) const;
  double apply_map(double x) const;
  // Optimally truncated value from the tail mass.
  double eval_mass(double w) const;
  double operator()(double u) const { return eval_mass(mass(u)); }
};

}  // namespace qfa
