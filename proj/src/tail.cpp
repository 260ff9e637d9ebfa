#include "qfa/tail.hpp"

#include <cmath>

namespace qfa {

double TailExpansion::y_of_mass(double w) const { return -(std::log(w) + log_c) / rate; }

double TailExpansion::apply_map(double x) const {
  switch (map) {
    case Map::negate:
      return -x;
    case Map::reciprocal:
      return 1.0 / x;
    default:
      return x;
  }
}

double TailExpansion::eval_mass(double w) const {
  return apply_map(logpoly_eval(series, y_of_mass(w)).value);
}

}  // namespace qfa
