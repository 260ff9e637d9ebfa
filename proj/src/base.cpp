#include "qfa/base.hpp"

#include <cmath>
#include <limits>

#include "qfa/errors.hpp"

namespace qfa {

double BaseDistribution::log_pdf_branch(Side s, double x) const {
  if (s == Side::right) return std::log(right_rate * (1.0 - p_m)) - right_rate * (x - x_m);
  if (left_kind == LeftKind::exponential) return std::log(left_rate * p_m) + left_rate * (x - x_m);
  if (!(x > 0.0)) return -std::numeric_limits<double>::infinity();
  return std::log(left_rate * p_m / (x * x)) - left_rate * (1.0 / x - 1.0 / x_m);
}

double BaseDistribution::cdf_branch(Side s, double x) const {
  if (s == Side::right) return (1.0 - p_m) * std::exp(-right_rate * (x - x_m));
  if (left_kind == LeftKind::exponential) return p_m * std::exp(left_rate * (x - x_m));
  if (!(x > 0.0)) return 0.0;
  return p_m * std::exp(-left_rate * (1.0 / x - 1.0 / x_m));
}

double BaseDistribution::quantile_branch(Side s, double u) const {
  if (s == Side::right) return quantile_branch_upper(1.0 - u);
  const double l = std::log(u / p_m) / left_rate;
  if (left_kind == LeftKind::exponential) return x_m + l;
  const double d = 1.0 / x_m - l;
  if (!(d > 0.0)) throw ParameterError("base quantile: level outside the inverse branch");
  return 1.0 / d;
}

double BaseDistribution::quantile_branch_upper(double v) const {
  return x_m - std::log(v / (1.0 - p_m)) / right_rate;
}

double BaseDistribution::log_pdf(double x) const {
  return log_pdf_branch(x <= x_m ? Side::left : Side::right, x);
}

double BaseDistribution::pdf(double x) const { return std::exp(log_pdf(x)); }

double BaseDistribution::cdf(double x) const {
  return x <= x_m ? cdf_branch(Side::left, x) : 1.0 - cdf_branch(Side::right, x);
}

double BaseDistribution::sf(double x) const {
  return x <= x_m ? 1.0 - cdf_branch(Side::left, x) : cdf_branch(Side::right, x);
}

double BaseDistribution::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw ParameterError("base quantile: u must lie in (0,1)");
  return u <= p_m ? quantile_branch(Side::left, u) : quantile_branch_upper(1.0 - u);
}

double BaseDistribution::quantile_upper(double v) const {
  if (!(v > 0.0 && v < 1.0)) throw ParameterError("base quantile: v must lie in (0,1)");
  return v < 1.0 - p_m ? quantile_branch_upper(v) : quantile_branch(Side::left, 1.0 - v);
}

double BaseDistribution::left_weight() const {
  return left_kind == LeftKind::exponential ? p_m * std::exp(-left_rate * x_m)
                                            : p_m * std::exp(left_rate / x_m);
}

double BaseDistribution::right_weight() const { return (1.0 - p_m) * std::exp(right_rate * x_m); }

}  // namespace qfa
