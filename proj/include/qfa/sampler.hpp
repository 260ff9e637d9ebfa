#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qfa/builder.hpp"

namespace qfa {

// xoshiro256** seeded through splitmix64.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed);
  std::uint64_t next();
  // ((x >> 11) + 1/2) 2^-53: open interval (0, 1), never 0 or 1.
  double uniform();

 private:
  std::uint64_t s_[4];
};

// x[i] = Q_A(u[i]). Rational pieces go through the dispatched SIMD kernels;
// with the scalar kernel forced the result equals evaluate() bit for bit.
void evaluate_batch(const QuantileApproximant& a, const double* u, double* x, std::size_t n);

// n inversion variates X = Q_A(U).
std::vector<double> sample(const QuantileApproximant& a, std::size_t n, std::uint64_t seed);

}  // namespace qfa
