#include "qfa/sampler.hpp"

#include <algorithm>

#include "qfa/kernels.hpp"

namespace qfa {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Xoshiro256::Xoshiro256(std::uint64_t seed) {
  for (auto& s : s_) s = splitmix64(seed);
}

std::uint64_t Xoshiro256::next() {
  const std::uint64_t r = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return r;
}

double Xoshiro256::uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

void evaluate_batch(const QuantileApproximant& a, const double* u, double* x, std::size_t n) {
  const std::size_t P = a.pieces.size();
  if (P == 1 && a.pieces[0].var == PieceVar::stable) {
    for (std::size_t i = 0; i < n; ++i) x[i] = evaluate(a, u[i]);
    return;
  }
  // Bucket by piece, evaluate each bucket as one contiguous batch.
  std::vector<std::uint32_t> idx(n);
  std::vector<std::size_t> count(P + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    auto it = std::upper_bound(a.pieces.begin(), a.pieces.end(), u[i],
                               [](double v, const Piece& p) { return v < p.lo; });
    const std::size_t k = it == a.pieces.begin() ? 0 : static_cast<std::size_t>(it - a.pieces.begin()) - 1;
    idx[i] = static_cast<std::uint32_t>(k);
    ++count[k + 1];
  }
  for (std::size_t k = 0; k < P; ++k) count[k + 1] += count[k];
  std::vector<std::size_t> order(n), fill(count.begin(), count.end() - 1);
  for (std::size_t i = 0; i < n; ++i) order[fill[idx[i]]++] = i;

  std::vector<double> v, y;
  for (std::size_t k = 0; k < P; ++k) {
    const std::size_t b = count[k], e = count[k + 1];
    if (b == e) continue;
    const Piece& p = a.pieces[k];
    if (p.var == PieceVar::tail) {
      for (std::size_t j = b; j < e; ++j) x[order[j]] = evaluate_piece(a, k, u[order[j]]);
      continue;
    }
    v.resize(e - b);
    y.resize(e - b);
    for (std::size_t j = b; j < e; ++j) {
      const double uj = u[order[j]];
      switch (p.var) {
        case PieceVar::z_left:
          v[j - b] = a.base.quantile_branch(Side::left, uj);
          break;
        case PieceVar::z_right:
          v[j - b] = a.base.quantile_branch(Side::right, uj);
          break;
        default:
          v[j - b] = uj;
      }
    }
    kernels::rational_eval(p.rat, v.data(), y.data(), e - b);
    for (std::size_t j = b; j < e; ++j) x[order[j]] = a.loc + a.scale * y[j - b];
  }
}

std::vector<double> sample(const QuantileApproximant& a, std::size_t n, std::uint64_t seed) {
  Xoshiro256 g(seed);
  std::vector<double> u(n), x(n);
  for (auto& v : u) v = g.uniform();
  evaluate_batch(a, u.data(), x.data(), n);
  return x;
}

}  // namespace qfa
