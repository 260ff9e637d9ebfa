#include "qfa/kernels.hpp"

#include <atomic>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#endif
#if defined(__aarch64__)
#include <arm_neon.h>
#endif

namespace qfa::kernels {

const char* isa_name(Isa i) {
  switch (i) {
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
    default:
      return "scalar";
  }
}

Isa detected_isa() {
#if defined(__x86_64__) || defined(__i386__)
  static const bool avx2 = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return avx2 ? Isa::avx2 : Isa::scalar;
#elif defined(__aarch64__)
  return Isa::neon;
#else
  return Isa::scalar;
#endif
}

namespace {
std::atomic<int> forced{-1};
}

Isa active_isa() {
  const int f = forced.load(std::memory_order_relaxed);
  return f < 0 ? detected_isa() : static_cast<Isa>(f);
}

void force_isa(Isa i) {
  if (i != Isa::scalar && i != detected_isa()) i = Isa::scalar;
  forced.store(static_cast<int>(i), std::memory_order_relaxed);
}

void reset_isa() { forced.store(-1, std::memory_order_relaxed); }

void rational_eval_scalar(const RationalApproximant& r, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = r(x[i]);
}

#if defined(__x86_64__) || defined(__i386__)
namespace {

__attribute__((target("avx2,fma"))) inline __m256d horner4(const std::vector<double>& c, __m256d t) {
  __m256d s = _mm256_setzero_pd();
  for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) s = _mm256_fmadd_pd(s, t, _mm256_set1_pd(c[k]));
  return s;
}

__attribute__((target("avx2,fma"))) inline __m256d clenshaw4(const std::vector<double>& c, __m256d t) {
  __m256d b1 = _mm256_setzero_pd(), b2 = _mm256_setzero_pd();
  const __m256d t2 = _mm256_add_pd(t, t);
  for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k) {
    const __m256d b0 = _mm256_add_pd(_mm256_fmsub_pd(t2, b1, b2), _mm256_set1_pd(c[k]));
    b2 = b1;
    b1 = b0;
  }
  const double c0 = c.empty() ? 0.0 : c[0];
  return _mm256_add_pd(_mm256_fmsub_pd(t, b1, b2), _mm256_set1_pd(c0));
}

}  // namespace

__attribute__((target("avx2,fma"))) void rational_eval_avx2(const RationalApproximant& r, const double* x,
                                                            double* y, std::size_t n) {
  const __m256d c = _mm256_set1_pd(r.center), s = _mm256_set1_pd(r.scale);
  const bool cheb = r.basis == Basis::chebyshev;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d t = _mm256_div_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i), c), s);
    const __m256d p = cheb ? clenshaw4(r.numer, t) : horner4(r.numer, t);
    const __m256d q = cheb ? clenshaw4(r.denom, t) : horner4(r.denom, t);
    _mm256_storeu_pd(y + i, _mm256_div_pd(p, q));
  }
  rational_eval_scalar(r, x + i, y + i, n - i);
}
#endif

#if defined(__aarch64__)
namespace {

inline float64x2_t horner2(const std::vector<double>& c, float64x2_t t) {
  float64x2_t s = vdupq_n_f64(0.0);
  for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) s = vfmaq_f64(vdupq_n_f64(c[k]), s, t);
  return s;
}

inline float64x2_t clenshaw2(const std::vector<double>& c, float64x2_t t) {
  float64x2_t b1 = vdupq_n_f64(0.0), b2 = vdupq_n_f64(0.0);
  const float64x2_t t2 = vaddq_f64(t, t);
  for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k) {
    const float64x2_t b0 = vaddq_f64(vfmaq_f64(vnegq_f64(b2), t2, b1), vdupq_n_f64(c[k]));
    b2 = b1;
    b1 = b0;
  }
  const double c0 = c.empty() ? 0.0 : c[0];
  return vaddq_f64(vfmaq_f64(vnegq_f64(b2), t, b1), vdupq_n_f64(c0));
}

}  // namespace

void rational_eval_neon(const RationalApproximant& r, const double* x, double* y, std::size_t n) {
  const float64x2_t c = vdupq_n_f64(r.center), s = vdupq_n_f64(r.scale);
  const bool cheb = r.basis == Basis::chebyshev;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t t = vdivq_f64(vsubq_f64(vld1q_f64(x + i), c), s);
    const float64x2_t p = cheb ? clenshaw2(r.numer, t) : horner2(r.numer, t);
    const float64x2_t q = cheb ? clenshaw2(r.denom, t) : horner2(r.denom, t);
    vst1q_f64(y + i, vdivq_f64(p, q));
  }
  rational_eval_scalar(r, x + i, y + i, n - i);
}
#endif

void rational_eval(const RationalApproximant& r, const double* x, double* y, std::size_t n) {
  switch (active_isa()) {
#if defined(__x86_64__) || defined(__i386__)
    case Isa::avx2:
      rational_eval_avx2(r, x, y, n);
      return;
#endif
#if defined(__aarch64__)
    case Isa::neon:
      rational_eval_neon(r, x, y, n);
      return;
#endif
    default:
      rational_eval_scalar(r, x, y, n);
  }
}

}  // namespace qfa::kernels
