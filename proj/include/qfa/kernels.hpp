#pragma once

#include <cstddef>

#include "qfa/acceleration.hpp"

namespace qfa::kernels {

enum class Isa { scalar, avx2, neon };

const char* isa_name(Isa i);
// Best variant supported by this CPU (checked once at runtime).
Isa detected_isa();
// Variant used by the dispatching entry points; tests can force one.
Isa active_isa();
void force_isa(Isa i);  // falls back to scalar when unsupported
void reset_isa();

// y[i] = P(t_i) / Q(t_i), t_i = (x[i] - r.center) / r.scale, in the basis of r.
void rational_eval(const RationalApproximant& r, const double* x, double* y, std::size_t n);

// Fixed variants. The scalar one is the reference and agrees bit-for-bit with
// RationalApproximant::operator().
void rational_eval_scalar(const RationalApproximant& r, const double* x, double* y, std::size_t n);
#if defined(__x86_64__) || defined(__i386__)
void rational_eval_avx2(const RationalApproximant& r, const double* x, double* y, std::size_t n);
#endif
#if defined(__aarch64__)
void rational_eval_neon(const RationalApproximant& r, const double* x, double* y, std::size_t n);
#endif

}  // namespace qfa::kernels
