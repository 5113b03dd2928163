#pragma once

#include <cstddef>

// Small numeric kernels behind a runtime dispatch: a scalar reference
// implementation always exists, and an AVX2 variant is selected on x86-64
// when the CPU supports it. The environment variable UAVNET_SIMD=scalar|avx2
// overrides auto-detection (requesting avx2 on an unsupported CPU falls back
// to scalar).

namespace uavnet::kernels {

enum class Backend { scalar, avx2 };

/// Backend currently used by the dispatching entry points below.
Backend active_backend();

/// Force a backend. Throws std::invalid_argument if this CPU cannot run it.
void set_backend(Backend b);

bool cpu_supports(Backend b);
const char* backend_name(Backend b);

/// Sum of x[0..n).
double reduce_add(const double* x, std::size_t n);

/// Dot product of x and y.
double dot(const double* x, const double* y, std::size_t n);

/// acc[i] += x[i] * y[i]; the interference accumulation loop.
void mul_accumulate(double* acc, const double* x, const double* y,
                    std::size_t n);

/// Capped water-fill evaluation at water level 1/inv_level:
///   p_i = min(p_max, max(0, shares[i] * inv_level - floors[i]))
/// where floors[i] is the per-user floor 1/theta_i. Returns sum p_i.
double waterfill_sum(const double* shares, const double* floors,
                     double inv_level, double p_max, std::size_t n);

/// Same clamp as waterfill_sum but writes the per-user powers to out.
void waterfill_fill(double* out, const double* shares, const double* floors,
                    double inv_level, double p_max, std::size_t n);

// Direct backend entry points, exposed so equivalence tests can compare the
// two implementations on identical inputs.
namespace detail {

double reduce_add_scalar(const double* x, std::size_t n);
double dot_scalar(const double* x, const double* y, std::size_t n);
void mul_accumulate_scalar(double* acc, const double* x, const double* y,
                           std::size_t n);
double waterfill_sum_scalar(const double* shares, const double* floors,
                            double inv_level, double p_max, std::size_t n);
void waterfill_fill_scalar(double* out, const double* shares,
                           const double* floors, double inv_level,
                           double p_max, std::size_t n);

#if defined(UAVNET_HAVE_AVX2_TU)
double reduce_add_avx2(const double* x, std::size_t n);
double dot_avx2(const double* x, const double* y, std::size_t n);
void mul_accumulate_avx2(double* acc, const double* x, const double* y,
                         std::size_t n);
double waterfill_sum_avx2(const double* shares, const double* floors,
                          double inv_level, double p_max, std::size_t n);
void waterfill_fill_avx2(double* out, const double* shares,
                         const double* floors, double inv_level, double p_max,
                         std::size_t n);
#endif

}  // namespace detail

}  // namespace uavnet::kernels
