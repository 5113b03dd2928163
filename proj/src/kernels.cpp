#include "uavnet/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace uavnet::kernels {

namespace detail {

double reduce_add_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void mul_accumulate_scalar(double* acc, const double* x, const double* y,
                           std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += x[i] * y[i];
}

double waterfill_sum_scalar(const double* shares, const double* floors,
                            double inv_level, double p_max, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double p = shares[i] * inv_level - floors[i];
    if (p < 0.0) p = 0.0;
    if (p > p_max) p = p_max;
    acc += p;
  }
  return acc;
}

void waterfill_fill_scalar(double* out, const double* shares,
                           const double* floors, double inv_level,
                           double p_max, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double p = shares[i] * inv_level - floors[i];
    if (p < 0.0) p = 0.0;
    if (p > p_max) p = p_max;
    out[i] = p;
  }
}

}  // namespace detail

namespace {

struct KernelTable {
  double (*reduce_add)(const double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  void (*mul_accumulate)(double*, const double*, const double*, std::size_t);
  double (*waterfill_sum)(const double*, const double*, double, double,
                          std::size_t);
  void (*waterfill_fill)(double*, const double*, const double*, double, double,
                         std::size_t);
};

constexpr KernelTable scalar_table = {
    detail::reduce_add_scalar, detail::dot_scalar,
    detail::mul_accumulate_scalar, detail::waterfill_sum_scalar,
    detail::waterfill_fill_scalar};

#if defined(UAVNET_HAVE_AVX2_TU)
constexpr KernelTable avx2_table = {
    detail::reduce_add_avx2, detail::dot_avx2, detail::mul_accumulate_avx2,
    detail::waterfill_sum_avx2, detail::waterfill_fill_avx2};
#endif

bool cpu_has_avx2() {
#if defined(UAVNET_HAVE_AVX2_TU) && defined(__GNUC__)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

Backend pick_initial_backend() {
  const char* env = std::getenv("UAVNET_SIMD");
  if (env != nullptr) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) return Backend::avx2;
    // Unknown value or unsupported request: fall through to auto.
  }
  return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

struct Dispatch {
  Backend backend;
  const KernelTable* table;

  Dispatch() { select(pick_initial_backend()); }

  void select(Backend b) {
    backend = b;
#if defined(UAVNET_HAVE_AVX2_TU)
    table = (b == Backend::avx2) ? &avx2_table : &scalar_table;
#else
    table = &scalar_table;
#endif
  }
};

Dispatch& dispatch() {
  static Dispatch d;
  return d;
}

}  // namespace

Backend active_backend() { return dispatch().backend; }

bool cpu_supports(Backend b) {
  return b == Backend::scalar || (b == Backend::avx2 && cpu_has_avx2());
}

void set_backend(Backend b) {
  if (!cpu_supports(b))
    throw std::invalid_argument("kernel backend not supported on this CPU");
  dispatch().select(b);
}

const char* backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

double reduce_add(const double* x, std::size_t n) {
  return dispatch().table->reduce_add(x, n);
}

double dot(const double* x, const double* y, std::size_t n) {
  return dispatch().table->dot(x, y, n);
}

void mul_accumulate(double* acc, const double* x, const double* y,
                    std::size_t n) {
  dispatch().table->mul_accumulate(acc, x, y, n);
}

double waterfill_sum(const double* shares, const double* floors,
                     double inv_level, double p_max, std::size_t n) {
  return dispatch().table->waterfill_sum(shares, floors, inv_level, p_max, n);
}

void waterfill_fill(double* out, const double* shares, const double* floors,
                    double inv_level, double p_max, std::size_t n) {
  dispatch().table->waterfill_fill(out, shares, floors, inv_level, p_max, n);
}

}  // namespace uavnet::kernels
