#include "sharplab/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "sharplab/errors.hpp"

namespace sharplab::kernels {

namespace {

bool compiled_with_avx2() {
#if defined(SHARPLAB_HAVE_AVX2_TU)
  return true;
#else
  return false;
#endif
}

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend detect() {
  if (const char* env = std::getenv("SHARPLAB_SIMD")) {
    const std::string v(env);
    if (v == "scalar") return Backend::Scalar;
    if (v == "avx2" && avx2_supported()) return Backend::Avx2;
  }
  return avx2_supported() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<int>& backend_slot() {
  static std::atomic<int> slot{static_cast<int>(detect())};
  return slot;
}

bool use_avx2() { return backend_slot().load(std::memory_order_relaxed) == static_cast<int>(Backend::Avx2); }

}  // namespace

const char* backend_name(Backend b) { return b == Backend::Avx2 ? "avx2" : "scalar"; }

bool avx2_supported() {
  static const bool ok = compiled_with_avx2() && cpu_has_avx2();
  return ok;
}

Backend active_backend() { return static_cast<Backend>(backend_slot().load()); }

void set_backend(Backend b) {
  if (b == Backend::Avx2 && !avx2_supported()) {
    throw DomainError("set_backend: AVX2/FMA not available on this CPU or build");
  }
  backend_slot().store(static_cast<int>(b));
}

void log_abs_pow(std::span<const double> x, double p, std::span<double> out) {
  use_avx2() ? avx2::log_abs_pow(x, p, out) : ref::log_abs_pow(x, p, out);
}

void exp_batch(std::span<const double> x, std::span<double> out) {
  use_avx2() ? avx2::exp_batch(x, out) : ref::exp_batch(x, out);
}

void log_phi_batch(int start, std::span<const double> log_t, std::span<double> out) {
  use_avx2() ? avx2::log_phi_batch(start, log_t, out) : ref::log_phi_batch(start, log_t, out);
}

double log_sum_exp(std::span<const double> x) {
  return use_avx2() ? avx2::log_sum_exp(x) : ref::log_sum_exp(x);
}

}  // namespace sharplab::kernels
