#pragma once

// Batched log-domain arithmetic behind every quadrature sum. Each kernel has
// a scalar reference (`ref::`) and an AVX2+FMA variant (`avx2::`); the public
// entry points dispatch to the best one supported by the running CPU.
//
// The environment variable SHARPLAB_SIMD=scalar|avx2 pins the backend.

#include <span>

namespace sharplab::kernels {

enum class Backend { Scalar, Avx2 };

const char* backend_name(Backend b);
bool avx2_supported();
Backend active_backend();
/// Throws DomainError when `b` is not supported on this CPU.
void set_backend(Backend b);

/// out[i] = p * log|x[i]| (-inf where x[i] == 0).
void log_abs_pow(std::span<const double> x, double p, std::span<double> out);
/// out[i] = exp(x[i]).
void exp_batch(std::span<const double> x, std::span<double> out);
/// out[i] = log phi_start(exp(log_t[i])) with phi_s(t) = sum_{j>=s} t^j/j!.
void log_phi_batch(int start, std::span<const double> log_t, std::span<double> out);
/// log(sum_i exp(x[i])); -inf for an empty span.
double log_sum_exp(std::span<const double> x);

namespace ref {
void log_abs_pow(std::span<const double> x, double p, std::span<double> out);
void exp_batch(std::span<const double> x, std::span<double> out);
void log_phi_batch(int start, std::span<const double> log_t, std::span<double> out);
double log_sum_exp(std::span<const double> x);
}  // namespace ref

namespace avx2 {
void log_abs_pow(std::span<const double> x, double p, std::span<double> out);
void exp_batch(std::span<const double> x, std::span<double> out);
void log_phi_batch(int start, std::span<const double> log_t, std::span<double> out);
double log_sum_exp(std::span<const double> x);
}  // namespace avx2

}  // namespace sharplab::kernels
