#include <algorithm>
#include <cmath>
#include <limits>

#include "sharplab/kernels.hpp"
#include "sharplab/special_constants.hpp"

namespace sharplab::kernels::ref {

void log_abs_pow(std::span<const double> x, double p, std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = p * std::log(std::abs(x[i]));
}

void exp_batch(std::span<const double> x, std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::exp(x[i]);
}

void log_phi_batch(int start, std::span<const double> log_t, std::span<double> out) {
  for (std::size_t i = 0; i < log_t.size(); ++i) out[i] = log_phi_from_log(start, log_t[i]);
}

double log_sum_exp(std::span<const double> x) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (x.empty()) return kNegInf;
  const double m = *std::max_element(x.begin(), x.end());
  if (m == kNegInf || std::isinf(m)) return m;
  double sum = 0.0;
  for (double v : x) sum += std::exp(v - m);
  return m + std::log(sum);
}

}  // namespace sharplab::kernels::ref
