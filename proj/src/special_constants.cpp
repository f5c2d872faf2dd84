#include "sharplab/special_constants.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "sharplab/errors.hpp"

namespace sharplab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// Largest t with exp(t) finite.
constexpr double kExpOverflow = 709.782712893384;

double lanczos_sum(double z) {
  double a = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) a += kLanczos[i] / (z + static_cast<double>(i));
  return a;
}

void require_dimension(int N, int min_N, const char* what) {
  if (N < min_N) {
    throw DomainError(std::string(what) + ": dimension N = " + std::to_string(N) +
                      " must be >= " + std::to_string(min_N));
  }
}

}  // namespace

double gamma_fn(double x) {
  if (!(x > 0.0) || x >= 171.0) {
    throw DomainError("gamma_fn: argument outside (0, 171): " + std::to_string(x));
  }
  if (x < 0.5) {
    // Reflection keeps the Lanczos sum in its accurate range.
    return kPi / (std::sin(kPi * x) * gamma_fn(1.0 - x));
  }
  const double z = x - 1.0;
  const double t = z + kLanczosG + 0.5;
  const double a = lanczos_sum(z);
  if (x < 140.0) {
    return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * a;
  }
  return std::exp(0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(a));
}

double log_gamma_fn(double x) {
  if (!(x > 0.0) || x > 1e6) {
    throw DomainError("log_gamma_fn: argument outside (0, 1e6]: " + std::to_string(x));
  }
  if (x < 0.5) {
    return std::log(kPi / std::abs(std::sin(kPi * x))) - log_gamma_fn(1.0 - x);
  }
  const double z = x - 1.0;
  const double t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(lanczos_sum(z));
}

double sphere_area(int N) {
  require_dimension(N, 2, "sphere_area");
  return 2.0 * std::pow(kPi, 0.5 * N) / gamma_fn(0.5 * N);
}

double alpha_moser(int N) {
  require_dimension(N, 2, "alpha_moser");
  const double ball = static_cast<double>(N) * std::pow(kPi, 0.5 * N) / gamma_fn(0.5 * N + 1.0);
  const double alpha = N * std::pow(ball, 1.0 / (N - 1));
  const double via_sphere = N * std::pow(sphere_area(N), 1.0 / (N - 1));
  if (std::abs(alpha - via_sphere) > 1e-12 * alpha) {
    throw NumericalError("alpha_moser: inconsistent with sphere_area at N = " + std::to_string(N));
  }
  return alpha;
}

double beta_adams(int N, int m) {
  require_dimension(N, 2, "beta_adams");
  if (m <= 0 || m >= N) {
    throw DomainError("beta_adams: order m = " + std::to_string(m) + " must satisfy 0 < m < N");
  }
  double ratio = 0.0;
  if (m % 2 == 1) {
    ratio = gamma_fn(0.5 * (m + 1)) / gamma_fn(0.5 * (N - m + 1));
  } else {
    ratio = gamma_fn(0.5 * m) / gamma_fn(0.5 * (N - m));
  }
  const double bracket = std::pow(kPi, 0.5 * N) * std::ldexp(1.0, m) * ratio;
  return N / sphere_area(N) * std::pow(bracket, static_cast<double>(N) / (N - m));
}

double beta0_fractional(int N, double gamma) {
  require_dimension(N, 2, "beta0_fractional");
  if (!(gamma > 0.0) || !(gamma < N)) {
    throw DomainError("beta0_fractional: gamma must lie in (0, N)");
  }
  const double p = N / gamma;
  const double bracket =
      std::pow(kPi, 0.5 * N) * std::pow(2.0, gamma) * gamma_fn(0.5 * gamma) / gamma_fn(0.5 * (N - gamma));
  return N / sphere_area(N) * std::pow(bracket, p / (p - 1.0));
}

int fractional_start_index(double p) {
  if (!(p > 1.0)) throw DomainError("fractional_start_index: p must exceed 1");
  const double x = p - 1.0;
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, x)) return static_cast<int>(nearest);
  return static_cast<int>(std::ceil(x));
}

SeriesKind SeriesKind::tm(int N) {
  require_dimension(N, 2, "SeriesKind::tm");
  return SeriesKind(Family::TrudingerMoser, N, 1.0, N - 1);
}

SeriesKind SeriesKind::adams2(int N) {
  require_dimension(N, 3, "SeriesKind::adams2");
  return SeriesKind(Family::Adams2, N, 2.0, (N - 1) / 2);
}

SeriesKind SeriesKind::fractional(int N, double gamma) {
  require_dimension(N, 2, "SeriesKind::fractional");
  if (!(gamma > 0.0) || !(gamma < N)) {
    throw DomainError("SeriesKind::fractional: gamma must lie in (0, N)");
  }
  return SeriesKind(Family::Fractional, N, gamma, fractional_start_index(N / gamma));
}

namespace detail {

double log_factorial(int j) {
  static const std::array<double, 64> table = [] {
    std::array<double, 64> t{};
    double acc = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
      if (k > 1) acc += std::log(static_cast<double>(k));
      t[k] = acc;
    }
    return t;
  }();
  if (j < 0) throw DomainError("log_factorial: negative argument");
  if (j < static_cast<int>(table.size())) return table[static_cast<std::size_t>(j)];
  return log_gamma_fn(j + 1.0);
}

double phi_direct_series(int start, double t) {
  if (t == 0.0) return start == 0 ? 1.0 : 0.0;
  double term = std::exp(start * std::log(t) - log_factorial(start));
  double sum = 0.0;
  for (int k = 0; k < 100000; ++k) {
    sum += term;
    term *= t / static_cast<double>(start + k + 1);
    if (term < 1e-17 * sum && static_cast<double>(start + k + 1) > t) break;
  }
  return sum;
}

double phi_exp_minus_partial(int start, double t) {
  if (t > kExpOverflow) throw NumericalError("phi: exp(t) overflows; use log_phi");
  double partial = 0.0;
  double term = 1.0;
  for (int j = 0; j < start; ++j) {
    partial += term;
    term *= t / static_cast<double>(j + 1);
  }
  return std::exp(t) - partial;
}

}  // namespace detail

namespace {

// e^{-t} sum_{j<s} t^j / j!, the fraction of e^t removed by the truncation.
double removed_fraction(int start, double log_t, double t) {
  double r = 0.0;
  for (int j = 0; j < start; ++j) {
    r += std::exp(j * log_t - t - detail::log_factorial(j));
  }
  return r;
}

}  // namespace

double phi(const SeriesKind& kind, double t) {
  if (!(t >= 0.0)) throw DomainError("phi: argument must be >= 0");
  const int s = kind.start_index();
  if (t == 0.0) return s == 0 ? 1.0 : 0.0;
  if (t > kExpOverflow) {
    throw NumericalError("phi: value overflows at t = " + std::to_string(t) + "; use log_phi");
  }
  // Subtracting the partial sum from e^t is well conditioned only when the
  // removed part is at most half of e^t; otherwise sum the tail directly.
  if (removed_fraction(s, std::log(t), t) <= 0.5) return detail::phi_exp_minus_partial(s, t);
  return detail::phi_direct_series(s, t);
}

double log_phi_from_log(int start, double log_t) {
  if (std::isnan(log_t)) throw DomainError("log_phi: NaN argument");
  if (log_t == -std::numeric_limits<double>::infinity()) {
    return start == 0 ? 0.0 : log_t;
  }
  const double t = std::exp(log_t);
  if (std::isinf(t)) return t;
  const double removed = removed_fraction(start, log_t, t);
  if (removed <= 0.5) return t + std::log1p(-removed);
  // t^s/s! * sum_k t^k s!/(s+k)!, all terms positive.
  double term = 1.0;
  double sum = 0.0;
  for (int k = 0; k < 100000; ++k) {
    sum += term;
    term *= t / static_cast<double>(start + k + 1);
    if (term < 1e-17 * sum) break;
  }
  return start * log_t - detail::log_factorial(start) + std::log(sum);
}

double log_phi(const SeriesKind& kind, double t) {
  if (!(t > 0.0)) throw DomainError("log_phi: argument must be > 0");
  return log_phi_from_log(kind.start_index(), std::log(t));
}

std::pair<int, double> phi_small_t_leading(const SeriesKind& kind) {
  const int s = kind.start_index();
  return {s, std::exp(-detail::log_factorial(s))};
}

}  // namespace sharplab
