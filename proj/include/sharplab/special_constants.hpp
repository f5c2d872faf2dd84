#pragma once

// Sharp constants of the Trudinger-Moser / Adams family and the truncated
// exponential series entering every functional.

#include <utility>

namespace sharplab {

/// Real Gamma function on (0, 171) (Lanczos, g = 7, 9 terms); validated on (0, 60).
double gamma_fn(double x);
/// log Gamma on (0, 1e6); same approximation in log form.
double log_gamma_fn(double x);

/// Surface area of the unit sphere S^{N-1} in R^N: 2 pi^{N/2} / Gamma(N/2).
double sphere_area(int N);

/// Sharp Moser exponent N * (N pi^{N/2} / Gamma(N/2 + 1))^{1/(N-1)}.
double alpha_moser(int N);

/// Adams exponent beta(N, m) for the m-th order Sobolev space W^{m, N/m}.
double beta_adams(int N, int m);

/// Fractional-order Adams exponent beta_0(N, gamma), 0 < gamma < N.
double beta0_fractional(int N, double gamma);

/// Which truncation of exp(t) a functional uses.
class SeriesKind {
 public:
  enum class Family { TrudingerMoser, Adams2, Fractional };

  static SeriesKind tm(int N);
  static SeriesKind adams2(int N);
  static SeriesKind fractional(int N, double gamma);

  Family family() const { return family_; }
  int dimension() const { return N_; }
  double order() const { return gamma_; }
  /// First retained power j0: phi(t) = sum_{j >= j0} t^j / j!.
  int start_index() const { return start_; }

 private:
  SeriesKind(Family f, int N, double gamma, int start)
      : family_(f), N_(N), gamma_(gamma), start_(start) {}

  Family family_;
  int N_;
  double gamma_;
  int start_;
};

/// Start index min{j in N : j >= p - 1} with p = N / gamma, snapping p - 1 to
/// the nearest integer when it is within rounding of one.
int fractional_start_index(double p);

/// Tail series sum_{j >= s} t^j / j!. Throws NumericalError past t ~ 709.
double phi(const SeriesKind& kind, double t);
/// log phi(kind, t) for t > 0, stable for t up to ~1e300.
double log_phi(const SeriesKind& kind, double t);
/// Same as log_phi, taking the start index directly and log(t) as input.
/// Accepts log_t = -inf (returns -inf).
double log_phi_from_log(int start, double log_t);

/// Leading small-t behaviour phi(t) ~ coeff * t^{j0}.
std::pair<int, double> phi_small_t_leading(const SeriesKind& kind);

namespace detail {
// The two evaluation routes for phi; exposed for cross-validation.
double phi_direct_series(int start, double t);
double phi_exp_minus_partial(int start, double t);
// log(j!) for j >= 0.
double log_factorial(int j);
}  // namespace detail

}  // namespace sharplab
