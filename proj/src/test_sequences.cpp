#include "sharplab/test_sequences.hpp"

#include <cmath>
#include <string>

#include "sharplab/errors.hpp"
#include "sharplab/special_constants.hpp"

namespace sharplab {

namespace {

void check_moser(const MoserSequenceSpec& s) {
  if (!(s.n > 0.0) || !std::isfinite(s.n)) throw DomainError("moser_profile: n must be positive");
  if (s.N < 2) throw DomainError("moser_profile: N must be >= 2");
  if (!(s.beta >= 0.0) || !(s.beta < s.N)) throw DomainError("moser_profile: beta must satisfy 0 <= beta < N");
}

void check_adams_dim(int N, const char* what) {
  if (N < 3) throw DomainError(std::string(what) + ": Adams profiles need N >= 3");
}

}  // namespace

double moser_plateau(const MoserSequenceSpec& spec) {
  check_moser(spec);
  const int N = spec.N;
  return std::pow(1.0 / sphere_area(N), 1.0 / N) * std::pow(spec.n / (N - spec.beta), (N - 1.0) / N);
}

RadialProfile moser_profile(const MoserSequenceSpec& spec) {
  const double h = moser_plateau(spec);
  const double rho0 = -spec.n / (spec.N - spec.beta);
  return RadialProfile(spec.N, RadialGrid({rho0, 0.0}), {h, 0.0});
}

double psi_cap(double s) { return s * s * (2.0 - s); }

double smooth_cap(double t, double eps) {
  if (!(eps > 0.0) || !(eps < 0.5)) throw DomainError("smooth_cap: eps must lie in (0, 1/2)");
  if (t <= 0.0) return 0.0;
  if (t <= eps) return eps * psi_cap(t / eps);
  if (t <= 1.0 - eps) return t;
  if (t <= 1.0) return 1.0 - eps * psi_cap((1.0 - t) / eps);
  return 1.0;
}

double smooth_cap_derivative(double t, double eps) {
  if (!(eps > 0.0) || !(eps < 0.5)) throw DomainError("smooth_cap: eps must lie in (0, 1/2)");
  auto dpsi = [](double s) { return s * (4.0 - 3.0 * s); };
  if (t <= 0.0 || t > 1.0) return 0.0;
  if (t <= eps) return dpsi(t / eps);
  if (t <= 1.0 - eps) return 1.0;
  return dpsi((1.0 - t) / eps);
}

ParametricProfile adams_psi_profile(const AdamsPsiSpec& spec) {
  check_adams_dim(spec.N, "adams_psi_profile");
  if (!(spec.r > 0.0) || !(spec.r < 1.0)) throw DomainError("adams_psi_profile: r must lie in (0, 1)");
  if (!(spec.eps > 0.0) || !(spec.eps < 0.5)) throw DomainError("adams_psi_profile: eps must lie in (0, 1/2)");
  const int N = spec.N;
  const double L = -std::log(spec.r);
  const double e = spec.eps;
  const double A = std::pow(L, (N - 2.0) / N);
  // With t = -rho / L each branch of H is a cubic in rho.
  const double q2 = 1.0 / (e * L * L);
  const double q3 = 1.0 / (e * e * L * L * L);
  std::vector<LogPolyPiece> pieces(3);
  pieces[0] = {-L, -(1.0 - e) * L, {A, 0.0, -2.0 * A * q2, A * q3}};
  pieces[1] = {-(1.0 - e) * L, -e * L, {A * (1.0 - e), -A / L, 0.0, 0.0}};
  pieces[2] = {-e * L, 0.0, {A * e, -A / L, -A * q2, A * q3}};
  return ParametricProfile(N, "adams-psi", QuadraticCap{A, 0.0, -L}, std::move(pieces));
}

namespace {

// Log branch N beta(N,2)^{2/N-1} (ln k)^{-2/N} ln(1/|x|) on [k^{-1/N}, 1].
LogPolyPiece adams_log_branch(const AdamsQuadraticSpec& spec, double* slope_out) {
  check_adams_dim(spec.N, "adams_quadratic_profile");
  if (!(spec.log_k >= std::log(3.0)) || !std::isfinite(spec.log_k)) {
    throw DomainError("adams_quadratic_profile: need k >= 3");
  }
  const int N = spec.N;
  const double B = N * std::pow(beta_adams(N, 2), 2.0 / N - 1.0) * std::pow(spec.log_k, -2.0 / N);
  const double rho_c = -spec.log_k / N;
  *slope_out = B;
  return LogPolyPiece{rho_c, 0.0, {B * spec.log_k / N, -B, 0.0, 0.0}};
}

}  // namespace

ParametricProfile adams_quadratic_profile(const AdamsQuadraticSpec& spec) {
  double B = 0.0;
  const LogPolyPiece branch = adams_log_branch(spec, &B);
  const int N = spec.N;
  const double lk = spec.log_k;
  QuadraticCap cap;
  cap.rho_c = branch.rho0;
  cap.c0 = std::pow(lk / beta_adams(N, 2), 1.0 - 2.0 / N) + std::pow(lk, -2.0 / N);
  cap.a = std::exp(2.0 / N * (lk - std::log(lk)));  // 1 / ((ln k)/k)^{2/N}
  return ParametricProfile(N, "adams-quadratic", cap, {branch});
}

ParametricProfile adams_quadratic_c1_profile(const AdamsQuadraticSpec& spec) {
  double B = 0.0;
  LogPolyPiece branch = adams_log_branch(spec, &B);
  // -2 a R = -B / R at R = e^{rho_c}.
  QuadraticCap cap;
  cap.rho_c = branch.rho0;
  cap.a = 0.5 * B * std::exp(-2.0 * cap.rho_c);
  cap.c0 = branch.c[0] + 0.5 * B;
  // Close the log branch on [-tau, 0] with the cubic Hermite piece reaching
  // value 0 and slope 0 at r = 1.
  const double tau = std::min(1.0, spec.log_k / (2.0 * spec.N));
  branch.rho1 = -tau;
  // u(s) = B tau - B s + c2 s^2 + c3 s^3 on s in [0, tau].
  const LogPolyPiece closing{-tau, 0.0, {B * tau, -B, -B / tau, B / (tau * tau)}};
  return ParametricProfile(spec.N, "adams-quadratic-c1", cap, {branch, closing});
}

LowerBound at_lower_bound(double alpha, double beta, int N, const QuadratureOptions& q) {
  const double aN = alpha_moser(N);
  if (!(alpha >= 0.5 * aN) || !(alpha < aN)) {
    throw DomainError("at_lower_bound: alpha must lie in [alpha_N/2, alpha_N)");
  }
  LowerBound lb;
  lb.index = 1.5 / (1.0 - alpha / aN);
  const auto u = moser_profile({lb.index, N, beta});
  lb.log_bound = log_at_objective(u, alpha, beta, q);
  lb.bound = std::exp(lb.log_bound);
  return lb;
}

LowerBound ata_lower_bound(double alpha, double beta, int N, const QuadratureOptions& q) {
  check_adams_dim(N, "ata_lower_bound");
  const double b2 = beta_adams(N, 2);
  if (!(alpha >= 0.5 * b2) || !(alpha < b2)) {
    throw DomainError("ata_lower_bound: alpha must lie in [beta(N,2)/2, beta(N,2))");
  }
  LowerBound lb;
  lb.index = 1.0 / (1.0 - alpha / b2);
  const auto u = adams_quadratic_c1_profile({lb.index, N});
  const auto v = u.scaled(1.0 / laplacian_norm(u, 0.5 * N, q));
  lb.log_bound = log_ata_objective(v, alpha, beta, q);
  lb.bound = std::exp(lb.log_bound);
  return lb;
}

}  // namespace sharplab
