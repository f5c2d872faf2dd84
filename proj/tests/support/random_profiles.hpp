#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "sharplab/radial_core.hpp"

namespace sharplab::fixtures {

/// Decreasing grid profile with `segments` log-linear pieces ending at r = 1,
/// rescaled so that ||grad u||_N = grad_target.
inline RadialProfile random_grid_profile(int N, std::mt19937_64& rng, int segments = 5, double grad_target = 1.0) {
  std::uniform_real_distribution<double> width(0.2, 2.0), drop(0.1, 1.0);
  std::vector<double> rho(segments + 1), val(segments + 1);
  rho[segments] = 0.0;
  for (int i = segments - 1; i >= 0; --i) rho[i] = rho[i + 1] - width(rng);
  val[segments] = 0.0;
  for (int i = segments - 1; i >= 0; --i) val[i] = val[i + 1] + drop(rng);
  RadialProfile u(N, RadialGrid(rho), val);
  double sum = 0.0;
  for (int i = 0; i < segments; ++i) sum += std::pow(std::abs(u.slope(i)), N) * (rho[i + 1] - rho[i]);
  const double omega = 2.0 * std::pow(M_PI, 0.5 * N) / std::tgamma(0.5 * N);
  const double g = std::pow(omega * sum, 1.0 / N);
  return u.scaled(grad_target / g);
}

/// C^1 profile: quadratic cap, then cubic Hermite pieces in rho through random
/// decreasing values and negative slopes, with value and slope 0 at r = 1.
inline ParametricProfile random_c1_profile(int N, std::mt19937_64& rng, int segments = 4) {
  std::uniform_real_distribution<double> width(0.3, 1.5), drop(0.1, 1.0), slope(0.2, 1.5);
  std::vector<double> rho(segments + 1), val(segments + 1), d(segments + 1);
  rho[segments] = 0.0;
  val[segments] = 0.0;
  d[segments] = 0.0;
  for (int i = segments - 1; i >= 0; --i) {
    rho[i] = rho[i + 1] - width(rng);
    val[i] = val[i + 1] + drop(rng);
    d[i] = -slope(rng);
  }
  std::vector<LogPolyPiece> pieces;
  for (int i = 0; i < segments; ++i) {
    const double h = rho[i + 1] - rho[i];
    const double dv = val[i + 1] - val[i];
    LogPolyPiece p;
    p.rho0 = rho[i];
    p.rho1 = rho[i + 1];
    p.c[0] = val[i];
    p.c[1] = d[i];
    p.c[2] = (3.0 * dv / h - 2.0 * d[i] - d[i + 1]) / h;
    p.c[3] = (d[i] + d[i + 1] - 2.0 * dv / h) / (h * h);
    pieces.push_back(p);
  }
  QuadraticCap cap;
  cap.rho_c = rho[0];
  cap.a = -d[0] / (2.0 * std::exp(2.0 * rho[0]));
  cap.c0 = val[0] + cap.a * std::exp(2.0 * rho[0]);
  return ParametricProfile(N, "random-c1", cap, std::move(pieces));
}

}  // namespace sharplab::fixtures
