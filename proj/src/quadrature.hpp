#pragma once

// Log-domain Gauss-Legendre quadrature of exp(G(rho)) over unions of
// intervals, bisecting where G varies too much for a single rule.

#include <functional>
#include <span>
#include <vector>

#include "sharplab/radial_core.hpp"

namespace sharplab::quad {

struct GaussRule {
  std::vector<double> x;      // nodes on [-1, 1]
  std::vector<double> log_w;  // log weights
};

const GaussRule& gauss_rule(int n);

/// Fills out[i] = G(rho[i]).
using LogIntegrand = std::function<void(std::span<const double> rho, std::span<double> out)>;

struct Interval {
  double a;
  double b;
};

/// log int exp(G) over the given disjoint intervals; -inf when empty.
double log_integrate(const LogIntegrand& G, std::span<const Interval> intervals, const QuadratureOptions& q);

/// Real roots of c0 + c1 s + c2 s^2 + c3 s^3 = 0 in the open interval (0, h), sorted.
std::vector<double> cubic_roots_in(const double* c, double h);

/// log(exp(a) + exp(b)).
double log_add(double a, double b);

}  // namespace sharplab::quad
