#pragma once

// Dilation and amplitude transforms relating the critical and subcritical
// problems. Each returns the new profile together with a report of the norms
// and functional values on both sides.

#include <string>

#include "sharplab/radial_core.hpp"

namespace sharplab {

/// Full-norm constraint ||D u||^a + ||u||^b <= 1.
struct NormBudget {
  double a = 2.0;
  double b = 2.0;

  void validate() const;
  double value(double seminorm, double norm) const;
};

struct NormPair {
  double seminorm = 0.0;   // ||grad u||_N or ||Delta u||_{N/2}
  double lebesgue = 0.0;   // ||u||_N or ||u||_{N/2}
};

struct TransformReport {
  double lambda = 1.0;
  double theta = 1.0;
  NormPair norms_in;
  NormPair norms_out;
  double objective_in = 0.0;
  double objective_out = 0.0;
  std::string branch = "identity";
};

/// Flat JSON object with keys lambda, theta, norms_in, norms_out,
/// objective_in, objective_out, branch.
std::string to_json(const TransformReport& r);

struct TmTransform {
  RadialProfile v;
  TransformReport report;
};

struct AdamsTransform {
  ParametricProfile v;
  TransformReport report;
};

/// v(x) = u(lambda x), lambda = ||u||_N. Objectives are at_objective at (alpha, beta).
TmTransform normalize_tm(const RadialProfile& u, double alpha, double beta = 0.0);

/// v = q^{(N-1)/N} u(lambda x) with q = alpha/alpha_N and
/// lambda = (q^{(N-1)b/N} / (1 - q^{(N-1)a/N}))^{1/b}.
/// objective_in is the functional of u at alpha, objective_out the functional
/// of v at alpha_N; they satisfy in = lambda^{N-beta} out.
TmTransform subcritical_from_critical_tm(const RadialProfile& u, double alpha, const NormBudget& budget,
                                         double beta = 0.0);

/// theta = ||grad u||_N. For theta > 1/2: v = u(lambda x)/theta with
/// lambda = (1 - theta^a)^{1/b}/theta, objective_out taken at strength
/// theta^{N/(N-1)} alpha_N, and in = lambda^{N-beta} out.
/// For theta <= 1/2: v = 2 u(2x), strength alpha_N / 2^{N/(N-1)}, and
/// in = 2^{N-beta} out. objective_in is the critical functional of u.
TmTransform critical_to_seminorm_tm(const RadialProfile& u, const NormBudget& budget, double beta = 0.0);

/// v(x) = u(lambda x), lambda = ||u||_{N/2}^{1/2}. Objectives are ata_objective.
AdamsTransform normalize_adams(const ParametricProfile& u, double alpha, double beta = 0.0);

/// v = q^{(N-2)/N} u(lambda x), q = alpha/beta(N,2),
/// lambda = (q^{(N-2)b/N} / (1 - q^{(N-2)a/N}))^{1/(2b)}; in = lambda^{N-beta} out.
AdamsTransform subcritical_from_critical_adams(const ParametricProfile& u, double alpha, const NormBudget& budget,
                                               double beta = 0.0);

/// theta = ||Delta u||_{N/2}. For theta > 1/4: v = u(lambda x)/theta,
/// lambda = (1 - theta^a)^{1/(2b)}/theta^{1/2}, strength theta^{N/(N-2)} beta(N,2).
/// For theta <= 1/4: v = 4 u(2x), strength beta(N,2)/4^{N/(N-2)}, in = 2^{N-beta} out.
AdamsTransform critical_to_seminorm_adams(const ParametricProfile& u, const NormBudget& budget,
                                          double beta = 0.0);

/// Exponent bookkeeping for (-Delta)^{gamma/2} on W^{gamma, N/gamma}, done on
/// the symbols sigma = ||(-Delta)^{gamma/2} u||_p = theta and mu = ||u||_p
/// (mu < 0 selects the largest admissible value (1 - theta^a)^{1/b}).
/// objective_in is 1 and objective_out the factor c with
/// F(u) = c F_shifted(v), where F_shifted uses strength theta^{p/(p-1)}
/// (upper branch) or 2^{-gamma p/(p-1)} (lower branch) times the critical one.
/// Throws NumericalError if the transformed symbols leave the unit ball.
TransformReport fractional_scaling_check(double gamma, int N, const NormBudget& budget, double theta,
                                         double beta = 0.0, double mu = -1.0);

/// Largest of |u|^{N/(N-1)} - ((alpha_N/alpha) |u - s|^{N/(N-1)} + 1) over
/// `samples` points of {u > s}, s = (1 - (alpha/alpha_N)^{N-1})^{1/N}.
/// Returns -inf when the level set is empty.
double young_split_excess_tm(const RadialProfile& u, double alpha, int samples = 10000);
/// Same with exponent N/(N-2), s = (1 - (alpha/beta(N,2))^{(N-2)/2})^{2/N}.
double young_split_excess_adams(const ParametricProfile& u, double alpha, int samples = 10000);

}  // namespace sharplab
