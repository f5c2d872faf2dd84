#pragma once

// Lower-bound searches for the four suprema AT, MT_{a,b}, ATA and A_{a,b},
// the sweep that compares the critical supremum with the weighted subcritical
// ones, and log-log rate fits.
//
// Every finite estimate is the objective of a stored feasible profile and can
// be re-evaluated. Divergent runs are the exception: their value is a closed
// form lower bound along an explicit concentrating sequence whose elements are
// too concentrated to store as doubles.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sharplab/radial_core.hpp"
#include "sharplab/scaling_identities.hpp"

namespace sharplab {

enum class SearchFamily { GridFreeNodes, MoserFamily, AdamsFamily };

std::string to_string(SearchFamily f);
SearchFamily search_family_from_string(const std::string& s);

struct SearchConfig {
  SearchFamily family = SearchFamily::GridFreeNodes;
  long budget = 400;              // objective evaluations
  std::uint64_t seed = 1;
  double step0 = 0.1;             // first trial step, relative to max |x|
  double step_factor = 0.5;
  double step_min = 1e-8;
  double fd_step = 1e-6;          // central differences, relative
  int grid_size = 16;             // M, nodes of a grid-free-nodes profile
  int restarts = 2;               // random perturbations after a stall
  double restart_scale = 0.05;
  double ceiling = 1e12;          // divergence threshold
  double tolerance = 1e-3;        // relative; used by the one-sided identity check

  /// Throws DomainError on budget < 0, M < 8 or nonpositive step parameters.
  void validate() const;
};

struct SupremumEstimate {
  double value = 0.0;
  double log_value = 0.0;
  std::optional<RadialProfile> profile;          // first-order argmax
  std::optional<ParametricProfile> adams_profile; // second-order argmax
  std::vector<double> parameters;   // family parameters of the argmax (theta last for critical runs)
  long evaluations = 0;
  std::vector<double> trace;        // best log value after each accepted step
  bool diverged = false;
  std::string note;
};

/// Node layout of the free-node family seeded by the Moser profile of index
/// n: a quarter of the nodes on [1.5 rho0, rho0), the rest on [rho0, 0] with
/// rho0 = -n/(N - beta). The seed is reproduced exactly.
RadialGrid seed_grid(double n, int N, double beta, int M);

/// AT(alpha, beta) over grid profiles with ||grad u||_N <= 1. Seeded with the
/// Moser profile of index 3/(2(1 - alpha/alpha_N)), or with warm_start.
SupremumEstimate estimate_at(double alpha, double beta, int N, const SearchConfig& cfg,
                             const RadialProfile* warm_start = nullptr);

/// Critical value of v = c w(x/mu) with ||grad v||_N = theta on the boundary
/// ||grad v||^a + ||v||^b = 1; this is f(alpha) AT-objective(w) at
/// alpha = theta^{N/(N-1)} alpha_N.
double log_mt_value(const RadialProfile& w, double theta, const NormBudget& budget, double beta);
RadialProfile mt_profile(const RadialProfile& w, double theta, const NormBudget& budget);

/// Smallest-change feasible point: u itself when ||grad u||^a + ||u||^b <= 1,
/// otherwise c u with c in (0,1) found by bisection so the constraint holds
/// with equality.
RadialProfile project_to_budget(const RadialProfile& u, const NormBudget& budget);
ParametricProfile project_to_budget(const ParametricProfile& u, const NormBudget& budget);

/// MT_{a,b}(beta). Runs the explicit concentrating sequence first and flags
/// divergence once it passes cfg.ceiling; otherwise ascends over (nodes, theta).
SupremumEstimate estimate_mt(const NormBudget& budget, double beta, int N, const SearchConfig& cfg);

/// ATA(alpha, beta) over the C^1 quadratic-cap family (parameter log k) and
/// the psi_r family (parameters log 1/r and eps), N >= 3.
SupremumEstimate estimate_ata(double alpha, double beta, int N, const SearchConfig& cfg);

/// Critical value of c w(x/mu) with ||Delta v||_{N/2} = theta on the boundary.
double log_a_value(const ParametricProfile& w, double theta, const NormBudget& budget, double beta);
ParametricProfile a_profile(const ParametricProfile& w, double theta, const NormBudget& budget);

/// A_{a,b}(beta) over the same families plus theta, N >= 3.
SupremumEstimate estimate_a(const NormBudget& budget, double beta, int N, const SearchConfig& cfg);

/// f(alpha) = ((1 - q^{(N-1)a/N}) / q^{(N-1)b/N})^{(N-beta)/b}, q = alpha/alpha_N.
double tm_identity_factor(double alpha, const NormBudget& budget, double beta, int N);
/// ((1 - q^{(N-2)a/N}) / q^{(N-2)b/N})^{(N-beta)/(2b)}, q = alpha/beta(N,2).
double adams_identity_factor(double alpha, const NormBudget& budget, double beta, int N);

/// Closed-form lower bound for the critical functional of the image of a
/// concentrating profile under the subcritical-to-critical transform at
/// q = 1 - delta: the core ball of the normalized Moser profile of index
/// 1/delta (first order), or of the C^1 quadratic cap with log k = 1/delta and
/// eps = 1/2 (second order). All cancellations are resolved analytically, so
/// delta may go far below machine epsilon.
struct ProbePoint {
  double delta = 0.0;
  double index = 0.0;        // n, or log k
  double log_factor = 0.0;   // log f(alpha)
  double log_norm = 0.0;     // log of ||u||_N^N, or ||u||_{N/2}^{N/2}, of the unnormalized profile
  double log_core = 0.0;     // log of the core-ball part of the subcritical functional
  double log_value = 0.0;    // the lower bound
};
ProbePoint divergence_probe_tm(const NormBudget& budget, double beta, int N, double delta);
ProbePoint divergence_probe_adams(const NormBudget& budget, double beta, int N, double delta);

/// delta = 10^{-k/2}, k = 1, 2, ... until the bound passes the ceiling or
/// max_points are used.
struct ProbeRun {
  std::vector<ProbePoint> points;
  bool diverged = false;
};
ProbeRun run_probe_tm(const NormBudget& budget, double beta, int N, double ceiling, int max_points = 60);
ProbeRun run_probe_adams(const NormBudget& budget, double beta, int N, double ceiling, int max_points = 60);

struct SweepRecord {
  double alpha = 0.0;
  double alpha_ratio = 0.0;
  double estimate = 0.0;
  double factor = 0.0;
  double product = 0.0;
  double gap_x = 0.0;    // 1 - q^{N-1} (first order) or 1 - q^{(N-2)/2}
};

struct IdentitySweep {
  std::vector<SweepRecord> records;
  double sup_product = 0.0;
  double mt_estimate = 0.0;
  double gap = 0.0;
  double max_violation = 0.0;   // max over points of product - critical estimate, relative to the latter
  bool one_sided_ok = true;
  SupremumEstimate critical;
};

/// Point i of the grid uses seed (cfg.seed, i); the critical search gets the
/// summed budget of the sweep.
IdentitySweep identity_sweep_tm(const NormBudget& budget, double beta, int N, const std::vector<double>& alpha_grid,
                                const SearchConfig& cfg);
IdentitySweep identity_sweep_adams(const NormBudget& budget, double beta, int N,
                                   const std::vector<double>& alpha_grid, const SearchConfig& cfg);

/// Sweep of estimate_at over an increasing grid, each point warm-started from
/// the previous argmax when warm is set.
std::vector<SupremumEstimate> sweep_at(double beta, int N, const std::vector<double>& alpha_grid,
                                       const SearchConfig& cfg, bool warm = true);

/// Deterministic per-point seed.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};
/// Least squares of log y on log x; at least 4 points, all positive.
RateFit rate_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace sharplab
