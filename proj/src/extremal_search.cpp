#include "sharplab/extremal_search.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>

#include "quadrature.hpp"
#include "sharplab/errors.hpp"
#include "sharplab/special_constants.hpp"
#include "sharplab/test_sequences.hpp"

namespace sharplab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Ratios q = alpha/critical scanned when picking the starting theta.
constexpr double kThetaScan[] = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99};
// Ratios q whose Moser shapes start the first-order critical search.
constexpr double kCriticalSeeds[] = {0.2, 0.5, 0.7, 0.8, 0.9, 0.95};
// Smallest log k for which the quadratic-cap pieces are ordered (k >= 3).
constexpr double kMinLogK = 1.1;

using Objective = std::function<double(const std::vector<double>&)>;

struct AscentResult {
  std::vector<double> x;
  double f = kNegInf;
  long evaluations = 0;
  std::vector<double> trace;
};

double guarded(const Objective& F, const std::vector<double>& x) {
  try {
    const double v = F(x);
    return std::isnan(v) ? kNegInf : v;
  } catch (const DomainError&) {
    return kNegInf;
  } catch (const NumericalError&) {
    return kNegInf;
  }
}

// Central-difference gradient; one-sided where a neighbour is infeasible.
std::vector<double> fd_gradient(const Objective& F, const std::vector<double>& x, double f,
                                const std::vector<double>& scale, double fd_step, long& evals) {
  std::vector<double> g(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = fd_step * std::max(std::abs(x[i]), scale[i]);
    std::vector<double> xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    const double fp = guarded(F, xp);
    const double fm = guarded(F, xm);
    evals += 2;
    if (fp == kNegInf && fm == kNegInf) continue;
    if (fp == kNegInf) {
      g[i] = (f - fm) / h;
    } else if (fm == kNegInf) {
      g[i] = (fp - f) / h;
    } else {
      g[i] = (fp - fm) / (2.0 * h);
    }
  }
  return g;
}

// Quasi-Newton (BFGS) ascent on finite-difference gradients with geometric
// backtracking. H starts as the scaled identity whose step moves the steepest
// coordinate by step0 * scale; trial multipliers then run 1, f, f^2, ... down
// to step_min / step0. f0 is F(x0), already paid for by the caller.
AscentResult ascend(const Objective& F, std::vector<double> x0, double f0, const std::vector<double>& scale,
                    const SearchConfig& cfg, long budget, std::mt19937_64& rng) {
  AscentResult best{x0, f0, 0, {f0}};
  std::vector<double> x = std::move(x0);
  double f = f0;
  const std::size_t dim = x.size();
  int restarts = cfg.restarts;
  long& evals = best.evaluations;
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double t_min = cfg.step_min / cfg.step0;
  std::vector<double> H;
  std::vector<double> g;
  auto reset_h = [&]() {
    double gmax = 0.0;
    for (std::size_t i = 0; i < dim; ++i) gmax = std::max(gmax, std::abs(g[i]) * scale[i]);
    H.assign(dim * dim, 0.0);
    if (gmax == 0.0) return;
    for (std::size_t i = 0; i < dim; ++i) H[i * dim + i] = cfg.step0 * scale[i] * scale[i] / gmax;
  };
  bool have_grad = false;
  while (true) {
    if (!have_grad) {
      if (evals + static_cast<long>(2 * dim) + 1 > budget) break;
      g = fd_gradient(F, x, f, scale, cfg.fd_step, evals);
      reset_h();
      have_grad = true;
    }
    std::vector<double> d(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) d[i] += H[i * dim + j] * g[j];
    }
    bool improved = false;
    std::vector<double> y;
    double fy = kNegInf;
    for (double t = 1.0; t >= t_min && evals < budget; t *= cfg.step_factor) {
      y = x;
      for (std::size_t i = 0; i < dim; ++i) y[i] += t * d[i];
      fy = guarded(F, y);
      ++evals;
      if (fy > f) {
        improved = true;
        break;
      }
    }
    if (improved) {
      if (evals + static_cast<long>(2 * dim) > budget) {
        x = y;
        f = fy;
        if (f > best.f) {
          best.f = f;
          best.x = x;
        }
        best.trace.push_back(best.f);
        break;
      }
      const std::vector<double> gy = fd_gradient(F, y, fy, scale, cfg.fd_step, evals);
      // BFGS on -f: s = y - x, r = g(x) - g(y).
      std::vector<double> sv(dim), r(dim), Hr(dim, 0.0);
      double sr = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        sv[i] = y[i] - x[i];
        r[i] = g[i] - gy[i];
        sr += sv[i] * r[i];
      }
      x = std::move(y);
      f = fy;
      g = gy;
      if (sr > 0.0) {
        for (std::size_t i = 0; i < dim; ++i) {
          for (std::size_t j = 0; j < dim; ++j) Hr[i] += H[i * dim + j] * r[j];
        }
        double rHr = 0.0;
        for (std::size_t i = 0; i < dim; ++i) rHr += r[i] * Hr[i];
        const double k = (sr + rHr) / (sr * sr);
        for (std::size_t i = 0; i < dim; ++i) {
          for (std::size_t j = 0; j < dim; ++j) {
            H[i * dim + j] += k * sv[i] * sv[j] - (Hr[i] * sv[j] + sv[i] * Hr[j]) / sr;
          }
        }
      } else {
        reset_h();
      }
      if (f > best.f) {
        best.f = f;
        best.x = x;
      }
      best.trace.push_back(best.f);
      continue;
    }
    if (restarts <= 0 || evals >= budget) break;
    --restarts;
    x = best.x;
    for (std::size_t i = 0; i < dim; ++i) x[i] += cfg.restart_scale * scale[i] * gauss(rng);
    f = guarded(F, x);
    ++evals;
    have_grad = false;
  }
  return best;
}

double q_of(double alpha, double critical, const char* what) {
  const double q = alpha / critical;
  if (!(q > 0.0) || !(q < 1.0)) throw DomainError(std::string(what) + ": alpha must lie strictly inside (0, critical)");
  return q;
}

void check_beta(double beta, int N, const char* what) {
  if (!(beta >= 0.0) || !(beta < N)) throw DomainError(std::string(what) + ": beta must satisfy 0 <= beta < N");
}

double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

// log((1 - q^e1) / q^e2) from log q, accurate when q is within rounding of 1.
double log_gap_ratio(double log_q, double e1, double e2) {
  return std::log(-std::expm1(e1 * log_q)) - e2 * log_q;
}

// log phi(x) - x.
double phi_correction(int start, double x) {
  if (x >= 700.0) return 0.0;
  return log_phi_from_log(start, std::log(x)) - x;
}

// ---- first-order free-node family -------------------------------------------

struct NodeFamily {
  int N;
  RadialGrid grid;

  RadialProfile profile(const std::vector<double>& x) const {
    std::vector<double> v(x.begin(), x.begin() + static_cast<long>(grid.size()) - 1);
    v.push_back(0.0);
    return RadialProfile(N, grid, std::move(v));
  }
};

// Retraction onto ||grad u||_N = 1. The objective does not decrease under
// u -> c u for c >= 1, so nothing is lost against division by max(1, .), and
// finite differences see a smooth function.
RadialProfile project_unit_gradient(const RadialProfile& u) {
  const double g = gradient_norm_N(u);
  if (!(g > 0.0)) throw DomainError("estimate_at: profile vanishes");
  return u.scaled(1.0 / g);
}

std::vector<double> node_values(const RadialProfile& seed, const RadialGrid& grid) {
  std::vector<double> x;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) x.push_back(seed.value(std::exp(grid.rho()[i])));
  return x;
}

double max_abs(const std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

// ---- second-order parametric families ---------------------------------------

enum class AdamsFam { QuadraticC1, Psi };

ParametricProfile adams_member(AdamsFam fam, int N, const std::vector<double>& x) {
  if (fam == AdamsFam::QuadraticC1) return adams_quadratic_c1_profile({kMinLogK + std::exp(x[0]), N});
  const double L = std::exp(x[0]);
  return adams_psi_profile({std::exp(-L), 0.5 * logistic(x[1]), N});
}

std::vector<double> adams_seed_params(AdamsFam fam, double log_k) {
  if (fam == AdamsFam::QuadraticC1) return {std::log(std::max(log_k - kMinLogK, 1e-3))};
  return {std::log(log_k), logit(0.2)};
}

std::vector<double> adams_family_params(AdamsFam fam, const std::vector<double>& x) {
  if (fam == AdamsFam::QuadraticC1) return {kMinLogK + std::exp(x[0])};
  return {std::exp(x[0]), 0.5 * logistic(x[1])};
}

ParametricProfile unit_laplacian(const ParametricProfile& u) {
  return u.scaled(1.0 / laplacian_norm(u, 0.5 * u.dimension()));
}

void check_adams(int N, const char* what) {
  if (N < 3) throw DomainError(std::string(what) + ": the second-order problem needs N >= 3");
}

}  // namespace

std::string to_string(SearchFamily f) {
  switch (f) {
    case SearchFamily::GridFreeNodes:
      return "grid-free-nodes";
    case SearchFamily::MoserFamily:
      return "moser-family";
    case SearchFamily::AdamsFamily:
      return "adams-family";
  }
  return "?";
}

SearchFamily search_family_from_string(const std::string& s) {
  if (s == "grid-free-nodes") return SearchFamily::GridFreeNodes;
  if (s == "moser-family") return SearchFamily::MoserFamily;
  if (s == "adams-family") return SearchFamily::AdamsFamily;
  throw DomainError("unknown search family '" + s + "'");
}

void SearchConfig::validate() const {
  if (budget < 0) throw DomainError("SearchConfig: budget must be >= 0");
  if (grid_size < 8) throw DomainError("SearchConfig: grid size M must be >= 8");
  if (!(step0 > 0.0) || !(step_min > 0.0) || !(step_factor > 0.0) || !(step_factor < 1.0) || !(fd_step > 0.0)) {
    throw DomainError("SearchConfig: step parameters must be positive with factor in (0,1)");
  }
  if (restarts < 0 || !(restart_scale >= 0.0)) throw DomainError("SearchConfig: restarts must be >= 0");
  if (!(ceiling > 0.0) || !(tolerance >= 0.0)) throw DomainError("SearchConfig: ceiling and tolerance must be positive");
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

RadialGrid seed_grid(double n, int N, double beta, int M) {
  if (M < 8) throw DomainError("seed_grid: M must be >= 8");
  const double rho0 = -n / (N - beta);
  const int core = M / 4;
  std::vector<double> rho;
  for (int i = 0; i < core; ++i) rho.push_back(1.5 * rho0 - 0.5 * rho0 * i / core);
  const int band = M - core;
  for (int i = 0; i < band; ++i) rho.push_back(rho0 - rho0 * i / (band - 1));
  rho.back() = 0.0;
  return RadialGrid(rho);
}

// ---- AT ---------------------------------------------------------------------

SupremumEstimate estimate_at(double alpha, double beta, int N, const SearchConfig& cfg,
                             const RadialProfile* warm_start) {
  cfg.validate();
  check_beta(beta, N, "estimate_at");
  const double q = q_of(alpha, alpha_moser(N), "estimate_at");
  std::optional<NodeFamily> fam;
  std::vector<double> x;
  if (warm_start) {
    if (warm_start->dimension() != N) throw DomainError("estimate_at: warm start has the wrong dimension");
    fam = NodeFamily{N, warm_start->grid()};
    x.assign(warm_start->values().begin(), warm_start->values().end() - 1);
  } else {
    const double n = 1.5 / (1.0 - q);
    fam = NodeFamily{N, seed_grid(n, N, beta, cfg.grid_size)};
    x = node_values(moser_profile({n, N, beta}), fam->grid);
  }
  const Objective F = [&](const std::vector<double>& y) {
    return log_at_objective(project_unit_gradient(fam->profile(y)), alpha, beta);
  };
  const double f0 = F(x);
  std::vector<double> scale(x.size(), max_abs(x));
  std::mt19937_64 rng(cfg.seed);
  const AscentResult r = ascend(F, x, f0, scale, cfg, cfg.budget, rng);
  SupremumEstimate e;
  const RadialProfile u = project_unit_gradient(fam->profile(r.x));
  e.profile = u.dilated(lebesgue_norm(u, N));
  e.log_value = log_at_objective(*e.profile, alpha, beta);
  e.value = std::exp(e.log_value);
  e.parameters = e.profile->values();
  e.evaluations = r.evaluations;
  e.trace = r.trace;
  e.diverged = e.value > cfg.ceiling;
  return e;
}

std::vector<SupremumEstimate> sweep_at(double beta, int N, const std::vector<double>& alpha_grid,
                                       const SearchConfig& cfg, bool warm) {
  std::vector<SupremumEstimate> out;
  for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
    if (i > 0 && !(alpha_grid[i] >= alpha_grid[i - 1])) throw DomainError("sweep_at: alpha grid must be increasing");
    SearchConfig c = cfg;
    c.seed = stream_seed(cfg.seed, i);
    const RadialProfile* ws = (warm && i > 0) ? &*out.back().profile : nullptr;
    out.push_back(estimate_at(alpha_grid[i], beta, N, c, ws));
  }
  return out;
}

// ---- MT ---------------------------------------------------------------------

double tm_identity_factor(double alpha, const NormBudget& budget, double beta, int N) {
  budget.validate();
  check_beta(beta, N, "tm_identity_factor");
  const double q = q_of(alpha, alpha_moser(N), "tm_identity_factor");
  const double e = (N - 1.0) / N;
  return std::exp((N - beta) / budget.b * log_gap_ratio(std::log(q), e * budget.a, e * budget.b));
}

double adams_identity_factor(double alpha, const NormBudget& budget, double beta, int N) {
  budget.validate();
  check_adams(N, "adams_identity_factor");
  check_beta(beta, N, "adams_identity_factor");
  const double q = q_of(alpha, beta_adams(N, 2), "adams_identity_factor");
  const double e = (N - 2.0) / N;
  return std::exp((N - beta) / (2.0 * budget.b) * log_gap_ratio(std::log(q), e * budget.a, e * budget.b));
}

namespace {

struct BoundaryMap {
  double c;    // amplitude
  double mu;   // dilation, v = c w(x/mu)
};

// Amplitude and dilation putting c w(x/mu) on ||D v||^a + ||v||^b = 1 with
// ||D v|| = theta; `power` is 1 for the first-order problem (||v|| = c mu n)
// and 2 for the second-order one (||v|| = c mu^2 n).
BoundaryMap boundary_map(double seminorm, double norm, double theta, const NormBudget& budget, int power) {
  if (!(seminorm > 0.0) || !(norm > 0.0)) throw DomainError("critical search: profile must not vanish");
  if (!(theta > 0.0) || !(theta < 1.0)) throw DomainError("critical search: theta must lie in (0,1)");
  const double c = theta / seminorm;
  const double m = std::pow(-std::expm1(budget.a * std::log(theta)), 1.0 / budget.b) / (c * norm);
  return {c, power == 1 ? m : std::sqrt(m)};
}

}  // namespace

double log_mt_value(const RadialProfile& w, double theta, const NormBudget& budget, double beta) {
  budget.validate();
  const int N = w.dimension();
  const BoundaryMap m = boundary_map(gradient_norm_N(w), lebesgue_norm(w, N), theta, budget, 1);
  const double l = log_tm_functional(w.scaled(m.c), FunctionalParams{N, beta, alpha_moser(N), Order::First});
  return (N - beta) * std::log(m.mu) + l;
}

RadialProfile mt_profile(const RadialProfile& w, double theta, const NormBudget& budget) {
  const BoundaryMap m = boundary_map(gradient_norm_N(w), lebesgue_norm(w, w.dimension()), theta, budget, 1);
  return w.scaled(m.c).dilated(1.0 / m.mu);
}

double log_a_value(const ParametricProfile& w, double theta, const NormBudget& budget, double beta) {
  budget.validate();
  const int N = w.dimension();
  check_adams(N, "log_a_value");
  const double p = 0.5 * N;
  const BoundaryMap m = boundary_map(laplacian_norm(w, p), lebesgue_norm(w, p), theta, budget, 2);
  const double l =
      log_adams_functional(w.scaled(m.c), FunctionalParams{N, beta, beta_adams(N, 2), Order::Second});
  return (N - beta) * std::log(m.mu) + l;
}

ParametricProfile a_profile(const ParametricProfile& w, double theta, const NormBudget& budget) {
  const double p = 0.5 * w.dimension();
  const BoundaryMap m = boundary_map(laplacian_norm(w, p), lebesgue_norm(w, p), theta, budget, 2);
  return w.scaled(m.c).dilated(1.0 / m.mu);
}

namespace {

template <class Profile, class Seminorm>
Profile project_generic(const Profile& u, const NormBudget& budget, Seminorm seminorm, double p) {
  budget.validate();
  const double s = seminorm(u);
  const double n = lebesgue_norm(u, p);
  auto g = [&](double c) { return budget.value(c * s, c * n); };
  if (g(1.0) <= 1.0) return u;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) <= 1.0 ? lo : hi) = mid;
  }
  return u.scaled(lo);
}

}  // namespace

RadialProfile project_to_budget(const RadialProfile& u, const NormBudget& budget) {
  return project_generic(u, budget, [](const RadialProfile& v) { return gradient_norm_N(v); }, u.dimension());
}

ParametricProfile project_to_budget(const ParametricProfile& u, const NormBudget& budget) {
  const double p = 0.5 * u.dimension();
  return project_generic(u, budget, [p](const ParametricProfile& v) { return laplacian_norm(v, p); }, p);
}

namespace {

void fill_probe_note(SupremumEstimate& e, const ProbeRun& run, const char* what) {
  const ProbePoint& last = run.points.back();
  e.diverged = true;
  e.log_value = last.log_value;
  e.value = std::exp(last.log_value);
  e.parameters = {last.delta, last.index};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", last.delta);
  e.note = std::string(what) + " passes the ceiling at delta = " + buf;
}

}  // namespace

SupremumEstimate estimate_mt(const NormBudget& budget, double beta, int N, const SearchConfig& cfg) {
  cfg.validate();
  budget.validate();
  check_beta(beta, N, "estimate_mt");
  SupremumEstimate e;
  const ProbeRun run = run_probe_tm(budget, beta, N, cfg.ceiling);
  e.evaluations = static_cast<long>(run.points.size());
  if (run.diverged) {
    fill_probe_note(e, run, "concentrating sequence");
    return e;
  }
  // Short runs from Moser shapes at several theta, then the best one continues.
  struct Start {
    NodeFamily fam;
    std::vector<double> x;
    double f;
  };
  std::vector<Start> starts;
  for (double q : kCriticalSeeds) {
    const double n = 1.5 / (1.0 - q);
    NodeFamily fam{N, seed_grid(n, N, beta, cfg.grid_size)};
    std::vector<double> x = node_values(moser_profile({n, N, beta}), fam.grid);
    x.push_back(logit(std::pow(q, (N - 1.0) / N)));
    starts.push_back({std::move(fam), std::move(x), kNegInf});
  }
  auto objective = [&](const NodeFamily& fam) -> Objective {
    return [&fam, &budget, beta](const std::vector<double>& y) {
      return log_mt_value(fam.profile(y), logistic(y.back()), budget, beta);
    };
  };
  auto scales = [](const std::vector<double>& x) {
    std::vector<double> sc(x.size(), max_abs(std::vector<double>(x.begin(), x.end() - 1)));
    sc.back() = 1.0;
    return sc;
  };
  std::mt19937_64 rng(cfg.seed);
  long remaining = std::max(0L, cfg.budget - e.evaluations);
  const long share = remaining / (2 * static_cast<long>(starts.size()));
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    auto& st = starts[i];
    const Objective F = objective(st.fam);
    const double f0 = F(st.x);
    const AscentResult r = ascend(F, st.x, f0, scales(st.x), cfg, share, rng);
    st.x = r.x;
    st.f = r.f;
    e.evaluations += r.evaluations;
    remaining -= r.evaluations;
    if (st.f > starts[best_i].f) best_i = i;
  }
  Start& bst = starts[best_i];
  const Objective F = objective(bst.fam);
  const AscentResult r = ascend(F, bst.x, bst.f, scales(bst.x), cfg, std::max(0L, remaining), rng);
  const NodeFamily& fam = bst.fam;
  const double theta = logistic(r.x.back());
  e.profile = mt_profile(fam.profile(r.x), theta, budget);
  e.log_value = log_tm_functional(*e.profile, FunctionalParams{N, beta, alpha_moser(N), Order::First});
  e.value = std::exp(e.log_value);
  e.parameters = e.profile->values();
  e.parameters.push_back(theta);
  e.evaluations += r.evaluations;
  e.trace = r.trace;
  e.diverged = e.value > cfg.ceiling;
  return e;
}

// ---- ATA and A --------------------------------------------------------------

SupremumEstimate estimate_ata(double alpha, double beta, int N, const SearchConfig& cfg) {
  cfg.validate();
  check_adams(N, "estimate_ata");
  check_beta(beta, N, "estimate_ata");
  const double q = q_of(alpha, beta_adams(N, 2), "estimate_ata");
  const double log_k = std::max(1.0 / (1.0 - q), kMinLogK + 1e-3);
  struct Best {
    AdamsFam fam;
    std::vector<double> x;
    double f;
  };
  std::optional<Best> best;
  SupremumEstimate e;
  std::mt19937_64 rng(cfg.seed);
  long used = 0;
  for (AdamsFam fam : {AdamsFam::QuadraticC1, AdamsFam::Psi}) {
    const Objective F = [&](const std::vector<double>& y) {
      return log_ata_objective(unit_laplacian(adams_member(fam, N, y)), alpha, beta);
    };
    const std::vector<double> x = adams_seed_params(fam, log_k);
    double f0;
    if (fam == AdamsFam::QuadraticC1) {
      f0 = F(x);
    } else {
      if (used >= cfg.budget) break;
      f0 = guarded(F, x);
      ++used;
    }
    const long share = fam == AdamsFam::QuadraticC1 ? cfg.budget / 2 : cfg.budget - used;
    const AscentResult r = ascend(F, x, f0, std::vector<double>(x.size(), 1.0), cfg, share, rng);
    used += r.evaluations;
    if (!best || r.f > best->f) best = Best{fam, r.x, r.f};
    e.trace.insert(e.trace.end(), r.trace.begin(), r.trace.end());
  }
  const ParametricProfile v = unit_laplacian(adams_member(best->fam, N, best->x));
  e.adams_profile = v.dilated(std::sqrt(lebesgue_norm(v, 0.5 * N)));
  e.log_value = log_ata_objective(*e.adams_profile, alpha, beta);
  e.value = std::exp(e.log_value);
  e.parameters = adams_family_params(best->fam, best->x);
  e.evaluations = used;
  e.note = best->fam == AdamsFam::QuadraticC1 ? "quadratic-cap family" : "psi family";
  e.diverged = e.value > cfg.ceiling;
  return e;
}

SupremumEstimate estimate_a(const NormBudget& budget, double beta, int N, const SearchConfig& cfg) {
  cfg.validate();
  budget.validate();
  check_adams(N, "estimate_a");
  check_beta(beta, N, "estimate_a");
  SupremumEstimate e;
  const ProbeRun run = run_probe_adams(budget, beta, N, cfg.ceiling);
  e.evaluations = static_cast<long>(run.points.size());
  if (run.diverged) {
    fill_probe_note(e, run, "concentrating sequence");
    return e;
  }
  double best0 = kNegInf, best_q = 0.5;
  for (double q : kThetaScan) {
    const double lk = std::max(1.0 / (1.0 - q), kMinLogK + 1e-3);
    const double v = log_a_value(adams_quadratic_c1_profile({lk, N}), std::pow(q, (N - 2.0) / N), budget, beta);
    if (v > best0) {
      best0 = v;
      best_q = q;
    }
  }
  const double log_k = std::max(1.0 / (1.0 - best_q), kMinLogK + 1e-3);
  const double t0 = logit(std::pow(best_q, (N - 2.0) / N));
  struct Best {
    AdamsFam fam;
    std::vector<double> x;
    double f;
  };
  std::optional<Best> best;
  std::mt19937_64 rng(cfg.seed);
  long used = e.evaluations;
  for (AdamsFam fam : {AdamsFam::QuadraticC1, AdamsFam::Psi}) {
    const Objective F = [&](const std::vector<double>& y) {
      std::vector<double> p(y.begin(), y.end() - 1);
      return log_a_value(adams_member(fam, N, p), logistic(y.back()), budget, beta);
    };
    std::vector<double> x = adams_seed_params(fam, log_k);
    x.push_back(t0);
    double f0;
    if (fam == AdamsFam::QuadraticC1) {
      f0 = F(x);
    } else {
      if (used >= cfg.budget) break;
      f0 = guarded(F, x);
      ++used;
    }
    const long share = fam == AdamsFam::QuadraticC1 ? std::max(0L, (cfg.budget - used) / 2) : cfg.budget - used;
    const AscentResult r = ascend(F, x, f0, std::vector<double>(x.size(), 1.0), cfg, std::max(0L, share), rng);
    used += r.evaluations;
    if (!best || r.f > best->f) best = Best{fam, r.x, r.f};
    e.trace.insert(e.trace.end(), r.trace.begin(), r.trace.end());
  }
  std::vector<double> p(best->x.begin(), best->x.end() - 1);
  const double theta = logistic(best->x.back());
  e.adams_profile = a_profile(adams_member(best->fam, N, p), theta, budget);
  e.log_value = log_adams_functional(*e.adams_profile, FunctionalParams{N, beta, beta_adams(N, 2), Order::Second});
  e.value = std::exp(e.log_value);
  e.parameters = adams_family_params(best->fam, p);
  e.parameters.push_back(theta);
  e.evaluations = used;
  e.note = best->fam == AdamsFam::QuadraticC1 ? "quadratic-cap family" : "psi family";
  e.diverged = e.value > cfg.ceiling;
  return e;
}

// ---- concentrating sequences -------------------------------------------------

ProbePoint divergence_probe_tm(const NormBudget& budget, double beta, int N, double delta) {
  budget.validate();
  check_beta(beta, N, "divergence_probe_tm");
  if (N < 2) throw DomainError("divergence_probe_tm: N must be >= 2");
  if (!(delta > 0.0) || !(delta < 0.5)) throw DomainError("divergence_probe_tm: delta must lie in (0, 1/2)");
  ProbePoint p;
  p.delta = delta;
  const double n = (1.0 - beta / N) / delta;
  p.index = n;
  const double log_q = std::log1p(-delta);
  const double e = (N - 1.0) / N;
  p.log_factor = (N - beta) / budget.b * log_gap_ratio(log_q, e * budget.a, e * budget.b);
  // ||u_n||_N^N = omega (h^N e^{-N T}/N + A^N gamma(N+1, N T)/N^{N+1}), T = n/(N-beta).
  const double omega = sphere_area(N);
  const double T = n / (N - beta);
  const double h = moser_plateau({n, N, beta});
  const double plateau = N * std::log(h) - N * T - std::log(static_cast<double>(N));
  const double x = N * T;
  double partial = 0.0, term = 1.0;
  for (int j = 0; j <= N; ++j) {
    if (j > 0) term *= x / j;
    partial += term;
  }
  const double lower_gamma = detail::log_factorial(N) + std::log1p(-std::exp(-x) * partial);
  const double band = std::log((N - beta) / (omega * n)) + lower_gamma - (N + 1.0) * std::log(static_cast<double>(N));
  p.log_norm = std::log(omega) + quad::log_add(plateau, band);
  // Core ball at q alpha_N: omega phi(q n) e^{-n} / (N - beta), and q n - n = -delta n.
  const int start = SeriesKind::tm(N).start_index();
  p.log_core = std::log(omega) - delta * n + phi_correction(start, (1.0 - delta) * n) - std::log(N - beta);
  p.log_value = p.log_factor + p.log_core - (N - beta) / N * p.log_norm;
  return p;
}

ProbePoint divergence_probe_adams(const NormBudget& budget, double beta, int N, double delta) {
  budget.validate();
  check_adams(N, "divergence_probe_adams");
  check_beta(beta, N, "divergence_probe_adams");
  if (!(delta > 0.0) || !(delta < 1.0 / kMinLogK)) throw DomainError("divergence_probe_adams: delta out of range");
  ProbePoint p;
  p.delta = delta;
  const double L = 1.0 / delta;
  p.index = L;
  const double log_q = std::log1p(-delta);
  const double e = (N - 2.0) / N;
  p.log_factor = (N - beta) / (2.0 * budget.b) * log_gap_ratio(log_q, e * budget.a, e * budget.b);
  const double omega = sphere_area(N);
  const double half = 0.5 * N;
  const double B = N * std::pow(beta_adams(N, 2), 2.0 / N - 1.0) * std::pow(L, -2.0 / N);
  const double tau = std::min(1.0, L / (2.0 * N));
  const QuadratureOptions qo;
  // Closing piece u/B = tau - s - s^2/tau + s^3/tau^2 on s in [0, tau].
  const double c3[4] = {tau, -1.0, -1.0 / tau, 1.0 / (tau * tau)};
  auto d1 = [&](double s) { return c3[1] + 2.0 * c3[2] * s + 3.0 * c3[3] * s * s; };
  auto d2 = [&](double s) { return 2.0 * c3[2] + 6.0 * c3[3] * s; };
  // J = int_0^tau |(u'' + (N-2) u')/B|^{N/2} ds, split at the roots.
  const double lap[4] = {d2(0.0) + (N - 2) * d1(0.0), 6.0 * c3[3] + (N - 2) * 2.0 * c3[2], (N - 2) * 3.0 * c3[3], 0.0};
  std::vector<quad::Interval> iv;
  double start_s = 0.0;
  for (double r : quad::cubic_roots_in(lap, tau)) {
    iv.push_back({start_s, r});
    start_s = r;
  }
  iv.push_back({start_s, tau});
  const quad::LogIntegrand GJ = [&](std::span<const double> s, std::span<double> out) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double v = lap[0] + s[i] * (lap[1] + s[i] * lap[2]);
      out[i] = half * std::log(std::abs(v));
    }
  };
  const double J = std::exp(quad::log_integrate(GJ, iv, qo));
  const double K = (std::pow(N, half - 1.0) + J) / std::pow(N - 2.0, half) - tau;
  // ||Delta u||_{N/2}^{N/2} = 1 + N K / L exactly (the leading constant is 1).
  const double log_D = std::log1p(N * K / L);
  // Core ball r <= eps R, eps = 1/2.
  const double eps = 0.5;
  const double c = 0.5 * (1.0 - eps * eps);
  const double excess = (1.0 - beta / N) * L *
                        std::expm1(log_q + N / (N - 2.0) * std::log1p(N * c / L) - 2.0 / (N - 2.0) * log_D);
  const double X = (1.0 - delta) * (1.0 - beta / N) * L * std::exp(N / (N - 2.0) * std::log1p(N * c / L) -
                                                                   2.0 / (N - 2.0) * log_D);
  const int start = SeriesKind::adams2(N).start_index();
  p.log_core = std::log(omega) + excess + phi_correction(start, X) + (N - beta) * std::log(eps) - std::log(N - beta);
  // ||u||_{N/2}^{N/2}: cap, log branch and closing piece, in shifted variables.
  const double rho_c = -L / N;
  const double c0 = B * L / N + 0.5 * B;
  const quad::LogIntegrand Gcap = [&](std::span<const double> sg, std::span<double> out) {
    for (std::size_t i = 0; i < sg.size(); ++i) out[i] = half * std::log(c0 - 0.5 * B * std::exp(2.0 * sg[i])) + N * sg[i];
  };
  const quad::Interval cap_iv{-60.0, 0.0};
  const double log_cap = N * rho_c + quad::log_integrate(Gcap, std::span(&cap_iv, 1), qo);
  const quad::LogIntegrand Gband = [&](std::span<const double> t, std::span<double> out) {
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = half * std::log(B * t[i]) - N * t[i];
  };
  double log_band = kNegInf;
  if (L / N > tau) {
    const quad::Interval band_iv{tau, std::min(L / N, tau + 80.0)};
    log_band = quad::log_integrate(Gband, std::span(&band_iv, 1), qo);
  }
  const quad::LogIntegrand Gclose = [&](std::span<const double> s, std::span<double> out) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double v = B * (c3[0] + s[i] * (c3[1] + s[i] * (c3[2] + s[i] * c3[3])));
      out[i] = half * std::log(std::abs(v)) + N * (s[i] - tau);
    }
  };
  const quad::Interval close_iv{0.0, tau};
  const double log_close = quad::log_integrate(Gclose, std::span(&close_iv, 1), qo);
  p.log_norm = std::log(omega) + quad::log_add(quad::log_add(log_cap, log_band), log_close) - log_D;
  p.log_value = p.log_factor + p.log_core - (N - beta) / N * p.log_norm;
  return p;
}

namespace {

template <class Probe>
ProbeRun run_probe(Probe probe, double ceiling, int max_points, double first_delta_cap) {
  ProbeRun run;
  const double log_ceiling = std::log(ceiling);
  for (int k = 1; k <= max_points; ++k) {
    const double delta = std::pow(10.0, -0.5 * k);
    if (!(delta < first_delta_cap)) continue;
    run.points.push_back(probe(delta));
    if (run.points.back().log_value > log_ceiling) {
      run.diverged = true;
      break;
    }
  }
  return run;
}

}  // namespace

ProbeRun run_probe_tm(const NormBudget& budget, double beta, int N, double ceiling, int max_points) {
  return run_probe([&](double d) { return divergence_probe_tm(budget, beta, N, d); }, ceiling, max_points, 0.5);
}

ProbeRun run_probe_adams(const NormBudget& budget, double beta, int N, double ceiling, int max_points) {
  return run_probe([&](double d) { return divergence_probe_adams(budget, beta, N, d); }, ceiling, max_points,
                   1.0 / kMinLogK);
}

// ---- sweeps and fits ----------------------------------------------------------

namespace {

template <class Estimate, class Factor, class Critical>
IdentitySweep identity_sweep_generic(const std::vector<double>& alpha_grid, double critical_alpha, double gap_expo,
                                     const SearchConfig& cfg, Estimate estimate, Factor factor, Critical critical) {
  cfg.validate();
  if (alpha_grid.empty()) throw DomainError("identity_sweep: alpha grid must not be empty");
  IdentitySweep s;
  for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
    const double a = alpha_grid[i];
    SearchConfig c = cfg;
    c.seed = stream_seed(cfg.seed, i);
    SweepRecord r;
    r.alpha = a;
    r.alpha_ratio = a / critical_alpha;
    r.estimate = estimate(a, c).value;
    r.factor = factor(a);
    r.product = r.factor * r.estimate;
    r.gap_x = -std::expm1(gap_expo * std::log(r.alpha_ratio));
    s.sup_product = std::max(s.sup_product, r.product);
    s.records.push_back(r);
  }
  SearchConfig c = cfg;
  c.seed = stream_seed(cfg.seed, alpha_grid.size());
  c.budget = cfg.budget * static_cast<long>(alpha_grid.size());
  s.critical = critical(c);
  s.mt_estimate = s.critical.value;
  s.gap = std::abs(s.sup_product - s.mt_estimate) / s.mt_estimate;
  for (const auto& r : s.records) {
    const double v = (r.product - s.mt_estimate) / s.mt_estimate;
    s.max_violation = std::max(s.max_violation, v);
    if (v > 2.0 * cfg.tolerance) s.one_sided_ok = false;
  }
  return s;
}

}  // namespace

IdentitySweep identity_sweep_tm(const NormBudget& budget, double beta, int N, const std::vector<double>& alpha_grid,
                                const SearchConfig& cfg) {
  budget.validate();
  return identity_sweep_generic(
      alpha_grid, alpha_moser(N), N - 1.0, cfg,
      [&](double a, const SearchConfig& c) { return estimate_at(a, beta, N, c); },
      [&](double a) { return tm_identity_factor(a, budget, beta, N); },
      [&](const SearchConfig& c) { return estimate_mt(budget, beta, N, c); });
}

IdentitySweep identity_sweep_adams(const NormBudget& budget, double beta, int N,
                                   const std::vector<double>& alpha_grid, const SearchConfig& cfg) {
  budget.validate();
  check_adams(N, "identity_sweep_adams");
  return identity_sweep_generic(
      alpha_grid, beta_adams(N, 2), 0.5 * (N - 2.0), cfg,
      [&](double a, const SearchConfig& c) { return estimate_ata(a, beta, N, c); },
      [&](double a) { return adams_identity_factor(a, budget, beta, N); },
      [&](const SearchConfig& c) { return estimate_a(budget, beta, N, c); });
}

RateFit rate_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw DomainError("rate_fit: x and y differ in length");
  if (x.size() < 4) throw DomainError("rate_fit: need at least 4 points");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("rate_fit: inputs must be positive");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw DomainError("rate_fit: x values must not all coincide");
  RateFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return f;
}

}  // namespace sharplab
