#include "sharplab/scaling_identities.hpp"

#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "sharplab/errors.hpp"
#include "sharplab/special_constants.hpp"

namespace sharplab {

namespace {

constexpr double kFeasTol = 1e-10;

double tm_critical(const RadialProfile& u, double strength, double beta) {
  return tm_functional(u, FunctionalParams{u.dimension(), beta, strength, Order::First});
}

double adams_critical(const ParametricProfile& u, double strength, double beta) {
  return adams_functional(u, FunctionalParams{u.dimension(), beta, strength, Order::Second});
}

NormPair tm_norms(const RadialProfile& u) {
  return {gradient_norm_N(u), lebesgue_norm(u, u.dimension())};
}

NormPair adams_norms(const ParametricProfile& u) {
  const double p = 0.5 * u.dimension();
  return {laplacian_norm(u, p), lebesgue_norm(u, p)};
}

void check_ratio(double q, const char* what) {
  if (!(q > 0.0) || !(q < 1.0)) throw DomainError(std::string(what) + ": alpha must lie strictly inside (0, critical)");
}

void check_unit(const NormPair& n, const char* what) {
  if (n.seminorm > 1.0 + kFeasTol) throw DomainError(std::string(what) + ": seminorm exceeds 1");
  if (std::abs(n.lebesgue - 1.0) > kFeasTol) throw DomainError(std::string(what) + ": input must have unit Lebesgue norm");
}

void check_budget(const NormBudget& budget, const NormPair& n, const char* what) {
  if (n.lebesgue == 0.0) throw DomainError(std::string(what) + ": u must not vanish identically");
  if (budget.value(n.seminorm, n.lebesgue) > 1.0 + kFeasTol) {
    throw DomainError(std::string(what) + ": input violates the full-norm constraint");
  }
  if (!(n.seminorm < 1.0)) throw DomainError(std::string(what) + ": seminorm must be < 1");
}

double sample_excess(double s, double ratio, double expo, const std::vector<double>& values) {
  double worst = -std::numeric_limits<double>::infinity();
  for (double u : values) {
    if (!(u > s)) continue;
    const double lhs = std::pow(u, expo);
    const double rhs = ratio * std::pow(u - s, expo) + 1.0;
    worst = std::max(worst, lhs - rhs);
  }
  return worst;
}

}  // namespace

void NormBudget::validate() const {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("NormBudget: a and b must be positive");
  }
}

double NormBudget::value(double seminorm, double norm) const { return std::pow(seminorm, a) + std::pow(norm, b); }

std::string to_json(const TransformReport& r) {
  nlohmann::ordered_json j;
  j["lambda"] = r.lambda;
  j["theta"] = r.theta;
  j["norms_in"] = {{"seminorm", r.norms_in.seminorm}, {"lebesgue", r.norms_in.lebesgue}};
  j["norms_out"] = {{"seminorm", r.norms_out.seminorm}, {"lebesgue", r.norms_out.lebesgue}};
  j["objective_in"] = r.objective_in;
  j["objective_out"] = r.objective_out;
  j["branch"] = r.branch;
  return j.dump();
}

TmTransform normalize_tm(const RadialProfile& u, double alpha, double beta) {
  if (u.is_zero()) throw DomainError("normalize_tm: u must not vanish identically");
  TransformReport rep;
  rep.norms_in = tm_norms(u);
  rep.lambda = rep.norms_in.lebesgue;
  rep.theta = rep.norms_in.seminorm;
  rep.branch = "normalize";
  RadialProfile v = rep.lambda == 1.0 ? u : u.dilated(rep.lambda);
  rep.norms_out = tm_norms(v);
  rep.objective_in = at_objective(u, alpha, beta);
  rep.objective_out = at_objective(v, alpha, beta);
  return {std::move(v), rep};
}

TmTransform subcritical_from_critical_tm(const RadialProfile& u, double alpha, const NormBudget& budget,
                                         double beta) {
  budget.validate();
  const int N = u.dimension();
  const double aN = alpha_moser(N);
  const double q = alpha / aN;
  check_ratio(q, "subcritical_from_critical_tm");
  TransformReport rep;
  rep.norms_in = tm_norms(u);
  check_unit(rep.norms_in, "subcritical_from_critical_tm");
  const double e = (N - 1.0) / N;
  rep.theta = std::pow(q, e);
  rep.lambda = std::pow(std::pow(q, e * budget.b) / (1.0 - std::pow(q, e * budget.a)), 1.0 / budget.b);
  rep.branch = "subcritical";
  RadialProfile v = u.dilated(rep.lambda).scaled(rep.theta);
  rep.norms_out = tm_norms(v);
  rep.objective_in = tm_critical(u, alpha, beta);
  rep.objective_out = tm_critical(v, aN, beta);
  return {std::move(v), rep};
}

TmTransform critical_to_seminorm_tm(const RadialProfile& u, const NormBudget& budget, double beta) {
  budget.validate();
  const int N = u.dimension();
  const double aN = alpha_moser(N);
  TransformReport rep;
  rep.norms_in = tm_norms(u);
  check_budget(budget, rep.norms_in, "critical_to_seminorm_tm");
  const double theta = rep.norms_in.seminorm;
  rep.theta = theta;
  rep.objective_in = tm_critical(u, aN, beta);
  if (theta > 0.5) {
    rep.branch = "upper";
    rep.lambda = std::pow(1.0 - std::pow(theta, budget.a), 1.0 / budget.b) / theta;
    RadialProfile v = u.dilated(rep.lambda).scaled(1.0 / theta);
    rep.norms_out = tm_norms(v);
    rep.objective_out = tm_critical(v, std::pow(theta, N / (N - 1.0)) * aN, beta);
    return {std::move(v), rep};
  }
  rep.branch = "lower";
  rep.lambda = 2.0;
  RadialProfile v = u.dilated(2.0).scaled(2.0);
  rep.norms_out = tm_norms(v);
  rep.objective_out = tm_critical(v, aN / std::pow(2.0, N / (N - 1.0)), beta);
  return {std::move(v), rep};
}

AdamsTransform normalize_adams(const ParametricProfile& u, double alpha, double beta) {
  TransformReport rep;
  rep.norms_in = adams_norms(u);
  if (rep.norms_in.lebesgue == 0.0) throw DomainError("normalize_adams: u must not vanish identically");
  rep.lambda = std::sqrt(rep.norms_in.lebesgue);
  rep.theta = rep.norms_in.seminorm;
  rep.branch = "normalize";
  ParametricProfile v = rep.lambda == 1.0 ? u : u.dilated(rep.lambda);
  rep.norms_out = adams_norms(v);
  rep.objective_in = ata_objective(u, alpha, beta);
  rep.objective_out = ata_objective(v, alpha, beta);
  return {std::move(v), rep};
}

AdamsTransform subcritical_from_critical_adams(const ParametricProfile& u, double alpha, const NormBudget& budget,
                                               double beta) {
  budget.validate();
  const int N = u.dimension();
  if (N < 3) throw DomainError("subcritical_from_critical_adams: requires N >= 3");
  const double b2 = beta_adams(N, 2);
  const double q = alpha / b2;
  check_ratio(q, "subcritical_from_critical_adams");
  TransformReport rep;
  rep.norms_in = adams_norms(u);
  check_unit(rep.norms_in, "subcritical_from_critical_adams");
  const double e = (N - 2.0) / N;
  rep.theta = std::pow(q, e);
  rep.lambda = std::pow(std::pow(q, e * budget.b) / (1.0 - std::pow(q, e * budget.a)), 0.5 / budget.b);
  rep.branch = "subcritical";
  ParametricProfile v = u.dilated(rep.lambda).scaled(rep.theta);
  rep.norms_out = adams_norms(v);
  rep.objective_in = adams_critical(u, alpha, beta);
  rep.objective_out = adams_critical(v, b2, beta);
  return {std::move(v), rep};
}

AdamsTransform critical_to_seminorm_adams(const ParametricProfile& u, const NormBudget& budget, double beta) {
  budget.validate();
  const int N = u.dimension();
  if (N < 3) throw DomainError("critical_to_seminorm_adams: requires N >= 3");
  const double b2 = beta_adams(N, 2);
  TransformReport rep;
  rep.norms_in = adams_norms(u);
  check_budget(budget, rep.norms_in, "critical_to_seminorm_adams");
  const double theta = rep.norms_in.seminorm;
  rep.theta = theta;
  rep.objective_in = adams_critical(u, b2, beta);
  if (theta > 0.25) {
    rep.branch = "upper";
    rep.lambda = std::pow(1.0 - std::pow(theta, budget.a), 0.5 / budget.b) / std::sqrt(theta);
    ParametricProfile v = u.dilated(rep.lambda).scaled(1.0 / theta);
    rep.norms_out = adams_norms(v);
    rep.objective_out = adams_critical(v, std::pow(theta, N / (N - 2.0)) * b2, beta);
    return {std::move(v), rep};
  }
  rep.branch = "lower";
  rep.lambda = 2.0;
  ParametricProfile v = u.dilated(2.0).scaled(4.0);
  rep.norms_out = adams_norms(v);
  rep.objective_out = adams_critical(v, b2 / std::pow(4.0, N / (N - 2.0)), beta);
  return {std::move(v), rep};
}

TransformReport fractional_scaling_check(double gamma, int N, const NormBudget& budget, double theta, double beta,
                                         double mu) {
  budget.validate();
  if (N < 2) throw DomainError("fractional_scaling_check: N must be >= 2");
  if (!(gamma > 0.0) || !(gamma < N)) throw DomainError("fractional_scaling_check: gamma must lie in (0, N)");
  if (!(theta > 0.0) || !(theta < 1.0)) throw DomainError("fractional_scaling_check: theta must lie in (0, 1)");
  if (!(beta >= 0.0) || !(beta < N)) throw DomainError("fractional_scaling_check: beta must lie in [0, N)");
  const double mu_max = std::pow(1.0 - std::pow(theta, budget.a), 1.0 / budget.b);
  if (mu < 0.0) mu = mu_max;
  if (mu > mu_max * (1.0 + kFeasTol)) throw DomainError("fractional_scaling_check: (theta, mu) violates the budget");
  const double p = N / gamma;
  TransformReport rep;
  rep.theta = theta;
  rep.norms_in = {theta, mu};
  rep.objective_in = 1.0;
  if (theta > std::pow(2.0, -gamma)) {
    rep.branch = "upper";
    rep.lambda = std::pow(1.0 - std::pow(theta, budget.a), 1.0 / (gamma * budget.b)) / std::pow(theta, 1.0 / gamma);
    // (-Delta)^{gamma/2} v = (lambda^gamma / theta) ((-Delta)^{gamma/2} u)(lambda x)
    // and ||w(lambda .)||_p = lambda^{-N/p} ||w||_p with N/p = gamma.
    rep.norms_out = {theta / theta, mu / (theta * std::pow(rep.lambda, N / p))};
    rep.objective_out = std::pow(rep.lambda, N - beta);
  } else {
    rep.branch = "lower";
    rep.lambda = 2.0;
    rep.norms_out = {std::pow(2.0, gamma) * theta, mu};
    rep.objective_out = std::pow(2.0, N - beta);
  }
  if (rep.norms_out.seminorm > 1.0 + kFeasTol || rep.norms_out.lebesgue > 1.0 + kFeasTol) {
    throw NumericalError("fractional_scaling_check: transformed symbols leave the unit ball (branch " + rep.branch +
                         ")");
  }
  return rep;
}

double young_split_excess_tm(const RadialProfile& u, double alpha, int samples) {
  const int N = u.dimension();
  const double q = alpha / alpha_moser(N);
  check_ratio(q, "young_split_excess_tm");
  if (samples < 2) throw DomainError("young_split_excess_tm: need at least two samples");
  const double s = std::pow(1.0 - std::pow(q, N - 1.0), 1.0 / N);
  const auto& g = u.grid().rho();
  const double lo = g.front() - 1.0, hi = g.back();
  std::vector<double> vals(samples);
  for (int i = 0; i < samples; ++i) vals[i] = u.value(std::exp(lo + (hi - lo) * i / (samples - 1.0)));
  return sample_excess(s, 1.0 / q, N / (N - 1.0), vals);
}

double young_split_excess_adams(const ParametricProfile& u, double alpha, int samples) {
  const int N = u.dimension();
  if (N < 3) throw DomainError("young_split_excess_adams: requires N >= 3");
  const double q = alpha / beta_adams(N, 2);
  check_ratio(q, "young_split_excess_adams");
  if (samples < 2) throw DomainError("young_split_excess_adams: need at least two samples");
  const double s = std::pow(1.0 - std::pow(q, 0.5 * (N - 2.0)), 2.0 / N);
  const double lo = u.cap().rho_c - 2.0, hi = std::log(u.support_radius());
  std::vector<double> vals(samples);
  vals[0] = u.value(0.0);
  for (int i = 1; i < samples; ++i) vals[i] = u.value(std::exp(lo + (hi - lo) * (i - 1) / (samples - 2.0)));
  return sample_excess(s, 1.0 / q, N / (N - 2.0), vals);
}

}  // namespace sharplab
