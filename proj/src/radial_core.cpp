#include "sharplab/radial_core.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "quadrature.hpp"
#include "sharplab/errors.hpp"
#include "sharplab/kernels.hpp"
#include "sharplab/special_constants.hpp"

namespace sharplab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kJunctionTol = 1e-9;

using LogFn = std::function<void(std::span<const double> u, std::span<double> out)>;

double cap_value(const QuadraticCap& cap, double rho) { return cap.c0 - cap.a * std::exp(2.0 * rho); }

// Locates the piece containing rho; -1 for the cap, size() past the support.
long locate(const std::vector<LogPolyPiece>& pieces, double rho) {
  if (pieces.empty() || rho < pieces.front().rho0) return -1;
  auto it = std::upper_bound(pieces.begin(), pieces.end(), rho,
                             [](double r, const LogPolyPiece& p) { return r < p.rho1; });
  return static_cast<long>(it - pieces.begin());
}

double value_at_rho(const ParametricProfile& u, double rho) {
  const auto& pieces = u.pieces();
  if (pieces.empty()) return rho <= u.cap().rho_c ? cap_value(u.cap(), rho) : 0.0;
  const long i = locate(pieces, rho);
  if (i < 0) return cap_value(u.cap(), rho);
  if (i >= static_cast<long>(pieces.size())) return 0.0;
  return pieces[static_cast<std::size_t>(i)].value(rho);
}

// Intervals of the support in rho, split at roots of u so that |u|^p stays
// smooth inside each one. The cap interval is [rho_c - T, rho_c].
std::vector<quad::Interval> support_intervals(const ParametricProfile& u, double cap_depth) {
  std::vector<quad::Interval> out;
  const auto& cap = u.cap();
  if (cap.a != 0.0) out.push_back({cap.rho_c - cap_depth, cap.rho_c});
  for (const auto& p : u.pieces()) {
    const double h = p.rho1 - p.rho0;
    double start = p.rho0;
    for (double s : quad::cubic_roots_in(p.c.data(), h)) {
      out.push_back({start, p.rho0 + s});
      start = p.rho0 + s;
    }
    out.push_back({start, p.rho1});
  }
  return out;
}

void values_at(const ParametricProfile& u, std::span<const double> rho, std::span<double> out) {
  const auto& pieces = u.pieces();
  const double mid = 0.5 * (rho.front() + rho.back());
  const long i = locate(pieces, mid);
  if (i < 0) {
    for (std::size_t k = 0; k < rho.size(); ++k) out[k] = cap_value(u.cap(), rho[k]);
  } else if (i >= static_cast<long>(pieces.size())) {
    std::fill(out.begin(), out.end(), 0.0);
  } else {
    const auto& p = pieces[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < rho.size(); ++k) out[k] = p.value(rho[k]);
  }
}

double scalar_log_f(const LogFn& logF, double v) {
  double in[1] = {v};
  double out[1];
  logF(in, out);
  return out[0];
}

// log int_{-inf}^{end} F(u(rho)) e^{gamma rho} d rho, gamma > 0.
double log_profile_integral(const ParametricProfile& u, double gamma, const LogFn& logF,
                            const QuadratureOptions& q) {
  const auto& cap = u.cap();
  double total = kNegInf;
  double cap_depth = 0.0;
  if (cap.a == 0.0) {
    const double lf = scalar_log_f(logF, cap.c0);
    if (lf != kNegInf) total = lf + gamma * cap.rho_c - std::log(gamma);
  } else {
    // Below rho_c - T the cap is replaced by its centre value. T is chosen so
    // the relative change of F across that region is below 1e-16.
    const double c0 = cap.c0;
    double slope = 0.0;
    if (c0 != 0.0) {
      const double h = 1e-6;
      const double l0 = scalar_log_f(logF, c0);
      const double l1 = scalar_log_f(logF, c0 * (1.0 - h));
      if (std::isfinite(l0) && std::isfinite(l1)) slope = std::abs(l0 - l1) / (std::abs(c0) * h);
      const double aR2 = std::abs(cap.a) * std::exp(2.0 * cap.rho_c);
      cap_depth = std::max(1.0, 0.5 * std::log(std::max(1.0, (slope + 1.0) * aR2 / 1e-17)));
      const double lf = l0;
      if (lf != kNegInf) total = lf + gamma * (cap.rho_c - cap_depth) - std::log(gamma);
    } else {
      cap_depth = 40.0;
    }
  }
  const auto intervals = support_intervals(u, cap_depth);
  std::vector<double> vals;
  quad::LogIntegrand G = [&](std::span<const double> rho, std::span<double> out) {
    vals.resize(rho.size());
    values_at(u, rho, vals);
    logF(vals, out);
    for (std::size_t k = 0; k < rho.size(); ++k) out[k] += gamma * rho[k];
  };
  return quad::log_add(total, quad::log_integrate(G, intervals, q));
}

// log int |D(rho)|^p e^{gamma rho} over the pieces, D a polynomial built from
// the piece coefficients by `deriv` (coefficients of D in s).
template <class Deriv>
double log_piece_poly_integral(const ParametricProfile& u, double p, double gamma, Deriv deriv,
                               const QuadratureOptions& q) {
  std::vector<quad::Interval> intervals;
  std::vector<std::array<double, 4>> coeffs;
  std::vector<double> origin;
  for (const auto& pc : u.pieces()) {
    const std::array<double, 4> d = deriv(pc);
    const double h = pc.rho1 - pc.rho0;
    double start = pc.rho0;
    for (double s : quad::cubic_roots_in(d.data(), h)) {
      intervals.push_back({start, pc.rho0 + s});
      coeffs.push_back(d);
      origin.push_back(pc.rho0);
      start = pc.rho0 + s;
    }
    intervals.push_back({start, pc.rho1});
    coeffs.push_back(d);
    origin.push_back(pc.rho0);
  }
  double total = kNegInf;
  std::vector<double> vals;
  for (std::size_t k = 0; k < intervals.size(); ++k) {
    const auto& d = coeffs[k];
    const double o = origin[k];
    if (d[0] == 0.0 && d[1] == 0.0 && d[2] == 0.0 && d[3] == 0.0) continue;
    quad::LogIntegrand G = [&](std::span<const double> rho, std::span<double> out) {
      vals.resize(rho.size());
      for (std::size_t i = 0; i < rho.size(); ++i) {
        const double s = rho[i] - o;
        vals[i] = d[0] + s * (d[1] + s * (d[2] + s * d[3]));
      }
      kernels::log_abs_pow(vals, p, out);
      for (std::size_t i = 0; i < rho.size(); ++i) out[i] += gamma * rho[i];
    };
    total = quad::log_add(total, quad::log_integrate(G, std::span<const quad::Interval>(&intervals[k], 1), q));
  }
  return total;
}

double finite_exp(double log_value, const char* what) {
  const double v = std::exp(log_value);
  if (std::isinf(v)) throw NumericalError(std::string(what) + ": value overflows a double (log = " +
                                          std::to_string(log_value) + ")");
  return v;
}

LogFn power_log_fn(double p) {
  return [p](std::span<const double> u, std::span<double> out) { kernels::log_abs_pow(u, p, out); };
}

LogFn series_log_fn(int start, double kappa, double exponent) {
  const double log_kappa = kappa > 0.0 ? std::log(kappa) : kNegInf;
  return [start, log_kappa, exponent](std::span<const double> u, std::span<double> out) {
    kernels::log_abs_pow(u, exponent, out);
    for (auto& v : out) v += log_kappa;
    if (log_kappa == kNegInf) std::fill(out.begin(), out.end(), kNegInf);
    kernels::log_phi_batch(start, out, out);
  };
}

void check_same_dimension(const FunctionalParams& fp, int N) {
  if (fp.N != N) {
    throw DomainError("functional dimension N = " + std::to_string(fp.N) + " does not match profile N = " +
                      std::to_string(N));
  }
}

}  // namespace

void FunctionalParams::validate() const {
  if (N < 2) throw DomainError("FunctionalParams: N must be >= 2");
  if (order == Order::Second && N < 3) throw DomainError("FunctionalParams: second order requires N >= 3");
  if (!(beta >= 0.0) || !(beta < N)) {
    throw DomainError("FunctionalParams: beta = " + std::to_string(beta) + " must satisfy 0 <= beta < N");
  }
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw DomainError("FunctionalParams: alpha must be finite and >= 0");
}

RadialGrid::RadialGrid(std::vector<double> rho) : rho_(std::move(rho)) {
  if (rho_.size() < 2) throw DomainError("RadialGrid: need at least two nodes");
  for (std::size_t i = 0; i < rho_.size(); ++i) {
    if (!std::isfinite(rho_[i])) throw DomainError("RadialGrid: non-finite node");
    if (i > 0 && !(rho_[i] > rho_[i - 1])) throw DomainError("RadialGrid: nodes must be strictly increasing");
  }
}

double RadialGrid::r_min() const { return std::exp(rho_.front()); }
double RadialGrid::r_max() const { return std::exp(rho_.back()); }

RadialGrid RadialGrid::shifted(double delta) const {
  std::vector<double> r = rho_;
  for (auto& v : r) v += delta;
  return RadialGrid(std::move(r));
}

RadialProfile::RadialProfile(int N, RadialGrid grid, std::vector<double> values)
    : N_(N), grid_(std::move(grid)), values_(std::move(values)) {
  if (N_ < 2) throw DomainError("RadialProfile: N must be >= 2");
  if (values_.size() != grid_.size()) throw DomainError("RadialProfile: one value per grid node required");
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("RadialProfile: non-finite value");
  }
  if (values_.back() != 0.0) throw DomainError("RadialProfile: value at r_max must be 0");
}

double RadialProfile::value(double r) const {
  if (!(r >= 0.0)) throw DomainError("RadialProfile::value: r must be >= 0");
  if (r == 0.0) return values_.front();
  const double rho = std::log(r);
  const auto& g = grid_.rho();
  if (rho <= g.front()) return values_.front();
  if (rho >= g.back()) return 0.0;
  const std::size_t i = static_cast<std::size_t>(std::upper_bound(g.begin(), g.end(), rho) - g.begin()) - 1;
  const double t = (rho - g[i]) / (g[i + 1] - g[i]);
  return values_[i] + t * (values_[i + 1] - values_[i]);
}

double RadialProfile::slope(std::size_t i) const {
  const auto& g = grid_.rho();
  return (values_[i + 1] - values_[i]) / (g[i + 1] - g[i]);
}

RadialProfile RadialProfile::dilated(double lambda) const {
  if (!(lambda > 0.0)) throw DomainError("dilated: lambda must be > 0");
  return RadialProfile(N_, grid_.shifted(-std::log(lambda)), values_);
}

RadialProfile RadialProfile::scaled(double c) const {
  std::vector<double> v = values_;
  for (auto& x : v) x *= c;
  v.back() = 0.0;
  return RadialProfile(N_, grid_, std::move(v));
}

bool RadialProfile::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

double LogPolyPiece::value(double rho) const {
  const double s = rho - rho0;
  return c[0] + s * (c[1] + s * (c[2] + s * c[3]));
}

double LogPolyPiece::d1(double rho) const {
  const double s = rho - rho0;
  return c[1] + s * (2.0 * c[2] + s * 3.0 * c[3]);
}

double LogPolyPiece::d2(double rho) const {
  const double s = rho - rho0;
  return 2.0 * c[2] + 6.0 * c[3] * s;
}

ParametricProfile::ParametricProfile(int N, std::string family, QuadraticCap cap, std::vector<LogPolyPiece> pieces)
    : N_(N), family_(std::move(family)), cap_(cap), pieces_(std::move(pieces)) {
  if (N_ < 2) throw DomainError("ParametricProfile: N must be >= 2");
  if (!std::isfinite(cap_.c0) || !std::isfinite(cap_.a) || !std::isfinite(cap_.rho_c)) {
    throw DomainError("ParametricProfile: non-finite cap");
  }
  // Junction values and one-sided rho-derivatives, left then right.
  std::vector<std::array<double, 4>> joints;
  const double cap_end = cap_value(cap_, cap_.rho_c);
  const double cap_slope = -2.0 * cap_.a * std::exp(2.0 * cap_.rho_c);
  double scale = std::abs(cap_.c0);
  double dscale = std::abs(cap_slope);
  if (pieces_.empty()) {
    joints.push_back({cap_end, 0.0, cap_slope, 0.0});
  } else {
    if (std::abs(pieces_.front().rho0 - cap_.rho_c) > 1e-12 * std::max(1.0, std::abs(cap_.rho_c))) {
      throw DomainError("ParametricProfile: first piece must start at the cap radius");
    }
    joints.push_back({cap_end, pieces_.front().c[0], cap_slope, pieces_.front().c[1]});
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      const auto& p = pieces_[i];
      if (!(p.rho1 > p.rho0) || !std::isfinite(p.rho1)) throw DomainError("ParametricProfile: empty or bad piece");
      for (double v : p.c) {
        if (!std::isfinite(v)) throw DomainError("ParametricProfile: non-finite coefficient");
      }
      const double end_val = p.value(p.rho1);
      const double end_d = p.d1(p.rho1);
      scale = std::max({scale, std::abs(p.c[0]), std::abs(end_val)});
      dscale = std::max({dscale, std::abs(p.c[1]), std::abs(end_d)});
      if (i + 1 < pieces_.size()) {
        if (pieces_[i + 1].rho0 != p.rho1) throw DomainError("ParametricProfile: pieces must be contiguous");
        joints.push_back({end_val, pieces_[i + 1].c[0], end_d, pieces_[i + 1].c[1]});
      } else {
        joints.push_back({end_val, 0.0, end_d, 0.0});
      }
    }
  }
  c1_ = true;
  for (const auto& j : joints) {
    if (std::abs(j[0] - j[1]) > kJunctionTol * std::max(scale, 1e-300)) {
      throw DomainError("ParametricProfile '" + family_ + "': discontinuous at a junction (" + std::to_string(j[0]) +
                        " vs " + std::to_string(j[1]) + ")");
    }
    if (std::abs(j[2] - j[3]) > kJunctionTol * std::max(dscale, 1e-300)) c1_ = false;
  }
}

double ParametricProfile::value(double r) const {
  if (!(r >= 0.0)) throw DomainError("ParametricProfile::value: r must be >= 0");
  if (r == 0.0) return cap_.c0;
  return value_at_rho(*this, std::log(r));
}

double ParametricProfile::derivative(double r) const {
  if (!(r > 0.0)) return 0.0;
  const double rho = std::log(r);
  if (pieces_.empty()) return rho <= cap_.rho_c ? -2.0 * cap_.a * r : 0.0;
  const long i = locate(pieces_, rho);
  if (i < 0) return -2.0 * cap_.a * r;
  if (i >= static_cast<long>(pieces_.size())) return 0.0;
  return pieces_[static_cast<std::size_t>(i)].d1(rho) / r;
}

double ParametricProfile::laplacian(double r) const {
  if (!(r > 0.0)) return -2.0 * N_ * cap_.a;
  const double rho = std::log(r);
  if (pieces_.empty()) return rho <= cap_.rho_c ? -2.0 * N_ * cap_.a : 0.0;
  const long i = locate(pieces_, rho);
  if (i < 0) return -2.0 * N_ * cap_.a;
  if (i >= static_cast<long>(pieces_.size())) return 0.0;
  const auto& p = pieces_[static_cast<std::size_t>(i)];
  return std::exp(-2.0 * rho) * (p.d2(rho) + (N_ - 2) * p.d1(rho));
}

double ParametricProfile::support_radius() const {
  return std::exp(pieces_.empty() ? cap_.rho_c : pieces_.back().rho1);
}

ParametricProfile ParametricProfile::dilated(double lambda) const {
  if (!(lambda > 0.0)) throw DomainError("dilated: lambda must be > 0");
  const double shift = -std::log(lambda);
  QuadraticCap cap = cap_;
  cap.rho_c += shift;
  cap.a *= lambda * lambda;
  std::vector<LogPolyPiece> pieces = pieces_;
  for (auto& p : pieces) {
    p.rho0 += shift;
    p.rho1 += shift;
  }
  return ParametricProfile(N_, family_, cap, std::move(pieces));
}

ParametricProfile ParametricProfile::scaled(double c) const {
  QuadraticCap cap = cap_;
  cap.c0 *= c;
  cap.a *= c;
  std::vector<LogPolyPiece> pieces = pieces_;
  for (auto& p : pieces) {
    for (auto& v : p.c) v *= c;
  }
  return ParametricProfile(N_, family_, cap, std::move(pieces));
}

ParametricProfile to_parametric(const RadialProfile& u) {
  const auto& g = u.grid().rho();
  const auto& v = u.values();
  std::vector<LogPolyPiece> pieces;
  pieces.reserve(g.size() - 1);
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    LogPolyPiece p;
    p.rho0 = g[i];
    p.rho1 = g[i + 1];
    p.c = {v[i], u.slope(i), 0.0, 0.0};
    pieces.push_back(p);
  }
  return ParametricProfile(u.dimension(), "grid", QuadraticCap{v.front(), 0.0, g.front()}, std::move(pieces));
}

double lebesgue_norm(const ParametricProfile& u, double p, const QuadratureOptions& q) {
  if (!(p >= 1.0)) throw DomainError("lebesgue_norm: p must be >= 1");
  const double l = log_profile_integral(u, u.dimension(), power_log_fn(p), q);
  if (l == kNegInf) return 0.0;
  return std::exp((l + std::log(sphere_area(u.dimension()))) / p);
}

double lebesgue_norm(const RadialProfile& u, double p, const QuadratureOptions& q) {
  return lebesgue_norm(to_parametric(u), p, q);
}

double gradient_norm_N(const RadialProfile& u) {
  const int N = u.dimension();
  const auto& g = u.grid().rho();
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < g.size(); ++i) sum += std::pow(std::abs(u.slope(i)), N) * (g[i + 1] - g[i]);
  return std::pow(sphere_area(N) * sum, 1.0 / N);
}

double gradient_norm_N(const ParametricProfile& u, const QuadratureOptions& q) {
  const int N = u.dimension();
  const auto& cap = u.cap();
  double total = kNegInf;
  if (cap.a != 0.0) {
    // int_0^R |2 a r|^N r^{N-1} dr = (2|a|)^N R^{2N} / (2N)
    total = N * std::log(2.0 * std::abs(cap.a)) + 2.0 * N * cap.rho_c - std::log(2.0 * N);
  }
  const double pieces = log_piece_poly_integral(
      u, N, 0.0, [](const LogPolyPiece& p) { return std::array<double, 4>{p.c[1], 2.0 * p.c[2], 3.0 * p.c[3], 0.0}; },
      q);
  total = quad::log_add(total, pieces);
  if (total == kNegInf) return 0.0;
  return std::exp((total + std::log(sphere_area(N))) / N);
}

double laplacian_norm(const ParametricProfile& u, double p, const QuadratureOptions& q) {
  if (!(p >= 1.0)) throw DomainError("laplacian_norm: p must be >= 1");
  const int N = u.dimension();
  const auto& cap = u.cap();
  double total = kNegInf;
  if (cap.a != 0.0) {
    // Delta u = -2 N a on the cap.
    total = p * std::log(2.0 * N * std::abs(cap.a)) + N * cap.rho_c - std::log(static_cast<double>(N));
  }
  // r^2 Delta u = u_rr + (N - 2) u_r in rho; weight e^{(N - 2p) rho}.
  const double pieces = log_piece_poly_integral(
      u, p, N - 2.0 * p,
      [N](const LogPolyPiece& pc) {
        return std::array<double, 4>{2.0 * pc.c[2] + (N - 2) * pc.c[1], 6.0 * pc.c[3] + 2.0 * (N - 2) * pc.c[2],
                                     3.0 * (N - 2) * pc.c[3], 0.0};
      },
      q);
  total = quad::log_add(total, pieces);
  if (total == kNegInf) return 0.0;
  return std::exp((total + std::log(sphere_area(N))) / p);
}

double log_tm_functional(const ParametricProfile& u, const FunctionalParams& fp, const QuadratureOptions& q) {
  fp.validate();
  if (fp.order != Order::First) throw DomainError("tm_functional: requires first-order parameters");
  check_same_dimension(fp, u.dimension());
  const int N = fp.N;
  const double kappa = fp.alpha * (1.0 - fp.beta / N);
  const auto kind = SeriesKind::tm(N);
  const double l =
      log_profile_integral(u, N - fp.beta, series_log_fn(kind.start_index(), kappa, N / (N - 1.0)), q);
  return l == kNegInf ? l : l + std::log(sphere_area(N));
}

double log_tm_functional(const RadialProfile& u, const FunctionalParams& fp, const QuadratureOptions& q) {
  return log_tm_functional(to_parametric(u), fp, q);
}

double log_adams_functional(const ParametricProfile& u, const FunctionalParams& fp, const QuadratureOptions& q) {
  fp.validate();
  if (fp.order != Order::Second) throw DomainError("adams_functional: requires second-order parameters");
  check_same_dimension(fp, u.dimension());
  const int N = fp.N;
  const double kappa = fp.alpha * (1.0 - fp.beta / N);
  const auto kind = SeriesKind::adams2(N);
  const double l =
      log_profile_integral(u, N - fp.beta, series_log_fn(kind.start_index(), kappa, N / (N - 2.0)), q);
  return l == kNegInf ? l : l + std::log(sphere_area(N));
}

double tm_functional(const RadialProfile& u, const FunctionalParams& fp, const QuadratureOptions& q) {
  return finite_exp(log_tm_functional(u, fp, q), "tm_functional");
}

double tm_functional(const ParametricProfile& u, const FunctionalParams& fp, const QuadratureOptions& q) {
  return finite_exp(log_tm_functional(u, fp, q), "tm_functional");
}

double adams_functional(const ParametricProfile& u, const FunctionalParams& fp, const QuadratureOptions& q) {
  return finite_exp(log_adams_functional(u, fp, q), "adams_functional");
}

double log_at_objective(const RadialProfile& u, double alpha, double beta, const QuadratureOptions& q) {
  const int N = u.dimension();
  if (u.is_zero()) throw DomainError("at_objective: u must not vanish identically");
  const double g = gradient_norm_N(u);
  if (g > 1.0 + 1e-9) {
    throw DomainError("at_objective: ||grad u||_N = " + std::to_string(g) + " exceeds 1");
  }
  const FunctionalParams fp{N, beta, alpha, Order::First};
  const auto pu = to_parametric(u);
  const double lf = log_tm_functional(pu, fp, q);
  return lf - (N - beta) * std::log(lebesgue_norm(pu, N, q));
}

double at_objective(const RadialProfile& u, double alpha, double beta, const QuadratureOptions& q) {
  return finite_exp(log_at_objective(u, alpha, beta, q), "at_objective");
}

double log_ata_objective(const ParametricProfile& u, double alpha, double beta, const QuadratureOptions& q) {
  const int N = u.dimension();
  if (N < 3) throw DomainError("ata_objective: requires N >= 3");
  if (!u.is_c1()) {
    throw DomainError("ata_objective: profile '" + u.family() + "' is not C^1; its Laplacian has a singular part");
  }
  const double lap = laplacian_norm(u, 0.5 * N, q);
  if (lap > 1.0 + 1e-9) {
    throw DomainError("ata_objective: ||Delta u||_{N/2} = " + std::to_string(lap) + " exceeds 1");
  }
  const double norm = lebesgue_norm(u, 0.5 * N, q);
  if (norm == 0.0) throw DomainError("ata_objective: u must not vanish identically");
  const FunctionalParams fp{N, beta, alpha, Order::Second};
  const double lf = log_adams_functional(u, fp, q);
  return lf - 0.5 * N * (1.0 - beta / N) * std::log(norm);
}

double ata_objective(const ParametricProfile& u, double alpha, double beta, const QuadratureOptions& q) {
  return finite_exp(log_ata_objective(u, alpha, beta, q), "ata_objective");
}

double levelset_volume(const ParametricProfile& u, double threshold) {
  if (!(threshold > 0.0)) throw DomainError("levelset_volume: threshold must be > 0");
  const int N = u.dimension();
  const double unit = sphere_area(N) / N;
  const auto& cap = u.cap();
  double vol = 0.0;
  const double R2 = std::exp(2.0 * cap.rho_c);
  // Cap: c0 - a r^2 > t on r in [0, R].
  if (cap.a == 0.0) {
    if (cap.c0 > threshold) vol += std::pow(R2, 0.5 * N);
  } else {
    const double x = (cap.c0 - threshold) / cap.a;  // boundary value of r^2
    if (cap.a > 0.0) {
      if (x > 0.0) vol += std::pow(std::min(x, R2), 0.5 * N);
    } else {
      const double lo = std::max(x, 0.0);
      if (lo < R2) vol += std::pow(R2, 0.5 * N) - std::pow(lo, 0.5 * N);
    }
  }
  for (const auto& p : u.pieces()) {
    std::array<double, 4> c = p.c;
    c[0] -= threshold;
    std::vector<double> cuts = {0.0};
    for (double s : quad::cubic_roots_in(c.data(), p.rho1 - p.rho0)) cuts.push_back(s);
    cuts.push_back(p.rho1 - p.rho0);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double m = p.rho0 + 0.5 * (cuts[i] + cuts[i + 1]);
      if (p.value(m) > threshold) {
        vol += std::exp(N * (p.rho0 + cuts[i + 1])) - std::exp(N * (p.rho0 + cuts[i]));
      }
    }
  }
  return unit * vol;
}

double levelset_volume(const RadialProfile& u, double threshold) {
  return levelset_volume(to_parametric(u), threshold);
}

void write_profile(std::ostream& os, const RadialProfile& u) {
  os << "radial-profile v1 N=" << u.dimension() << "\n";
  char buf[64];
  const auto& g = u.grid().rho();
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", g[i], u.values()[i]);
    os << buf;
  }
}

RadialProfile read_profile(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw DomainError("read_profile: empty input");
  int N = 0;
  {
    std::istringstream hs(line);
    std::string tag, version, dim;
    if (!(hs >> tag >> version >> dim) || tag != "radial-profile" || version != "v1" || dim.rfind("N=", 0) != 0) {
      throw DomainError("read_profile: bad header '" + line + "'");
    }
    try {
      std::size_t used = 0;
      N = std::stoi(dim.substr(2), &used);
      if (used != dim.size() - 2) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw DomainError("read_profile: bad dimension in header '" + line + "'");
    }
  }
  std::vector<double> rho, val;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    double r = 0.0, v = 0.0;
    std::string extra;
    if (!(ls >> r >> v) || (ls >> extra)) {
      throw DomainError("read_profile: malformed line " + std::to_string(lineno));
    }
    if (!rho.empty() && !(r > rho.back())) {
      throw DomainError("read_profile: rho not increasing at line " + std::to_string(lineno));
    }
    rho.push_back(r);
    val.push_back(v);
  }
  return RadialProfile(N, RadialGrid(std::move(rho)), std::move(val));
}

}  // namespace sharplab
