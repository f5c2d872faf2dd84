#include "quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

#include "sharplab/errors.hpp"
#include "sharplab/kernels.hpp"

namespace sharplab::quad {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kMaxOrder = 128;
// Sub-intervals whose largest node value sits this far below the running
// total are accepted without further bisection.
constexpr double kNegligible = 50.0;
// Hard stop on bisection work for one integral.
constexpr long kMaxPanels = 1L << 18;

GaussRule build_rule(int n) {
  GaussRule rule;
  rule.x.resize(n);
  rule.log_w.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.x[n - 1 - i] = x;
    rule.log_w[n - 1 - i] = std::log(2.0 / ((1.0 - x * x) * dp * dp));
  }
  return rule;
}

struct Panel {
  double a;
  double b;
  double est;
  double gmax;
  double range;
};

class Integrator {
 public:
  Integrator(const LogIntegrand& G, const QuadratureOptions& q) : G_(G), q_(q), rule_(gauss_rule(q.order)) {}

  Panel eval(double a, double b) {
    const int n = q_.order;
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    for (int i = 0; i < n; ++i) rho_[i] = mid + half * rule_.x[i];
    G_(std::span<const double>(rho_.data(), n), std::span<double>(g_.data(), n));
    double gmax = kNegInf, gmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      if (std::isnan(g_[i])) throw NumericalError("quadrature: integrand is NaN");
      gmax = std::max(gmax, g_[i]);
      gmin = std::min(gmin, g_[i]);
      terms_[i] = g_[i] + rule_.log_w[i];
    }
    Panel p{a, b, kNegInf, gmax, gmax - gmin};
    if (gmax == kNegInf) return p;
    p.est = kernels::log_sum_exp(std::span<const double>(terms_.data(), n)) + std::log(half);
    return p;
  }

  double refine(const Panel& p, double log_ref, int depth) {
    if (p.gmax == kNegInf) return kNegInf;
    if (depth >= q_.max_depth || panels_ > kMaxPanels) return p.est;
    if (p.gmax + std::log(p.b - p.a) < log_ref - kNegligible) return p.est;
    const double m = 0.5 * (p.a + p.b);
    const Panel left = eval(p.a, m);
    const Panel right = eval(m, p.b);
    panels_ += 2;
    if (!(p.range > q_.split_log_range)) {
      const double both = log_add(left.est, right.est);
      if (both == kNegInf) return both;
      // Error of the coarse panel measured against the whole integral.
      const double err = std::abs(std::expm1(p.est - both)) * std::exp(both - log_ref);
      // Node values are sums of terms as large as |g| or |rho| and carry a
      // relative rounding error of that size times eps.
      const double scale = std::max({1.0, std::abs(p.gmax), std::abs(p.a), std::abs(p.b)});
      const double floor = 64.0 * std::numeric_limits<double>::epsilon() * scale;
      if (err <= std::max(q_.rel_tol, floor)) return both;
    }
    return log_add(refine(left, log_ref, depth + 1), refine(right, log_ref, depth + 1));
  }

 private:
  const LogIntegrand& G_;
  const QuadratureOptions& q_;
  const GaussRule& rule_;
  std::array<double, kMaxOrder> rho_{};
  std::array<double, kMaxOrder> g_{};
  std::array<double, kMaxOrder> terms_{};
  long panels_ = 0;
};

}  // namespace

const GaussRule& gauss_rule(int n) {
  if (n < 2 || n > kMaxOrder) throw DomainError("gauss_rule: order must lie in [2, 128]");
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

double log_integrate(const LogIntegrand& G, std::span<const Interval> intervals, const QuadratureOptions& q) {
  Integrator integ(G, q);
  std::vector<Panel> panels;
  panels.reserve(intervals.size());
  double log_ref = kNegInf;
  for (const auto& iv : intervals) {
    if (!(iv.b > iv.a)) continue;
    panels.push_back(integ.eval(iv.a, iv.b));
    log_ref = log_add(log_ref, panels.back().est);
  }
  double total = kNegInf;
  for (const auto& p : panels) total = log_add(total, integ.refine(p, log_ref, 0));
  return total;
}

std::vector<double> cubic_roots_in(const double* c, double h) {
  std::vector<double> out;
  auto f = [c](double s) { return c[0] + s * (c[1] + s * (c[2] + s * c[3])); };
  if (c[2] == 0.0 && c[3] == 0.0) {
    if (c[1] != 0.0) {
      const double s = -c[0] / c[1];
      if (s > 0.0 && s < h) out.push_back(s);
    }
    return out;
  }
  // Split (0, h) at critical points so f is monotone on each part.
  std::vector<double> cuts = {0.0};
  const double A = 3.0 * c[3], B = 2.0 * c[2], C = c[1];
  if (A == 0.0) {
    if (B != 0.0) cuts.push_back(-C / B);
  } else {
    const double disc = B * B - 4.0 * A * C;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      const double qq = -0.5 * (B + std::copysign(sq, B));
      if (qq != 0.0) {
        cuts.push_back(qq / A);
        cuts.push_back(C / qq);
      } else {
        cuts.push_back(0.0);
      }
    }
  }
  cuts.push_back(h);
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double lo = std::max(cuts[i], 0.0), hi = std::min(cuts[i + 1], h);
    if (!(hi > lo)) continue;
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0 || fhi == 0.0 || (flo > 0.0) == (fhi > 0.0)) continue;
    for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, std::abs(hi)); ++it) {
      const double m = 0.5 * (lo + hi);
      const double fm = f(m);
      if ((fm > 0.0) == (flo > 0.0)) {
        lo = m;
        flo = fm;
      } else {
        hi = m;
      }
    }
    out.push_back(0.5 * (lo + hi));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace sharplab::quad
