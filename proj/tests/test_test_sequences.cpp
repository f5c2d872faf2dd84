#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "sharplab/errors.hpp"
#include "sharplab/special_constants.hpp"
#include "sharplab/test_sequences.hpp"

using namespace sharplab;

namespace {

constexpr double kPi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace

TEST(MoserProfile, GradientNormIsExactlyOne) {
  for (double n : {1.0, 10.0, 100.0, 1000.0}) {
    for (int N : {2, 3, 4}) {
      for (double beta : {0.0, 0.5 * N}) {
        const auto u = moser_profile({n, N, beta});
        EXPECT_NEAR(gradient_norm_N(u), 1.0, 1e-12) << n << " " << N << " " << beta;
      }
    }
  }
}

TEST(MoserProfile, PlateauAndShape) {
  const MoserSequenceSpec spec{30.0, 3, 1.0};
  const auto u = moser_profile(spec);
  const double h = std::pow(1.0 / (4 * kPi), 1.0 / 3) * std::pow(15.0, 2.0 / 3);
  EXPECT_LT(rel(u.core_value(), h), 1e-14);
  EXPECT_DOUBLE_EQ(u.grid().rho().front(), -15.0);
  EXPECT_DOUBLE_EQ(u.grid().rho().back(), 0.0);
  // ((N - beta)/(omega n))^{1/N} log(1/r) in the log band.
  const double r = std::exp(-4.0);
  EXPECT_LT(rel(u.value(r), std::pow(2.0 / (4 * kPi * 30.0), 1.0 / 3) * 4.0), 1e-13);
  EXPECT_THROW(moser_profile({0.0, 2, 0.0}), DomainError);
  EXPECT_THROW(moser_profile({1.0, 2, 2.0}), DomainError);
}

TEST(MoserProfile, NormDecaysLikeOneOverN) {
  for (int N : {2, 3}) {
    std::vector<double> x, y;
    for (double n = 16; n <= 4096; n *= 2) {
      x.push_back(std::log(n));
      y.push_back(N * std::log(lebesgue_norm(moser_profile({n, N, 0.0}), N)));
    }
    EXPECT_NEAR(ols_slope(x, y), -1.0, 0.05) << N;
  }
}

TEST(MoserProfile, CoreLimitIsOmegaOverNMinusBeta) {
  const double n = 30.0;
  const double v = sphere_area(2) * phi(SeriesKind::tm(2), n) * std::exp(-n) / 2.0;
  EXPECT_LT(rel(v, kPi), 0.01);
}

TEST(SmoothCap, Branches) {
  for (double e : {0.05, 0.2, 0.45}) {
    EXPECT_DOUBLE_EQ(smooth_cap(0.5, e), 0.5);
    EXPECT_DOUBLE_EQ(smooth_cap(0.0, e), 0.0);
    EXPECT_NEAR(smooth_cap_derivative(1e-300, e), 0.0, 1e-290);
    EXPECT_NEAR(smooth_cap(1.0 - e / 2, e), 1.0 - 3.0 * e / 8.0, 1e-15);
    EXPECT_DOUBLE_EQ(smooth_cap(1.5, e), 1.0);
  }
  EXPECT_DOUBLE_EQ(psi_cap(0.0), 0.0);
  EXPECT_DOUBLE_EQ(psi_cap(1.0), 1.0);
  EXPECT_THROW(smooth_cap(0.3, 0.5), DomainError);
}

TEST(SmoothCap, IsC1AtBreakpoints) {
  const double e = 0.2;
  for (double t : {0.0, e, 1.0 - e, 1.0}) {
    EXPECT_NEAR(smooth_cap_derivative(t - 1e-12, e), smooth_cap_derivative(t + 1e-12, e), 1e-10) << t;
    EXPECT_NEAR(smooth_cap(t - 1e-13, e), smooth_cap(t + 1e-13, e), 1e-12) << t;
  }
  // The derivative matches central differences inside each branch.
  const double h = 1e-6;
  for (double t : {0.1, 0.5, 0.9}) {
    const double fd = (smooth_cap(t + h, e) - smooth_cap(t - h, e)) / (2 * h);
    EXPECT_NEAR(fd, smooth_cap_derivative(t, e), 1e-8) << t;
  }
}

TEST(AdamsPsi, CoreValueAndC1) {
  const AdamsPsiSpec spec{1e-3, 0.1, 4};
  const auto u = adams_psi_profile(spec);
  const double A = std::pow(std::log(1e3), 0.5);
  EXPECT_TRUE(u.is_c1());
  EXPECT_LT(rel(u.value(0.5e-3), A), 1e-14);
  EXPECT_LT(rel(u.value(0.0), A), 1e-14);
  EXPECT_NEAR(u.value(1.0), 0.0, 1e-14);
  // Middle band: u = A t with t = log(1/|x|)/L, so r^2 Delta u = (N - 2)(-A/L).
  const double L = std::log(1e3);
  const double r = std::exp(-0.5 * L);
  EXPECT_LT(rel(u.laplacian(r) * r * r, -2.0 * A / L), 1e-12);
}

TEST(AdamsPsi, LaplacianNormNearCritical) {
  for (double eps : {0.05, 0.1}) {
    for (double r : {1e-4, 1e-6, 1e-10}) {
      const auto u = adams_psi_profile({r, eps, 4});
      const double lap = laplacian_norm(u, 2.0);
      EXPECT_LT(lap * lap / (beta_adams(4, 2) / 4.0), 1.0 + 10.0 * eps) << eps << " " << r;
    }
  }
}

TEST(AdamsQuadratic, ContinuousAtJunctions) {
  for (double lk : {std::log(1e3), std::log(1e4), 30.0}) {
    const auto u = adams_quadratic_profile({lk, 4});
    const double R = std::exp(-lk / 4);
    EXPECT_NEAR(u.value(R * (1 - 1e-15)), u.value(R * (1 + 1e-15)), 1e-12);
    EXPECT_NEAR(u.value(1.0), 0.0, 1e-12);
    EXPECT_FALSE(u.is_c1());
    const auto v = adams_quadratic_c1_profile({lk, 4});
    EXPECT_TRUE(v.is_c1());
    EXPECT_NEAR(v.value(R * (1 - 1e-15)), v.value(R * (1 + 1e-15)), 1e-12);
  }
  EXPECT_THROW(adams_quadratic_profile({0.5, 4}), DomainError);
  EXPECT_THROW(adams_quadratic_profile({5.0, 2}), DomainError);
}

TEST(AdamsQuadratic, BranchwiseLaplacianNorm) {
  // The displayed cap carries ||Delta||_2^2 = 32 pi^2 / ln k on its own, the
  // log branch exactly 1.
  for (double k : {1e3, 1e4, 1e5}) {
    const double lk = std::log(k);
    const double lap = laplacian_norm(adams_quadratic_profile({lk, 4}), 2.0);
    EXPECT_GE(lap * lap, 1.0 - 1e-3);
    EXPECT_LT(rel(lap * lap - 1.0, 32 * kPi * kPi / lk), 1e-10);
    const double c1 = laplacian_norm(adams_quadratic_c1_profile({lk, 4}), 2.0);
    EXPECT_GE(c1 * c1, 1.0 - 1e-3);
    EXPECT_LE(c1 * c1, 1.0 + 10.0 / lk);
  }
}

TEST(AdamsQuadratic, LebesgueNormDecay) {
  std::vector<double> x, y;
  for (double lk = 20; lk <= 640; lk *= 2) {
    const auto u = adams_quadratic_c1_profile({lk, 4});
    x.push_back(std::log(lk));
    y.push_back(2.0 * std::log(lebesgue_norm(u, 2.0)));
  }
  EXPECT_NEAR(ols_slope(x, y), -1.0, 0.05);
}

TEST(AtLowerBound, IndexRuleAndDomain) {
  const double aN = alpha_moser(2);
  const auto lb = at_lower_bound(0.9 * aN, 0.0, 2);
  EXPECT_NEAR(lb.index, 15.0, 1e-12);
  EXPECT_LT(rel(lb.bound, 73.0880847557938246626), 1e-12);
  EXPECT_GT(at_lower_bound(0.5 * aN, 0.0, 2).bound, 0.0);
  EXPECT_THROW(at_lower_bound(aN, 0.0, 2), DomainError);
  EXPECT_THROW(at_lower_bound(0.49 * aN, 0.0, 2), DomainError);
}

TEST(AtLowerBound, MpmathOracleAt099) {
  const auto lb = at_lower_bound(0.99 * alpha_moser(2), 0.0, 2);
  EXPECT_LT(rel(lb.bound, 440.931711262159850927), 1e-12);
}

TEST(AtLowerBound, ScaledProductStaysBounded) {
  for (int N : {2, 3}) {
    double lo = 1e300, hi = 0.0;
    for (double q : {0.9, 0.99, 0.999, 0.9999}) {
      const double v = at_lower_bound(q * alpha_moser(N), 0.0, N).bound * (1 - std::pow(q, N - 1.0));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    EXPECT_GT(lo, 0.0);
    EXPECT_LT(hi / lo, 10.0);
  }
}

TEST(AtaLowerBound, MpmathOracle) {
  const double b2 = beta_adams(4, 2);
  EXPECT_LT(rel(ata_lower_bound(0.9 * b2, 0.0, 4).bound, 643.688137659383648), 1e-12);
  EXPECT_LT(rel(ata_lower_bound(0.99 * b2, 0.0, 4).bound, 470.557688567853906), 1e-12);
  EXPECT_GT(ata_lower_bound(0.5 * b2, 0.0, 4).bound, 0.0);
  EXPECT_THROW(ata_lower_bound(b2, 0.0, 4), DomainError);
  EXPECT_THROW(ata_lower_bound(0.9 * b2, 0.0, 2), DomainError);
}

TEST(AtaLowerBound, ScaledProductStaysBounded) {
  const double b2 = beta_adams(4, 2);
  double lo = 1e300, hi = 0.0;
  for (double q : {0.9, 0.99, 0.995, 0.999}) {
    const double v = ata_lower_bound(q * b2, 0.0, 4).bound * (1 - q);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  EXPECT_GT(lo, 0.0);
  EXPECT_LT(hi, 1e3);
}
