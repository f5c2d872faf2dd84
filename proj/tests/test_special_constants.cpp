#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sharplab/errors.hpp"
#include "sharplab/special_constants.hpp"

using namespace sharplab;

namespace {

constexpr double kPi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Plain long-double summation of sum_{j >= s} t^j / j!, used as an oracle.
long double phi_oracle(int s, long double t) {
  long double term = 1.0L;
  long double sum = 0.0L;
  for (int j = 0; j < 400; ++j) {
    if (j >= s) sum += term;
    term *= t / (j + 1);
  }
  return sum;
}

}  // namespace

TEST(Gamma, MatchesStdTgamma) {
  for (double x = 0.05; x < 60.0; x += 0.37) {
    EXPECT_LT(rel(gamma_fn(x), std::tgamma(x)), 1e-13) << x;
  }
}

TEST(Gamma, HalfIntegersAreSqrtPiMultiples) {
  double expected = std::sqrt(kPi);  // Gamma(1/2)
  for (int k = 0; k < 20; ++k) {
    EXPECT_LT(rel(gamma_fn(0.5 + k), expected), 1e-13) << k;
    expected *= (0.5 + k);
  }
}

TEST(Gamma, RejectsNonPositive) {
  EXPECT_THROW(gamma_fn(0.0), DomainError);
  EXPECT_THROW(gamma_fn(-1.5), DomainError);
}

TEST(SphereArea, LowDimensions) {
  EXPECT_LT(rel(sphere_area(2), 2 * kPi), 1e-14);
  EXPECT_LT(rel(sphere_area(3), 4 * kPi), 1e-14);
  EXPECT_LT(rel(sphere_area(4), 2 * kPi * kPi), 1e-14);
  EXPECT_THROW(sphere_area(1), DomainError);
}

TEST(AlphaMoser, KnownValues) {
  EXPECT_LT(rel(alpha_moser(2), 4 * kPi), 1e-13);
  EXPECT_LT(rel(alpha_moser(3), 6 * std::sqrt(kPi)), 1e-13);
  EXPECT_LT(rel(alpha_moser(4), 10.81027076025396075), 1e-13);
  EXPECT_THROW(alpha_moser(1), DomainError);
}

TEST(AlphaMoser, ConsistentWithSphereArea) {
  for (int N = 2; N <= 10; ++N) {
    EXPECT_LT(rel(alpha_moser(N), N * std::pow(sphere_area(N), 1.0 / (N - 1))), 1e-13) << N;
  }
}

TEST(BetaAdams, KnownValues) {
  EXPECT_LT(rel(beta_adams(4, 2), 32 * kPi * kPi), 1e-13);
  EXPECT_LT(rel(beta_adams(3, 2), 48 * kPi * kPi), 1e-13);
  EXPECT_LT(rel(beta_adams(2, 1), alpha_moser(2)), 1e-13);
  for (int N = 3; N <= 8; ++N) EXPECT_LT(rel(beta_adams(N, 1), alpha_moser(N)), 1e-12) << N;
  EXPECT_THROW(beta_adams(4, 4), DomainError);
  EXPECT_THROW(beta_adams(4, 0), DomainError);
}

TEST(Beta0, AgreesWithIntegerOrder) {
  EXPECT_LT(rel(beta0_fractional(4, 2.0), beta_adams(4, 2)), 1e-12);
  EXPECT_LT(rel(beta0_fractional(2, 1.0), 4 * kPi), 1e-12);
  for (int N = 3; N <= 8; ++N) {
    for (int m = 2; m < N; m += 2) {
      EXPECT_LT(rel(beta0_fractional(N, m), beta_adams(N, m)), 1e-12) << N << " " << m;
    }
  }
  // 40-digit evaluation of the closed form.
  EXPECT_LT(rel(beta0_fractional(3, 1.5), 59.217626406536151713), 1e-12);
  EXPECT_THROW(beta0_fractional(3, 3.0), DomainError);
  EXPECT_THROW(beta0_fractional(3, 0.0), DomainError);
}

TEST(SeriesKind, StartIndices) {
  EXPECT_EQ(SeriesKind::tm(2).start_index(), 1);
  EXPECT_EQ(SeriesKind::tm(4).start_index(), 3);
  EXPECT_EQ(SeriesKind::adams2(3).start_index(), 1);
  EXPECT_EQ(SeriesKind::adams2(4).start_index(), 1);
  EXPECT_EQ(SeriesKind::adams2(5).start_index(), 2);
  EXPECT_EQ(SeriesKind::adams2(6).start_index(), 2);
  EXPECT_EQ(SeriesKind::fractional(3, 1.0).start_index(), 2);
  EXPECT_THROW(SeriesKind::adams2(2), DomainError);
}

TEST(SeriesKind, FractionalRuleMatchesShiftedForm) {
  // min{j >= p-1} against min{j >= p} - 1.
  for (double p : {1.1, 1.5, 2.0, 2.5, 3.0, 4.0}) {
    const int jp = static_cast<int>(std::ceil(p - 1e-12));
    EXPECT_EQ(fractional_start_index(p), jp - 1) << p;
  }
}

TEST(Phi, TrivialValues) {
  EXPECT_LT(rel(phi(SeriesKind::tm(2), 1.0), std::exp(1.0) - 1.0), 1e-15);
  EXPECT_EQ(phi(SeriesKind::tm(3), 0.0), 0.0);
  EXPECT_LT(rel(phi(SeriesKind::adams2(6), 2.0), std::exp(2.0) - 3.0), 1e-14);
  EXPECT_THROW(phi(SeriesKind::tm(2), -1.0), DomainError);
  EXPECT_THROW(phi(SeriesKind::tm(2), 800.0), NumericalError);
}

TEST(Phi, AgainstMultiprecisionValues) {
  EXPECT_LT(rel(phi(SeriesKind::tm(4), 0.1), 1.709180756476248117e-4), 1e-13);
  EXPECT_LT(rel(phi(SeriesKind::tm(4), 2.0), 2.389056098930650227), 1e-14);
  EXPECT_LT(rel(phi(SeriesKind::tm(3), 25.0), 72004899311.38587252), 1e-14);
  EXPECT_LT(rel(phi(SeriesKind::tm(6), 1e-3), 8.334722420659724978e-18), 1e-13);
}

TEST(Phi, TwoRoutesAgree) {
  for (int s = 0; s <= 6; ++s) {
    for (double t = 0.1; t <= 30.0; t *= 1.13) {
      const double a = detail::phi_direct_series(s, t);
      const double oracle = static_cast<double>(phi_oracle(s, t));
      EXPECT_LT(rel(a, oracle), 1e-13) << s << " " << t;
      // e^t - partial sum loses digits to cancellation when t is small
      // relative to s; compare only where the removed part is at most half.
      if (t > 2.0 * s + 1.0) {
        EXPECT_LT(rel(detail::phi_exp_minus_partial(s, t), oracle), 1e-12) << s << " " << t;
      }
    }
  }
}

TEST(Phi, MonotoneAndMidpointConvex) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 40.0);
  for (int N : {2, 3, 4, 6}) {
    const auto kind = SeriesKind::tm(N);
    for (int i = 0; i < 500; ++i) {
      double s = U(rng), t = U(rng);
      if (s > t) std::swap(s, t);
      if (t - s < 1e-6) continue;
      EXPECT_LT(phi(kind, s), phi(kind, t));
      EXPECT_LE(phi(kind, 0.5 * (s + t)), 0.5 * (phi(kind, s) + phi(kind, t)) * (1 + 1e-14));
    }
  }
}

TEST(LogPhi, Examples) {
  EXPECT_LT(rel(log_phi(SeriesKind::tm(2), 700.0), 700.0), 1e-15);
  EXPECT_LT(rel(log_phi(SeriesKind::tm(2), 1.0), std::log(std::exp(1.0) - 1.0)), 1e-14);
  EXPECT_LT(rel(log_phi(SeriesKind::adams2(4), 50.0), 49.999999999999999999), 1e-15);
  EXPECT_LT(rel(log_phi(SeriesKind::tm(4), 0.1), -8.674326206041762618), 1e-13);
  EXPECT_LT(rel(log_phi(SeriesKind::tm(6), 1e-3), -39.32610146110487850), 1e-13);
  EXPECT_LT(rel(log_phi(SeriesKind::tm(4), 300.0), 300.0), 1e-15);
  EXPECT_DOUBLE_EQ(log_phi(SeriesKind::tm(2), 1e6), 1e6);
  EXPECT_THROW(log_phi(SeriesKind::tm(2), 0.0), DomainError);
}

TEST(LogPhi, ExponentiatesToPhi) {
  for (int N = 2; N <= 7; ++N) {
    const auto kind = SeriesKind::tm(N);
    for (double t = 1e-4; t < 700.0; t *= 1.21) {
      EXPECT_LT(rel(std::exp(log_phi(kind, t)), phi(kind, t)), 1e-10) << N << " " << t;
    }
  }
}

TEST(PhiSmallT, Leading) {
  EXPECT_EQ(phi_small_t_leading(SeriesKind::tm(2)), std::make_pair(1, 1.0));
  const auto [j, c] = phi_small_t_leading(SeriesKind::tm(4));
  EXPECT_EQ(j, 3);
  EXPECT_DOUBLE_EQ(c, 1.0 / 6.0);
  const auto [jf, cf] = phi_small_t_leading(SeriesKind::fractional(3, 1.0));
  EXPECT_EQ(jf, 2);
  EXPECT_DOUBLE_EQ(cf, 0.5);
  // phi(t) / (c t^j) -> 1.
  const auto kind = SeriesKind::tm(4);
  EXPECT_NEAR(phi(kind, 1e-4) / (c * 1e-12), 1.0, 1e-4);
}
