// AVX2 + FMA variants of the log-domain kernels. This translation unit is
// compiled with -mavx2 -mfma and must only be entered after a runtime CPU
// check (see kernels.cpp).

#include <cmath>
#include <limits>

#include "sharplab/kernels.hpp"
#include "sharplab/special_constants.hpp"

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>

namespace sharplab::kernels::avx2 {

namespace {

constexpr double kLn2Hi = 6.93147180369123816490e-01;
constexpr double kLn2Lo = 1.90821492927058770002e-10;
constexpr double kLog2e = 1.44269504088896338700e+00;
constexpr double kExpHi = 709.782712893384;
constexpr double kExpLo = -745.1332191019412;
constexpr double kInf = std::numeric_limits<double>::infinity();

inline __m256d set1(double v) { return _mm256_set1_pd(v); }

// 2^k for integral k in [-1022, 1023].
inline __m256d pow2(__m256d k) {
  const __m256d shifted = _mm256_add_pd(k, set1(1023.0 + 0x1.8p52));
  return _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_castpd_si256(shifted), 52));
}

inline __m256d exp_pd(__m256d x) {
  const __m256d k = _mm256_round_pd(_mm256_mul_pd(x, set1(kLog2e)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(k, set1(kLn2Hi), x);
  r = _mm256_fnmadd_pd(k, set1(kLn2Lo), r);

  // Taylor polynomial through r^13; |r| <= ln2/2.
  __m256d p = set1(1.0 / 6227020800.0);
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 479001600.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 39916800.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 3628800.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 362880.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 40320.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 5040.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 720.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 120.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 24.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 6.0));
  p = _mm256_fmadd_pd(p, r, set1(0.5));
  p = _mm256_fmadd_pd(p, r, set1(1.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0));

  // Split the scale so results near the overflow and subnormal edges stay exact.
  const __m256d k1 = _mm256_floor_pd(_mm256_mul_pd(k, set1(0.5)));
  const __m256d k2 = _mm256_sub_pd(k, k1);
  __m256d res = _mm256_mul_pd(_mm256_mul_pd(p, pow2(k1)), pow2(k2));

  res = _mm256_blendv_pd(res, set1(kInf), _mm256_cmp_pd(x, set1(kExpHi), _CMP_GT_OQ));
  res = _mm256_blendv_pd(res, _mm256_setzero_pd(), _mm256_cmp_pd(x, set1(kExpLo), _CMP_LT_OQ));
  res = _mm256_blendv_pd(res, x, _mm256_cmp_pd(x, x, _CMP_UNORD_Q));
  return res;
}

// Natural log, fdlibm reduction and minimax polynomial.
inline __m256d log_pd(__m256d x) {
  constexpr double kLg1 = 6.666666666666735130e-01;
  constexpr double kLg2 = 3.999999999940941908e-01;
  constexpr double kLg3 = 2.857142874366239149e-01;
  constexpr double kLg4 = 2.222219843214978396e-01;
  constexpr double kLg5 = 1.818357216161805012e-01;
  constexpr double kLg6 = 1.531383769920937332e-01;
  constexpr double kLg7 = 1.479819860511658591e-01;

  // Lift subnormals into the normal range.
  const __m256d tiny = _mm256_cmp_pd(x, set1(0x1p-1022), _CMP_LT_OQ);
  const __m256d xs = _mm256_blendv_pd(x, _mm256_mul_pd(x, set1(0x1p54)), tiny);
  const __m256d e_adj = _mm256_blendv_pd(_mm256_setzero_pd(), set1(-54.0), tiny);

  const __m256i bits = _mm256_castpd_si256(xs);
  const __m256i raw_exp = _mm256_srli_epi64(bits, 52);
  const __m256d magic = set1(0x1p52);
  __m256d e = _mm256_sub_pd(
      _mm256_castsi256_pd(_mm256_or_si256(raw_exp, _mm256_castpd_si256(magic))), magic);
  e = _mm256_add_pd(_mm256_sub_pd(e, set1(1023.0)), e_adj);

  const __m256i mant_bits = _mm256_or_si256(
      _mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL)),
      _mm256_set1_epi64x(0x3FF0000000000000LL));
  __m256d m = _mm256_castsi256_pd(mant_bits);
  const __m256d big = _mm256_cmp_pd(m, set1(1.4142135623730951), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, set1(0.5)), big);
  e = _mm256_add_pd(e, _mm256_and_pd(big, set1(1.0)));

  const __m256d f = _mm256_sub_pd(m, set1(1.0));
  const __m256d s = _mm256_div_pd(f, _mm256_add_pd(set1(2.0), f));
  const __m256d z = _mm256_mul_pd(s, s);
  const __m256d w = _mm256_mul_pd(z, z);
  const __m256d t1 =
      _mm256_mul_pd(w, _mm256_fmadd_pd(w, _mm256_fmadd_pd(w, set1(kLg6), set1(kLg4)), set1(kLg2)));
  const __m256d t2 = _mm256_mul_pd(
      z, _mm256_fmadd_pd(
             w, _mm256_fmadd_pd(w, _mm256_fmadd_pd(w, set1(kLg7), set1(kLg5)), set1(kLg3)),
             set1(kLg1)));
  const __m256d R = _mm256_add_pd(t2, t1);
  const __m256d hfsq = _mm256_mul_pd(set1(0.5), _mm256_mul_pd(f, f));
  // e*ln2_hi - ((hfsq - (s*(hfsq+R) + e*ln2_lo)) - f)
  const __m256d inner = _mm256_fmadd_pd(e, set1(kLn2Lo), _mm256_mul_pd(s, _mm256_add_pd(hfsq, R)));
  __m256d res = _mm256_fmsub_pd(e, set1(kLn2Hi), _mm256_sub_pd(_mm256_sub_pd(hfsq, inner), f));

  res = _mm256_blendv_pd(res, set1(-kInf), _mm256_cmp_pd(x, _mm256_setzero_pd(), _CMP_EQ_OQ));
  res = _mm256_blendv_pd(res, set1(kInf), _mm256_cmp_pd(x, set1(kInf), _CMP_EQ_OQ));
  res = _mm256_blendv_pd(res, set1(std::numeric_limits<double>::quiet_NaN()),
                         _mm256_cmp_pd(x, _mm256_setzero_pd(), _CMP_NGE_UQ));
  return res;
}

// log(1 - r) for r in [0, 1).
inline __m256d log1m_pd(__m256d r) {
  const __m256d u = _mm256_sub_pd(set1(1.0), r);
  const __m256d um1 = _mm256_sub_pd(u, set1(1.0));
  const __m256d exact = _mm256_cmp_pd(um1, _mm256_setzero_pd(), _CMP_EQ_OQ);
  const __m256d safe_um1 = _mm256_blendv_pd(um1, set1(-1.0), exact);
  const __m256d corrected = _mm256_div_pd(_mm256_mul_pd(log_pd(u), _mm256_sub_pd(_mm256_setzero_pd(), r)), safe_um1);
  return _mm256_blendv_pd(corrected, _mm256_sub_pd(_mm256_setzero_pd(), r), exact);
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

}  // namespace

void log_abs_pow(std::span<const double> x, double p, std::span<double> out) {
  const std::size_t n = x.size();
  const __m256d sign = set1(-0.0);
  const __m256d pv = set1(p);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_andnot_pd(sign, _mm256_loadu_pd(x.data() + i));
    _mm256_storeu_pd(out.data() + i, _mm256_mul_pd(pv, log_pd(v)));
  }
  ref::log_abs_pow(x.subspan(i), p, out.subspan(i));
}

void exp_batch(std::span<const double> x, std::span<double> out) {
  const std::size_t n = x.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out.data() + i, exp_pd(_mm256_loadu_pd(x.data() + i)));
  }
  ref::exp_batch(x.subspan(i), out.subspan(i));
}

void log_phi_batch(int start, std::span<const double> log_t, std::span<double> out) {
  const std::size_t n = log_t.size();
  const __m256d neg_inf = set1(-kInf);
  const double log_fact_start = detail::log_factorial(start);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d lt = _mm256_loadu_pd(log_t.data() + i);
    const __m256d zero_arg = _mm256_cmp_pd(lt, neg_inf, _CMP_EQ_OQ);
    const __m256d lts = _mm256_blendv_pd(lt, _mm256_setzero_pd(), zero_arg);
    const __m256d t = exp_pd(lts);

    // Fraction of e^t removed by the truncation.
    __m256d removed = _mm256_setzero_pd();
    for (int j = 0; j < start; ++j) {
      const __m256d arg = _mm256_sub_pd(_mm256_fmsub_pd(set1(j), lts, t), set1(detail::log_factorial(j)));
      removed = _mm256_add_pd(removed, exp_pd(arg));
    }
    const __m256d use_exp = _mm256_cmp_pd(removed, set1(0.5), _CMP_LE_OQ);
    __m256d res = _mm256_add_pd(t, log1m_pd(_mm256_min_pd(removed, set1(0.5))));

    if (_mm256_movemask_pd(use_exp) != 0xF) {
      const __m256d series_lanes = _mm256_andnot_pd(use_exp, _mm256_castsi256_pd(_mm256_set1_epi64x(-1)));
      __m256d term = set1(1.0);
      __m256d sum = _mm256_setzero_pd();
      for (int k = 0; k < 100000; ++k) {
        sum = _mm256_add_pd(sum, term);
        term = _mm256_mul_pd(term, _mm256_div_pd(t, set1(static_cast<double>(start + k + 1))));
        const __m256d going = _mm256_and_pd(
            series_lanes, _mm256_cmp_pd(term, _mm256_mul_pd(set1(1e-17), sum), _CMP_GE_OQ));
        if (_mm256_movemask_pd(going) == 0) break;
      }
      const __m256d series =
          _mm256_add_pd(_mm256_fmsub_pd(set1(start), lts, set1(log_fact_start)), log_pd(sum));
      res = _mm256_blendv_pd(series, res, use_exp);
    }
    res = _mm256_blendv_pd(res, start == 0 ? _mm256_setzero_pd() : neg_inf, zero_arg);
    _mm256_storeu_pd(out.data() + i, res);
  }
  ref::log_phi_batch(start, log_t.subspan(i), out.subspan(i));
}

double log_sum_exp(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n == 0) return -kInf;
  __m256d vmax = set1(-kInf);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) vmax = _mm256_max_pd(vmax, _mm256_loadu_pd(x.data() + i));
  double m = hmax(vmax);
  for (std::size_t j = i; j < n; ++j) m = std::max(m, x[j]);
  if (std::isinf(m) || std::isnan(m)) return m;

  const __m256d mv = set1(m);
  __m256d acc = _mm256_setzero_pd();
  for (i = 0; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, exp_pd(_mm256_sub_pd(_mm256_loadu_pd(x.data() + i), mv)));
  }
  double sum = hsum(acc);
  for (std::size_t j = i; j < n; ++j) sum += std::exp(x[j] - m);
  return m + std::log(sum);
}

}  // namespace sharplab::kernels::avx2

#else  // no AVX2 at compile time: forward to the reference kernels.

namespace sharplab::kernels::avx2 {
void log_abs_pow(std::span<const double> x, double p, std::span<double> out) { ref::log_abs_pow(x, p, out); }
void exp_batch(std::span<const double> x, std::span<double> out) { ref::exp_batch(x, out); }
void log_phi_batch(int start, std::span<const double> log_t, std::span<double> out) {
  ref::log_phi_batch(start, log_t, out);
}
double log_sum_exp(std::span<const double> x) { return ref::log_sum_exp(x); }
}  // namespace sharplab::kernels::avx2

#endif
