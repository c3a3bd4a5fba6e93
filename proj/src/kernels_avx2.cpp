// Compiled with -mavx2; only reached after a runtime CPU check.
#include <immintrin.h>

#include <cmath>

#include "kernels_impl.hpp"

namespace capx::kernels::avx2 {

namespace {
constexpr std::size_t kLanes = 4;

inline __m256d abs_pd(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}
}  // namespace

void rational_eval(std::span<const double> x, double a0, std::span<const double> a,
                   std::span<const double> eps, std::span<double> out) {
  const std::size_t n = x.size();
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d xv = _mm256_loadu_pd(x.data() + i);
    __m256d acc = _mm256_set1_pd(a0);
    for (std::size_t k = 0; k < a.size(); ++k) {
      const __m256d den = _mm256_add_pd(one, _mm256_div_pd(xv, _mm256_set1_pd(eps[k])));
      acc = _mm256_add_pd(acc, _mm256_div_pd(_mm256_set1_pd(a[k]), den));
    }
    _mm256_storeu_pd(out.data() + i, acc);
  }
  if (i < n) scalar::rational_eval(x.subspan(i), a0, a, eps, out.subspan(i));
}

void pole_column(std::span<const double> x, double eps, std::span<double> out) {
  const std::size_t n = x.size();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d ev = _mm256_set1_pd(eps);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d xv = _mm256_loadu_pd(x.data() + i);
    _mm256_storeu_pd(out.data() + i,
                     _mm256_div_pd(one, _mm256_add_pd(one, _mm256_div_pd(xv, ev))));
  }
  if (i < n) scalar::pole_column(x.subspan(i), eps, out.subspan(i));
}

MaxAbs max_abs_diff(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  if (n < 2 * kLanes) return scalar::max_abs_diff(a, b);

  __m256d best = _mm256_setzero_pd();
  __m256d nan_seen = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d d = abs_pd(_mm256_sub_pd(_mm256_loadu_pd(a.data() + i),
                                           _mm256_loadu_pd(b.data() + i)));
    nan_seen = _mm256_or_pd(nan_seen, _mm256_cmp_pd(d, d, _CMP_UNORD_Q));
    best = _mm256_max_pd(best, d);
  }
  if (_mm256_movemask_pd(nan_seen) != 0) return scalar::max_abs_diff(a, b);

  alignas(32) double lanes[kLanes];
  _mm256_store_pd(lanes, best);
  double m = lanes[0];
  for (std::size_t l = 1; l < kLanes; ++l) m = lanes[l] > m ? lanes[l] : m;
  for (; i < n; ++i) {
    const double d = std::fabs(a[i] - b[i]);
    if (std::isnan(d)) return scalar::max_abs_diff(a, b);
    if (d > m) m = d;
  }

  // Second pass recovers the first index attaining the maximum.
  const __m256d mv = _mm256_set1_pd(m);
  for (i = 0; i + kLanes <= n; i += kLanes) {
    const __m256d d = abs_pd(_mm256_sub_pd(_mm256_loadu_pd(a.data() + i),
                                           _mm256_loadu_pd(b.data() + i)));
    const int mask = _mm256_movemask_pd(_mm256_cmp_pd(d, mv, _CMP_EQ_OQ));
    if (mask != 0) return {m, i + static_cast<std::size_t>(__builtin_ctz(mask))};
  }
  for (; i < n; ++i)
    if (std::fabs(a[i] - b[i]) == m) return {m, i};
  return {m, 0};
}

double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 * kLanes <= n; i += 2 * kLanes) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a.data() + i),
                                             _mm256_loadu_pd(b.data() + i)));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(_mm256_loadu_pd(a.data() + i + kLanes),
                                             _mm256_loadu_pd(b.data() + i + kLanes)));
  }
  acc0 = _mm256_add_pd(acc0, acc1);
  alignas(32) double lanes[kLanes];
  _mm256_store_pd(lanes, acc0);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  const std::size_t n = x.size();
  const __m256d av = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d yv = _mm256_loadu_pd(y.data() + i);
    _mm256_storeu_pd(y.data() + i,
                     _mm256_add_pd(yv, _mm256_mul_pd(av, _mm256_loadu_pd(x.data() + i))));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void clenshaw(std::span<const double> coeffs, std::span<const double> t, std::span<double> out) {
  const std::size_t nc = coeffs.size();
  const std::size_t n = t.size();
  if (nc == 0) {
    scalar::clenshaw(coeffs, t, out);
    return;
  }
  const __m256d two = _mm256_set1_pd(2.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d tv = _mm256_loadu_pd(t.data() + i);
    const __m256d two_t = _mm256_mul_pd(two, tv);
    __m256d b1 = _mm256_setzero_pd();
    __m256d b2 = _mm256_setzero_pd();
    for (std::size_t k = nc - 1; k >= 1; --k) {
      const __m256d bk = _mm256_add_pd(_mm256_set1_pd(coeffs[k]),
                                       _mm256_sub_pd(_mm256_mul_pd(two_t, b1), b2));
      b2 = b1;
      b1 = bk;
    }
    _mm256_storeu_pd(out.data() + i,
                     _mm256_add_pd(_mm256_set1_pd(coeffs[0]),
                                   _mm256_sub_pd(_mm256_mul_pd(tv, b1), b2)));
  }
  if (i < n) scalar::clenshaw(coeffs, t.subspan(i), out.subspan(i));
}

}  // namespace capx::kernels::avx2
