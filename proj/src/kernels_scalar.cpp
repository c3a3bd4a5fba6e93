#include "capx/kernels.hpp"

#include <cmath>

#include "kernels_impl.hpp"

namespace capx::kernels::scalar {

void rational_eval(std::span<const double> x, double a0, std::span<const double> a,
                   std::span<const double> eps, std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    double acc = a0;
    for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] / (1.0 + x[i] / eps[k]);
    out[i] = acc;
  }
}

void pole_column(std::span<const double> x, double eps, std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = 1.0 / (1.0 + x[i] / eps);
}

MaxAbs max_abs_diff(std::span<const double> a, std::span<const double> b) {
  MaxAbs best{};
  bool first = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = std::fabs(a[i] - b[i]);
    if (std::isnan(d)) return {d, i};
    if (first || d > best.value) {
      best = {d, i};
      first = false;
    }
  }
  return best;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void clenshaw(std::span<const double> coeffs, std::span<const double> t, std::span<double> out) {
  const std::size_t n = coeffs.size();
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (n == 0) {
      out[i] = 0.0;
      continue;
    }
    const double two_t = 2.0 * t[i];
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t k = n - 1; k >= 1; --k) {
      const double bk = coeffs[k] + (two_t * b1 - b2);
      b2 = b1;
      b1 = bk;
    }
    out[i] = coeffs[0] + (t[i] * b1 - b2);
  }
}

}  // namespace capx::kernels::scalar
