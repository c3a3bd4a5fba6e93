#pragma once

// Data-parallel inner loops shared by the fitting and evaluation code.
//
// Every kernel has a scalar reference implementation.  On x86-64 an AVX2
// variant is compiled into a separate translation unit and picked at first
// use when the CPU reports support.  Setting CAPX_SIMD=scalar in the
// environment forces the reference path.
//
// The elementwise kernels (rational_eval, pole_column, clenshaw) evaluate
// the same expression tree per lane as the scalar loop, so both variants
// agree bit for bit.  dot reassociates the sum and agrees only to rounding.

#include <cstddef>
#include <span>
#include <string_view>

namespace capx::kernels {

enum class Isa { scalar, avx2 };

struct MaxAbs {
  double value = 0.0;
  std::size_t index = 0;
};

struct KernelTable {
  Isa isa;
  std::string_view name;

  // out[i] = a0 + sum_k a[k] / (1 + x[i] / eps[k]), k ascending.
  void (*rational_eval)(std::span<const double> x, double a0, std::span<const double> a,
                        std::span<const double> eps, std::span<double> out);
  // out[i] = 1 / (1 + x[i] / eps)
  void (*pole_column)(std::span<const double> x, double eps, std::span<double> out);
  // max_i |a[i] - b[i]| and the first index attaining it.  NaN dominates.
  MaxAbs (*max_abs_diff)(std::span<const double> a, std::span<const double> b);
  double (*dot)(std::span<const double> a, std::span<const double> b);
  // y += alpha * x
  void (*axpy)(double alpha, std::span<const double> x, std::span<double> y);
  // Chebyshev series sum_k c[k] T_k(t[i]) by Clenshaw recurrence.
  void (*clenshaw)(std::span<const double> coeffs, std::span<const double> t,
                   std::span<double> out);
};

const KernelTable& scalar_table();
// nullptr when the AVX2 variant is not compiled in or the CPU lacks it.
const KernelTable* avx2_table();
// Table used by the library; resolved once.
const KernelTable& active();

}  // namespace capx::kernels
