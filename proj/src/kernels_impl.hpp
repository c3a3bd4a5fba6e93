#pragma once

#include "capx/kernels.hpp"

namespace capx::kernels {

namespace scalar {
void rational_eval(std::span<const double>, double, std::span<const double>,
                   std::span<const double>, std::span<double>);
void pole_column(std::span<const double>, double, std::span<double>);
MaxAbs max_abs_diff(std::span<const double>, std::span<const double>);
double dot(std::span<const double>, std::span<const double>);
void axpy(double, std::span<const double>, std::span<double>);
void clenshaw(std::span<const double>, std::span<const double>, std::span<double>);
}  // namespace scalar

namespace avx2 {
void rational_eval(std::span<const double>, double, std::span<const double>,
                   std::span<const double>, std::span<double>);
void pole_column(std::span<const double>, double, std::span<double>);
MaxAbs max_abs_diff(std::span<const double>, std::span<const double>);
double dot(std::span<const double>, std::span<const double>);
void axpy(double, std::span<const double>, std::span<double>);
void clenshaw(std::span<const double>, std::span<const double>, std::span<double>);
}  // namespace avx2

}  // namespace capx::kernels
