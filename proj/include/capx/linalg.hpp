#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace capx {

// Dense column-major matrix.  Columns are contiguous so the kernels operate
// on them directly.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

  std::span<double> col(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
  std::span<const double> col(std::size_t j) const { return {data_.data() + j * rows_, rows_}; }

  // y = A c
  std::vector<double> apply(std::span<const double> c) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Minimizes sum_i w_i (design_i . c - rhs_i)^2.
//
// The weighted system is column-scaled to unit 2-norm and solved by
// Householder QR with column pivoting; the scaling is undone on the way out.
// A pivot below max(rows, cols) * eps relative to the leading one is treated
// as rank deficiency and raises DegeneracyError listing the dependent
// columns.
std::vector<double> weighted_least_squares(const Matrix& design, std::span<const double> rhs,
                                           std::span<const double> weights);

}  // namespace capx
