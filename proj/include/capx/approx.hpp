#pragma once

// Partial-fraction approximants, sup-norm error measurement, linear minimax
// fitting over a fixed basis and exp(-C sqrt(n)) rate fitting.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "capx/linalg.hpp"

namespace capx {

using RealFunction = std::function<double(double)>;

// One function of a linear basis.  `batch`, when set, must agree with
// `value` pointwise; it lets the design matrix be filled by the kernels.
struct BasisFunction {
  RealFunction value;
  std::function<void(std::span<const double>, std::span<double>)> batch;

  double operator()(double x) const { return value(x); }
  void eval_into(std::span<const double> xs, std::span<double> out) const;
};

struct PoleTerm {
  double coeff;
  double eps;  // pole sits at x = -eps
};

// a0 + sum_k a_k / (1 + x / eps_k), with eps strictly increasing.
class RationalApproximant {
 public:
  RationalApproximant() = default;
  RationalApproximant(double a0, std::vector<PoleTerm> terms);

  double a0() const noexcept { return a0_; }
  const std::vector<PoleTerm>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }

  std::vector<double> coeffs() const;
  std::vector<double> eps() const;

 private:
  double a0_ = 0.0;
  std::vector<PoleTerm> terms_;
};

double eval_rational(const RationalApproximant& r, double x);
void eval_rational(const RationalApproximant& r, std::span<const double> xs,
                   std::span<double> out);

struct SupErrorReport {
  double sup_error = 0.0;
  double argmax_point = 0.0;
  std::size_t grid_size = 0;
};

SupErrorReport sup_error(const RealFunction& approx, const RealFunction& target,
                         std::span<const double> grid);
// Same, for values already sampled on the grid.
SupErrorReport sup_error_sampled(std::span<const double> approx_values,
                                 std::span<const double> target_values,
                                 std::span<const double> grid);

Matrix build_design(std::span<const BasisFunction> basis, std::span<const double> grid);

struct LawsonOptions {
  int max_iters = 400;
  // Stop once |e_k - e_{k-1}| < tol * e_{k-1}.
  double tol = 1e-9;
  double weight_floor = 1e-300;
};

struct LawsonResult {
  std::vector<double> coefficients;  // best iterate
  SupErrorReport report;             // error of the best iterate
  int iterations = 0;
  bool converged = false;
  // Sup error of the best-so-far iterate after each pass.
  std::vector<double> best_history;
};

// Lawson iteration: iteratively reweighted least squares whose weights are
// multiplied by the current absolute residual each pass.  Pass 0 is the
// plain unweighted fit.  Rank deficiency on pass 0 propagates as
// DegeneracyError; on a later pass the best iterate so far is returned with
// converged = false.
LawsonResult lawson_minimax_fit(std::span<const BasisFunction> basis, const RealFunction& target,
                                std::span<const double> grid, const LawsonOptions& opts = {});
LawsonResult lawson_minimax_fit(const Matrix& design, std::span<const double> target_values,
                                std::span<const double> grid, const LawsonOptions& opts = {});

struct RatePoint {
  double n;
  double err;
};

struct RateFit {
  double C = 0.0;
  double log_intercept = 0.0;
  double r_squared = 0.0;
};

// Least-squares line through (sqrt(n), log err); C is the negated slope.
RateFit fit_rate(std::span<const RatePoint> table);

}  // namespace capx
