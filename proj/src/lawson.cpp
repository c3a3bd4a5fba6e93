#include <algorithm>
#include <cmath>

#include "capx/approx.hpp"
#include "capx/error.hpp"
#include "capx/kernels.hpp"

namespace capx {

LawsonResult lawson_minimax_fit(const Matrix& design, std::span<const double> target_values,
                                std::span<const double> grid, const LawsonOptions& opts) {
  const std::size_t m = design.rows();
  if (grid.size() != m || target_values.size() != m)
    throw UsageError("lawson_minimax_fit: grid/target size does not match design");
  if (m < 2 * design.cols())
    throw UsageError("lawson_minimax_fit: grid must have at least twice as many points as basis functions");
  if (opts.max_iters < 1) throw UsageError("lawson_minimax_fit: max_iters must be >= 1");

  std::vector<double> w(m, 1.0 / static_cast<double>(m));
  LawsonResult res;
  double prev = 0.0;

  for (int it = 0; it < opts.max_iters; ++it) {
    std::vector<double> c;
    try {
      c = weighted_least_squares(design, target_values, w);
    } catch (const DegeneracyError&) {
      if (it == 0) throw;
      break;
    }
    const auto fitted = design.apply(c);
    const auto rep = sup_error_sampled(fitted, target_values, grid);
    res.iterations = it + 1;
    if (it == 0 || rep.sup_error < res.report.sup_error) {
      res.coefficients = c;
      res.report = rep;
    }
    res.best_history.push_back(res.report.sup_error);

    if (it > 0 && std::fabs(rep.sup_error - prev) < opts.tol * prev) {
      res.converged = true;
      break;
    }
    prev = rep.sup_error;
    if (rep.sup_error == 0.0) {
      res.converged = true;
      break;
    }

    double wsum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      w[i] = std::max(w[i] * std::fabs(fitted[i] - target_values[i]), opts.weight_floor);
      wsum += w[i];
    }
    for (auto& wi : w) wi /= wsum;
  }
  return res;
}

LawsonResult lawson_minimax_fit(std::span<const BasisFunction> basis, const RealFunction& target,
                                std::span<const double> grid, const LawsonOptions& opts) {
  if (basis.empty()) throw UsageError("lawson_minimax_fit: empty basis");
  if (grid.size() < 2 * basis.size())
    throw UsageError("lawson_minimax_fit: grid must have at least twice as many points as basis functions");
  const Matrix a = build_design(basis, grid);
  std::vector<double> t(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    t[i] = target(grid[i]);
    if (std::isnan(t[i]))
      throw DataError("lawson_minimax_fit: target is NaN at x = " + std::to_string(grid[i]));
  }
  return lawson_minimax_fit(a, t, grid, opts);
}

}  // namespace capx
