#include "capx/approx.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "capx/error.hpp"
#include "capx/kernels.hpp"

namespace capx {

void BasisFunction::eval_into(std::span<const double> xs, std::span<double> out) const {
  if (batch) {
    batch(xs, out);
    return;
  }
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = value(xs[i]);
}

RationalApproximant::RationalApproximant(double a0, std::vector<PoleTerm> terms)
    : a0_(a0), terms_(std::move(terms)) {
  if (!std::isfinite(a0_)) throw DomainError("RationalApproximant: non-finite a0");
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    const auto& t = terms_[k];
    if (!std::isfinite(t.coeff) || !std::isfinite(t.eps))
      throw DomainError("RationalApproximant: non-finite term " + std::to_string(k));
    if (!(t.eps > 0.0))
      throw DomainError("RationalApproximant: eps must be positive (term " + std::to_string(k) + ")");
    if (k > 0 && !(t.eps > terms_[k - 1].eps))
      throw DomainError("RationalApproximant: eps must be strictly increasing (term " +
                        std::to_string(k) + ")");
  }
}

std::vector<double> RationalApproximant::coeffs() const {
  std::vector<double> c;
  c.reserve(terms_.size());
  for (const auto& t : terms_) c.push_back(t.coeff);
  return c;
}

std::vector<double> RationalApproximant::eps() const {
  std::vector<double> e;
  e.reserve(terms_.size());
  for (const auto& t : terms_) e.push_back(t.eps);
  return e;
}

double eval_rational(const RationalApproximant& r, double x) {
  if (std::isnan(x)) throw DomainError("eval_rational: NaN argument");
  double acc = r.a0();
  for (const auto& t : r.terms()) {
    const double den = 1.0 + x / t.eps;
    if (den == 0.0) throw DomainError("eval_rational: x coincides with a pole");
    acc += t.coeff / den;
  }
  return acc;
}

void eval_rational(const RationalApproximant& r, std::span<const double> xs,
                   std::span<double> out) {
  if (out.size() != xs.size()) throw UsageError("eval_rational: output length mismatch");
  for (double x : xs)
    if (!(x >= 0.0)) throw DomainError("eval_rational: batch arguments must be >= 0");
  const auto a = r.coeffs();
  const auto e = r.eps();
  kernels::active().rational_eval(xs, r.a0(), a, e, out);
}

SupErrorReport sup_error_sampled(std::span<const double> approx_values,
                                 std::span<const double> target_values,
                                 std::span<const double> grid) {
  if (grid.empty()) throw UsageError("sup_error: empty grid");
  if (approx_values.size() != grid.size() || target_values.size() != grid.size())
    throw UsageError("sup_error: sample count does not match grid");
  const auto m = kernels::active().max_abs_diff(approx_values, target_values);
  if (std::isnan(m.value)) {
    std::ostringstream os;
    os << "sup_error: NaN at grid point " << m.index << " (x = " << grid[m.index] << ")";
    throw DataError(os.str());
  }
  return {m.value, grid[m.index], grid.size()};
}

SupErrorReport sup_error(const RealFunction& approx, const RealFunction& target,
                         std::span<const double> grid) {
  if (grid.empty()) throw UsageError("sup_error: empty grid");
  std::vector<double> a(grid.size()), t(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    a[i] = approx(grid[i]);
    t[i] = target(grid[i]);
  }
  return sup_error_sampled(a, t, grid);
}

Matrix build_design(std::span<const BasisFunction> basis, std::span<const double> grid) {
  Matrix a(grid.size(), basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    basis[j].eval_into(grid, a.col(j));
    for (double v : a.col(j))
      if (!std::isfinite(v))
        throw DataError("build_design: basis function " + std::to_string(j) +
                        " is not finite on the grid");
  }
  return a;
}

RateFit fit_rate(std::span<const RatePoint> table) {
  std::vector<double> xs, ys;
  for (const auto& p : table) {
    if (!(p.err > 0.0) || !std::isfinite(p.err))
      throw UsageError("fit_rate: errors must be positive and finite");
    if (!(p.n > 0.0)) throw UsageError("fit_rate: n must be positive");
    xs.push_back(std::sqrt(p.n));
    ys.push_back(std::log(p.err));
  }
  if (xs.size() < 3) throw UsageError("fit_rate: need at least 3 points");

  const double cnt = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= cnt;
  my /= cnt;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw UsageError("fit_rate: all n identical");

  const double slope = sxy / sxx;
  RateFit fit;
  fit.C = -slope;
  fit.log_intercept = my - slope * mx;
  if (syy == 0.0) {
    fit.r_squared = 1.0;
  } else {
    double ssres = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double r = ys[i] - (fit.log_intercept + slope * xs[i]);
      ssres += r * r;
    }
    fit.r_squared = std::clamp(1.0 - ssres / syy, 0.0, 1.0);
  }
  return fit;
}

}  // namespace capx
