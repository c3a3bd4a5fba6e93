#include "capx/hp_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "capx/error.hpp"
#include "capx/kernels.hpp"

namespace capx {

Element GeometricMesh::element(std::size_t i) const {
  const std::size_t J = levels();
  if (i > J) throw UsageError("GeometricMesh::element: index out of range");
  if (i == 0) return {0.0, breakpoints_[J]};
  return {breakpoints_[J - i + 1], breakpoints_[J - i]};
}

std::size_t GeometricMesh::locate(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("GeometricMesh::locate: x outside [0, 1]");
  const std::size_t J = levels();
  if (x == 1.0) return J;
  // element i (i >= 1) owns [b_{J-i+1}, b_{J-i})
  for (std::size_t i = J; i >= 1; --i)
    if (x >= breakpoints_[J - i + 1]) return i;
  return 0;
}

GeometricMesh build_geometric_mesh(double rho, std::size_t levels) {
  if (!(rho > 0.0 && rho < 1.0)) throw UsageError("build_geometric_mesh: rho must lie in (0, 1)");
  if (levels < 1) throw UsageError("build_geometric_mesh: J must be >= 1");
  std::vector<double> b(levels + 1);
  b[0] = 1.0;
  for (std::size_t j = 1; j <= levels; ++j) b[j] = b[j - 1] * rho;
  if (!(b[levels] > 0.0)) throw UsageError("build_geometric_mesh: rho^J underflows");
  return GeometricMesh(GeometricMesh::Kind::geometric, rho, std::move(b));
}

std::pair<GeometricMesh, DegreeAssignment> build_superexp_mesh(double c, std::size_t levels, int p) {
  if (!(c > 0.0) || !std::isfinite(c)) throw UsageError("build_superexp_mesh: c must be positive");
  if (levels < 1) throw UsageError("build_superexp_mesh: J must be >= 1");
  if (p < 0) throw UsageError("build_superexp_mesh: p must be >= 0");
  const double last = -c * static_cast<double>(levels) * static_cast<double>(levels);
  if (last < std::log(1e-300))
    throw UsageError("build_superexp_mesh: exp(-c J^2) underflows below 1e-300; reduce J or c");
  std::vector<double> b(levels + 1);
  for (std::size_t j = 0; j <= levels; ++j) {
    const double jj = static_cast<double>(j);
    b[j] = std::exp(-c * jj * jj);
  }
  GeometricMesh mesh(GeometricMesh::Kind::superexponential, 0.0, std::move(b));
  DegreeAssignment assign{UniformDegree{p}, std::vector<int>(mesh.element_count(), p)};
  return {std::move(mesh), std::move(assign)};
}

DegreeAssignment assign_degrees(const GeometricMesh& mesh, const DegreeStrategy& strategy) {
  const std::size_t count = mesh.element_count();
  DegreeAssignment out{strategy, std::vector<int>(count, 0)};
  if (const auto* taper = std::get_if<LinearTaper>(&strategy)) {
    if (!(taper->slope > 0.0) || !std::isfinite(taper->slope))
      throw UsageError("assign_degrees: taper slope must be positive");
    for (std::size_t i = 0; i < count; ++i)
      out.degrees[i] = static_cast<int>(std::round(taper->slope * static_cast<double>(i)));
  } else {
    const int p = std::get<UniformDegree>(strategy).p;
    if (p < 0) throw UsageError("assign_degrees: uniform degree must be >= 0");
    std::fill(out.degrees.begin(), out.degrees.end(), p);
  }
  return out;
}

std::size_t dof_count(const DegreeAssignment& assign) {
  std::size_t dof = 0;
  for (int p : assign.degrees) dof += static_cast<std::size_t>(p) + 1;
  return dof;
}

// ---------------------------------------------------------------------------

HpApproximant::HpApproximant(GeometricMesh mesh, DegreeAssignment degrees,
                             std::vector<std::vector<double>> coeffs)
    : mesh_(std::move(mesh)), degrees_(std::move(degrees)), coeffs_(std::move(coeffs)) {
  if (degrees_.degrees.size() != mesh_.element_count() || coeffs_.size() != mesh_.element_count())
    throw UsageError("HpApproximant: element count mismatch");
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    if (coeffs_[i].size() != static_cast<std::size_t>(degrees_.degrees[i]) + 1)
      throw UsageError("HpApproximant: coefficient count does not match degree on element " +
                       std::to_string(i));
}

void HpApproximant::eval_element(std::size_t i, std::span<const double> xs,
                                 std::span<double> out) const {
  const Element e = mesh_.element(i);
  const double mid = 0.5 * (e.lo + e.hi);
  const double half = 0.5 * (e.hi - e.lo);
  std::vector<double> t(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) t[k] = std::clamp((xs[k] - mid) / half, -1.0, 1.0);
  kernels::active().clenshaw(coeffs_[i], t, out);
}

double HpApproximant::operator()(double x) const {
  double out = 0.0;
  eval_element(mesh_.locate(x), std::span<const double>(&x, 1), std::span<double>(&out, 1));
  return out;
}

std::vector<double> chebyshev_coefficients(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n == 0) throw UsageError("chebyshev_coefficients: no values");
  if (n == 1) return {values[0]};
  const std::size_t p = n - 1;
  const double dp = static_cast<double>(p);
  std::vector<double> c(n, 0.0);
  for (std::size_t k = 0; k <= p; ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j <= p; ++j) {
      const double w = (j == 0 || j == p) ? 0.5 : 1.0;
      // reduce j*k mod 2p to keep the cosine argument small
      const double arg = std::numbers::pi * static_cast<double>((j * k) % (2 * p)) / dp;
      s += w * values[j] * std::cos(arg);
    }
    c[k] = 2.0 * s / dp;
  }
  c[0] *= 0.5;
  c[p] *= 0.5;
  return c;
}

HpApproximant fit_piecewise_chebyshev(const RealFunction& f, const GeometricMesh& mesh,
                                      const DegreeAssignment& degrees) {
  if (degrees.degrees.size() != mesh.element_count())
    throw UsageError("fit_piecewise_chebyshev: degree list does not match mesh");
  std::vector<std::vector<double>> coeffs(mesh.element_count());
  for (std::size_t i = 0; i < mesh.element_count(); ++i) {
    const Element e = mesh.element(i);
    const int p = degrees.degrees[i];
    const double mid = 0.5 * (e.lo + e.hi), half = 0.5 * (e.hi - e.lo);
    std::vector<double> vals(static_cast<std::size_t>(p) + 1);
    if (p == 0) {
      vals[0] = f(mid);
    } else {
      // t_j = cos(pi j / p), descending from 1 to -1
      for (int j = 0; j <= p; ++j) {
        const double t = std::cos(std::numbers::pi * j / p);
        double x = mid + half * t;
        if (j == 0) x = e.hi;
        if (j == p) x = e.lo;
        vals[static_cast<std::size_t>(j)] = f(x);
      }
    }
    for (double v : vals)
      if (std::isnan(v)) {
        std::ostringstream os;
        os << "fit_piecewise_chebyshev: f returned NaN on element " << i << " [" << e.lo << ", "
           << e.hi << "]";
        throw DataError(os.str());
      }
    coeffs[i] = chebyshev_coefficients(vals);
  }
  return HpApproximant(mesh, degrees, std::move(coeffs));
}

SupErrorReport hp_sup_error(const HpApproximant& approx, const RealFunction& f,
                            std::size_t points_per_element) {
  if (points_per_element < 10) throw UsageError("hp_sup_error: points_per_element must be >= 10");
  const auto& mesh = approx.mesh();
  SupErrorReport best;
  bool first = true;
  std::vector<double> xs(points_per_element + 2), a(points_per_element + 2),
      t(points_per_element + 2);
  for (std::size_t i = 0; i < mesh.element_count(); ++i) {
    const Element e = mesh.element(i);
    const double mid = 0.5 * (e.lo + e.hi), half = 0.5 * (e.hi - e.lo);
    xs[0] = e.lo;
    for (std::size_t j = 0; j < points_per_element; ++j)
      xs[j + 1] = mid - half * std::cos(std::numbers::pi * (static_cast<double>(j) + 0.5) /
                                        static_cast<double>(points_per_element));
    xs.back() = e.hi;
    approx.eval_element(i, xs, a);
    for (std::size_t j = 0; j < xs.size(); ++j) t[j] = f(xs[j]);
    const auto rep = sup_error_sampled(a, t, xs);
    if (first || rep.sup_error > best.sup_error) {
      best.sup_error = rep.sup_error;
      best.argmax_point = rep.argmax_point;
      first = false;
    }
    best.grid_size += xs.size();
  }
  return best;
}

namespace {

// Chebyshev series value and the first p+1 basis values at t.
double cheb_sum(std::span<const double> c, double t) {
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t k = c.size(); k-- > 1;) {
    const double b0 = c[k] + (2.0 * t * b1 - b2);
    b2 = b1;
    b1 = b0;
  }
  return c[0] + (t * b1 - b2);
}

// Golden-section search for the largest s*e(t) on [a, b].
template <class E>
double refine_extremum(const E& e, double sign, double a, double b) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = sign * e(c), fd = sign * e(d);
  for (int it = 0; it < 80 && b - a > 1e-15; ++it) {
    if (fc > fd) {
      b = d, d = c, fd = fc;
      c = b - g * (b - a), fc = sign * e(c);
    } else {
      a = c, c = d, fc = fd;
      d = a + g * (b - a), fd = sign * e(d);
    }
  }
  return fc > fd ? c : d;
}

}  // namespace

double best_polynomial_error(const RealFunction& f, double lo, double hi, int p) {
  if (p < 0) throw UsageError("best_polynomial_error: p must be >= 0");
  if (!(hi > lo)) throw UsageError("best_polynomial_error: empty interval");
  // Remez exchange in t in [-1, 1] with Chebyshev coefficients.  Extrema are
  // located on a dense grid and sharpened by golden-section search.
  const double width = hi - lo;
  auto g = [&](double t) { return f(lo + width * ((t + 1.0) * 0.5)); };
  const std::size_t n = static_cast<std::size_t>(p) + 2;
  std::vector<double> ref(n);
  for (std::size_t i = 0; i < n; ++i)
    ref[i] = -std::cos(std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1));

  const std::size_t m = std::max<std::size_t>(2000, 200 * n);
  std::vector<double> grid(m + 1);
  for (std::size_t j = 0; j <= m; ++j)
    grid[j] = -std::cos(std::numbers::pi * static_cast<double>(j) / static_cast<double>(m));
  grid.front() = -1.0;
  grid.back() = 1.0;

  std::vector<double> coeffs(n - 1, 0.0);
  double level = 0.0, best_max = INFINITY;
  const std::vector<double> unit(n, 1.0);
  for (int iter = 0; iter < 60; ++iter) {
    Matrix a(n, n);
    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
      double tkm1 = 1.0, tk = ref[i];
      a(i, 0) = 1.0;
      for (std::size_t k = 1; k + 1 < n; ++k) {
        a(i, k) = tk;
        const double next = 2.0 * ref[i] * tk - tkm1;
        tkm1 = tk;
        tk = next;
      }
      a(i, n - 1) = (i % 2 == 0) ? 1.0 : -1.0;
      rhs[i] = g(ref[i]);
    }
    const auto sol = weighted_least_squares(a, rhs, unit);
    std::copy(sol.begin(), sol.end() - 1, coeffs.begin());
    level = std::fabs(sol.back());
    auto err = [&](double t) { return g(t) - cheb_sum(coeffs, t); };

    // Signed extrema, one per run of constant sign on the grid.
    std::vector<double> ext_t, ext_v;
    std::size_t j = 0;
    while (j <= m) {
      const double s0 = err(grid[j]) >= 0.0 ? 1.0 : -1.0;
      std::size_t arg = j;
      double val = s0 * err(grid[j]);
      std::size_t k = j + 1;
      for (; k <= m; ++k) {
        const double v = err(grid[k]);
        if ((v >= 0.0 ? 1.0 : -1.0) != s0) break;
        if (s0 * v > val) val = s0 * v, arg = k;
      }
      const double a_lo = grid[arg == 0 ? 0 : arg - 1], a_hi = grid[arg == m ? m : arg + 1];
      double t = refine_extremum(err, s0, a_lo, a_hi);
      if (s0 * err(t) < val) t = grid[arg];
      ext_t.push_back(t);
      ext_v.push_back(err(t));
      j = k;
    }
    double emax = 0.0;
    for (double v : ext_v) emax = std::max(emax, std::fabs(v));
    best_max = std::min(best_max, emax);
    if (ext_t.size() < n || emax - level <= 1e-14 * emax) break;

    // Keep n alternating extrema that include the largest one.
    while (ext_t.size() > n) {
      const std::size_t last = ext_t.size() - 1;
      std::size_t imax = 0;
      for (std::size_t i = 1; i < ext_v.size(); ++i)
        if (std::fabs(ext_v[i]) > std::fabs(ext_v[imax])) imax = i;
      const bool drop_front =
          imax != 0 && (imax == last || std::fabs(ext_v.front()) < std::fabs(ext_v.back()));
      const std::size_t d = drop_front ? 0 : last;
      ext_t.erase(ext_t.begin() + static_cast<std::ptrdiff_t>(d));
      ext_v.erase(ext_v.begin() + static_cast<std::ptrdiff_t>(d));
    }
    ref = ext_t;
  }
  return best_max;
}

ScalingCheck scaling_law_check(int p, double a) {
  if (p < 0) throw UsageError("scaling_law_check: p must be >= 0");
  if (!(a > 0.0 && a <= 1.0)) throw UsageError("scaling_law_check: a must lie in (0, 1]");
  const RealFunction root = [](double x) { return std::sqrt(x); };
  ScalingCheck out;
  out.lhs = best_polynomial_error(root, 0.5 * a, a, p);
  out.rhs = std::sqrt(a) * best_polynomial_error(root, 0.5, 1.0, p);
  return out;
}

}  // namespace capx
