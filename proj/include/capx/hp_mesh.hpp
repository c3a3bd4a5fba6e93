#pragma once

// Graded meshes on [0, 1] with the singularity at x = 0, per-element degree
// strategies and piecewise Chebyshev approximation.

#include <cstddef>
#include <utility>
#include <variant>
#include <vector>

#include "capx/approx.hpp"

namespace capx {

struct DegreeAssignment;

struct Element {
  double lo;
  double hi;
};

class GeometricMesh {
 public:
  enum class Kind { geometric, superexponential };

  Kind kind() const noexcept { return kind_; }
  // Refinement ratio; 0 for super-exponential meshes.
  double rho() const noexcept { return rho_; }
  std::size_t levels() const noexcept { return breakpoints_.size() - 1; }
  // 1 = b_0 > b_1 > ... > b_J > 0
  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  std::size_t element_count() const noexcept { return breakpoints_.size(); }
  // Element 0 is [0, b_J]; element i is [b_{J-i+1}, b_{J-i}].
  Element element(std::size_t i) const;
  // Index of the element owning x; interior breakpoints belong to the
  // element on their right.
  std::size_t locate(double x) const;
  bool experimental() const noexcept { return kind_ == Kind::superexponential; }

 private:
  friend GeometricMesh build_geometric_mesh(double, std::size_t);
  friend std::pair<GeometricMesh, DegreeAssignment> build_superexp_mesh(double, std::size_t, int);
  GeometricMesh(Kind kind, double rho, std::vector<double> breakpoints)
      : kind_(kind), rho_(rho), breakpoints_(std::move(breakpoints)) {}

  Kind kind_;
  double rho_;
  std::vector<double> breakpoints_;
};

// (sqrt(2) - 1)^2, the optimal geometric ratio for sqrt(x).
inline constexpr double kOptimalRho = 0.17157287525380990;

GeometricMesh build_geometric_mesh(double rho, std::size_t levels);

struct LinearTaper {
  double slope;
};
struct UniformDegree {
  int p;
};
using DegreeStrategy = std::variant<LinearTaper, UniformDegree>;

struct DegreeAssignment {
  DegreeStrategy strategy;
  // One entry per element, element 0 (the singular one) first.
  std::vector<int> degrees;
};

// LinearTaper: degree round(slope * i) on element i (halves round away
// from zero).  UniformDegree: p everywhere.
DegreeAssignment assign_degrees(const GeometricMesh& mesh, const DegreeStrategy& strategy);

std::size_t dof_count(const DegreeAssignment& assign);

class HpApproximant {
 public:
  HpApproximant(GeometricMesh mesh, DegreeAssignment degrees,
                std::vector<std::vector<double>> coeffs);

  const GeometricMesh& mesh() const noexcept { return mesh_; }
  const DegreeAssignment& degrees() const noexcept { return degrees_; }
  const std::vector<std::vector<double>>& coeffs() const noexcept { return coeffs_; }

  double operator()(double x) const;
  // Evaluate element i's polynomial (no ownership rule) at each x.
  void eval_element(std::size_t i, std::span<const double> xs, std::span<double> out) const;

 private:
  GeometricMesh mesh_;
  DegreeAssignment degrees_;
  std::vector<std::vector<double>> coeffs_;
};

// Interpolates f at the p+1 second-kind Chebyshev points of each element
// (the midpoint when p = 0).  Throws DataError naming the element if f
// returns NaN.
HpApproximant fit_piecewise_chebyshev(const RealFunction& f, const GeometricMesh& mesh,
                                      const DegreeAssignment& degrees);

// Chebyshev coefficients of the degree-p interpolant on [-1, 1] from
// values at cos(pi j / p), j = 0..p.
std::vector<double> chebyshev_coefficients(std::span<const double> values);

// Elementwise dense-grid error: points_per_element first-kind Chebyshev
// points plus both endpoints on every element.
SupErrorReport hp_sup_error(const HpApproximant& approx, const RealFunction& f,
                            std::size_t points_per_element);

// Best degree-p sup error of f on [lo, hi]: Remez exchange in the variable
// scaled to [-1, 1], extrema searched on a dense grid then refined.
double best_polynomial_error(const RealFunction& f, double lo, double hi, int p);

struct ScalingCheck {
  double lhs;  // E_p(sqrt, [a/2, a])
  double rhs;  // sqrt(a) * E_p(sqrt, [1/2, 1])
};
ScalingCheck scaling_law_check(int p, double a);

// Breakpoints exp(-c j^2), j = 0..J, uniform degree p.  Experimental.
std::pair<GeometricMesh, DegreeAssignment> build_superexp_mesh(double c, std::size_t levels, int p);

}  // namespace capx
