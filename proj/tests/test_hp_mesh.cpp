#include <doctest.h>

#include <cmath>
#include <numbers>

#include "capx/error.hpp"
#include "capx/hp_mesh.hpp"

using namespace capx;

namespace {
double root(double x) { return std::sqrt(x); }
}

TEST_CASE("geometric mesh examples") {
  auto m = build_geometric_mesh(0.5, 2);
  REQUIRE(m.breakpoints() == std::vector<double>{1.0, 0.5, 0.25});
  REQUIRE(m.element_count() == 3);
  CHECK(m.element(0).lo == 0.0);
  CHECK(m.element(0).hi == 0.25);
  CHECK(m.element(1).lo == 0.25);
  CHECK(m.element(1).hi == 0.5);
  CHECK(m.element(2).lo == 0.5);
  CHECK(m.element(2).hi == 1.0);

  auto m1 = build_geometric_mesh(0.172, 1);
  CHECK(m1.element_count() == 2);
  CHECK(m1.element(0).hi == 0.172);
  CHECK(m1.element(1).lo == 0.172);
  for (double rho : {0.1, 0.5, 0.9}) CHECK(build_geometric_mesh(rho, 1).element_count() == 2);
  CHECK_THROWS_AS(build_geometric_mesh(1.0, 3), UsageError);
  CHECK_THROWS_AS(build_geometric_mesh(0.5, 0), UsageError);
  CHECK_THROWS_AS(build_geometric_mesh(0.01, 200), UsageError);
}

TEST_CASE("mesh locate respects element ownership") {
  auto m = build_geometric_mesh(0.5, 3);
  CHECK(m.locate(0.0) == 0);
  CHECK(m.locate(0.125) == 1);
  CHECK(m.locate(0.2) == 1);
  CHECK(m.locate(0.5) == 3);
  CHECK(m.locate(1.0) == 3);
  CHECK_THROWS_AS(m.locate(1.5), DomainError);
}

TEST_CASE("degree assignment examples") {
  auto m = build_geometric_mesh(0.5, 4);
  CHECK(assign_degrees(m, LinearTaper{1.0}).degrees == std::vector<int>{0, 1, 2, 3, 4});
  CHECK(assign_degrees(m, UniformDegree{3}).degrees == std::vector<int>{3, 3, 3, 3, 3});
  // Halves round away from zero: 0.5 -> 1, 1.5 -> 2.
  CHECK(assign_degrees(m, LinearTaper{0.5}).degrees == std::vector<int>{0, 1, 1, 2, 2});
}

TEST_CASE("dof examples") {
  auto m4 = build_geometric_mesh(0.5, 4);
  CHECK(dof_count(assign_degrees(m4, LinearTaper{1.0})) == 15);
  CHECK(dof_count(assign_degrees(m4, UniformDegree{3})) == 20);
  CHECK(dof_count(assign_degrees(build_geometric_mesh(0.5, 1), UniformDegree{0})) == 2);
}

TEST_CASE("chebyshev coefficients of known polynomials") {
  // T2 sampled at cos(pi j / 2): 1, -1, 1
  std::vector<double> v{1.0, -1.0, 1.0};
  auto c = chebyshev_coefficients(v);
  CHECK(c[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(std::fabs(c[1]) < 1e-15);
  CHECK(c[2] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("piecewise interpolation reproduces polynomials") {
  auto poly = [](double x) { return 1.0 - 2.0 * x + 0.5 * x * x * x; };
  auto m = build_geometric_mesh(0.5, 6);
  auto assign = assign_degrees(m, UniformDegree{3});
  auto hp = fit_piecewise_chebyshev(poly, m, assign);
  double e = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double x = i / 9999.0;
    e = std::max(e, std::fabs(hp(x) - poly(x)));
  }
  CHECK(e <= 1e-13);
  CHECK(hp_sup_error(hp, poly, 50).sup_error <= 1e-13);
}

TEST_CASE("degree-0 element interpolates at the midpoint") {
  const double h = 0.01;
  auto m = build_geometric_mesh(h, 1);
  auto assign = assign_degrees(m, UniformDegree{0});
  auto hp = fit_piecewise_chebyshev(root, m, assign);
  CHECK(hp.coeffs()[0][0] == doctest::Approx(std::sqrt(h / 2)).epsilon(1e-15));
  double e = 0.0;
  for (int i = 0; i < 1000; ++i) e = std::max(e, std::fabs(hp(h * i / 1000.0) - root(h * i / 1000.0)));
  CHECK(e <= std::sqrt(h) * 0.71);
}

TEST_CASE("degree-0 everywhere on two elements") {
  // Element 0 = [0, 1/2] holds sqrt(1/4) and misses by 1/2 at x = 0;
  // element 1 holds sqrt(3/4) and misses by 1 - sqrt(3/4) at x = 1.
  auto m = build_geometric_mesh(0.5, 1);
  auto hp = fit_piecewise_chebyshev(root, m, assign_degrees(m, UniformDegree{0}));
  auto rep = hp_sup_error(hp, root, 200);
  CHECK(rep.sup_error == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(rep.argmax_point == 0.0);
  CHECK(std::fabs(hp(1.0) - 1.0) == doctest::Approx(1.0 - std::sqrt(0.75)).epsilon(1e-15));
}

TEST_CASE("hp error is stable under grid refinement") {
  auto m = build_geometric_mesh(0.5, 10);
  auto hp = fit_piecewise_chebyshev(root, m, assign_degrees(m, LinearTaper{1.0}));
  const double e200 = hp_sup_error(hp, root, 200).sup_error;
  for (std::size_t ppe : {400, 800}) CHECK(hp_sup_error(hp, root, ppe).sup_error == doctest::Approx(e200).epsilon(0.01));
}

TEST_CASE("J = 5 taper against a per-element best-polynomial oracle") {
  auto m = build_geometric_mesh(0.5, 5);
  auto assign = assign_degrees(m, LinearTaper{1.0});
  auto hp = fit_piecewise_chebyshev(root, m, assign);
  for (std::size_t i = 0; i < m.element_count(); ++i) {
    const auto el = m.element(i);
    const int p = assign.degrees[i];
    const double best = best_polynomial_error(root, el.lo, el.hi, p);
    // Interpolation error on the element, on a fine grid.
    double interp = 0.0;
    for (int k = 0; k <= 4000; ++k) {
      const double x = el.lo + (el.hi - el.lo) * k / 4000.0;
      interp = std::max(interp, std::fabs(hp(x) - root(x)));
    }
    // Chebyshev interpolation is near-best: E_best <= E_interp <= (1 + Lambda_p) E_best.
    const double lebesgue = 1.0 + 2.0 / std::numbers::pi * std::log(p + 1.0);
    CAPTURE(i);
    CHECK(interp >= best * (1.0 - 1e-6));
    CHECK(interp <= (1.0 + lebesgue) * best * (1.0 + 1e-6) + (p == 0 ? best : 0.0));
  }
}

TEST_CASE("taper J = 20 error is bounded below by the singular element") {
  auto m = build_geometric_mesh(0.5, 20);
  auto hp = fit_piecewise_chebyshev(root, m, assign_degrees(m, LinearTaper{1.0}));
  const double e = hp_sup_error(hp, root, 200).sup_error;
  // Element 0 carries a constant: its error is sqrt(h/2) with h = 2^-20.
  CHECK(e == doctest::Approx(std::sqrt(std::ldexp(1.0, -21))).epsilon(1e-9));
}

TEST_CASE("best polynomial error basics") {
  CHECK(best_polynomial_error(root, 0.5, 1.0, 0) == doctest::Approx((1.0 - std::sqrt(0.5)) / 2).epsilon(1e-10));
  CHECK(best_polynomial_error([](double x) { return x * x; }, 0.0, 1.0, 2) < 1e-13);
  CHECK(best_polynomial_error([](double x) { return x * x; }, -1.0, 1.0, 1) == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("scaling law examples") {
  auto s0 = scaling_law_check(0, 1.0);
  CHECK(s0.lhs == doctest::Approx((1.0 - std::sqrt(0.5)) / 2).epsilon(1e-10));
  CHECK(s0.lhs == s0.rhs);
  auto q = scaling_law_check(0, 0.25);
  CHECK(q.lhs == doctest::Approx(q.rhs).epsilon(1e-12));
  CHECK(q.rhs == doctest::Approx(s0.rhs / 2).epsilon(1e-12));
  auto s3 = scaling_law_check(3, 0.125);
  CHECK(std::fabs(s3.lhs - s3.rhs) <= 1e-10 * s3.rhs);
}

TEST_CASE("element error shrinks by sqrt(rho) per level at fixed degree") {
  auto m = build_geometric_mesh(0.5, 12);
  auto hp = fit_piecewise_chebyshev(root, m, assign_degrees(m, UniformDegree{4}));
  std::vector<double> per(m.element_count(), 0.0);
  for (std::size_t i = 1; i < m.element_count(); ++i) {
    const auto el = m.element(i);
    for (int k = 0; k <= 2000; ++k) {
      const double x = el.lo + (el.hi - el.lo) * k / 2000.0;
      per[i] = std::max(per[i], std::fabs(hp(x) - root(x)));
    }
  }
  for (std::size_t i = 2; i < m.element_count(); ++i)
    CHECK(per[i - 1] / per[i] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-6));
}

TEST_CASE("superexponential mesh examples") {
  auto [m, assign] = build_superexp_mesh(std::log(2.0), 2, 3);
  REQUIRE(m.breakpoints().size() == 3);
  CHECK(m.breakpoints()[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(m.breakpoints()[2] == doctest::Approx(1.0 / 16).epsilon(1e-15));
  CHECK(m.experimental());
  CHECK(assign.degrees == std::vector<int>{3, 3, 3});

  auto [m6, a6] = build_superexp_mesh(0.3, 6, 2);
  for (std::size_t j = 0; j + 1 < m6.breakpoints().size(); ++j) {
    const double ds = std::log(m6.breakpoints()[j]) - std::log(m6.breakpoints()[j + 1]);
    CHECK(ds == doctest::Approx(0.3 * (2.0 * j + 1.0)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(build_superexp_mesh(1.0, 40, 2), UsageError);
}

TEST_CASE("NaN from the target is reported with the element") {
  auto m = build_geometric_mesh(0.5, 3);
  auto bad = [](double x) { return x > 0.6 ? std::nan("") : x; };
  CHECK_THROWS_AS(fit_piecewise_chebyshev(bad, m, assign_degrees(m, UniformDegree{2})), DataError);
}
