#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "capx/error.hpp"
#include "capx/linalg.hpp"

using capx::Matrix;

TEST_CASE("identity design returns the right-hand side") {
  Matrix A(4, 4);
  for (std::size_t i = 0; i < 4; ++i) A(i, i) = 1.0;
  std::vector<double> v{1.5, -2.0, 0.25, 8.0}, w(4, 1.0);
  auto c = capx::weighted_least_squares(A, v, w);
  for (std::size_t i = 0; i < 4; ++i) CHECK(c[i] == doctest::Approx(v[i]).epsilon(1e-15));
}

TEST_CASE("overdetermined consistent system is solved exactly") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Matrix A(30, 5);
  for (std::size_t j = 0; j < 5; ++j)
    for (std::size_t i = 0; i < 30; ++i) A(i, j) = d(rng);
  std::vector<double> truth{1.0, -2.0, 3.0, 0.5, -0.125};
  auto rhs = A.apply(truth);
  std::vector<double> w(30);
  for (auto& x : w) x = 0.1 + std::fabs(d(rng));
  auto c = capx::weighted_least_squares(A, rhs, w);
  for (std::size_t j = 0; j < 5; ++j) CHECK(c[j] == doctest::Approx(truth[j]).epsilon(1e-12));
  auto fit = A.apply(c);
  for (std::size_t i = 0; i < 30; ++i) CHECK(std::fabs(fit[i] - rhs[i]) < 1e-13);
}

TEST_CASE("duplicate column raises degeneracy with the offending index") {
  Matrix A(6, 3);
  for (std::size_t i = 0; i < 6; ++i) {
    A(i, 0) = 1.0;
    A(i, 1) = static_cast<double>(i);
    A(i, 2) = static_cast<double>(i);
  }
  std::vector<double> rhs(6, 1.0), w(6, 1.0);
  try {
    capx::weighted_least_squares(A, rhs, w);
    FAIL("expected DegeneracyError");
  } catch (const capx::DegeneracyError& e) {
    CHECK(e.rank_estimate() == 2);
    REQUIRE(e.offending_columns().size() == 1);
    const auto bad = e.offending_columns()[0];
    CHECK((bad == 1 || bad == 2));
  }
}

TEST_CASE("weights select rows") {
  // Two inconsistent observations of one unknown; zero weight drops one.
  Matrix A(2, 1);
  A(0, 0) = 1.0;
  A(1, 0) = 1.0;
  std::vector<double> rhs{1.0, 3.0};
  CHECK(capx::weighted_least_squares(A, rhs, std::vector<double>{1.0, 0.0})[0] ==
        doctest::Approx(1.0));
  CHECK(capx::weighted_least_squares(A, rhs, std::vector<double>{1.0, 1.0})[0] ==
        doctest::Approx(2.0));
  CHECK(capx::weighted_least_squares(A, rhs, std::vector<double>{1.0, 3.0})[0] ==
        doctest::Approx(2.5));
}

TEST_CASE("bad inputs are rejected") {
  Matrix A(3, 2);
  std::vector<double> rhs(2), w(3, 1.0);
  CHECK_THROWS_AS(capx::weighted_least_squares(A, rhs, w), capx::UsageError);
  std::vector<double> rhs3(3, 0.0), neg{1.0, -1.0, 1.0};
  CHECK_THROWS_AS(capx::weighted_least_squares(A, rhs3, neg), capx::UsageError);
}
