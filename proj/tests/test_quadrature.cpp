#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "capx/error.hpp"
#include "capx/quadrature.hpp"

using namespace capx;

TEST_CASE("tanh-sinh structure") {
  auto r = tanh_sinh_rule(0.1, 50);
  // Nodes that round to 1 are dropped, so the rule is lopsided near x = 1.
  std::size_t mid = 0;
  while (mid < r.size() && r.nodes[mid] < 0.5) ++mid;
  REQUIRE(mid < r.size());
  CHECK(r.nodes[mid] == 0.5);
  for (std::size_t k = 1; mid + k < r.size(); ++k)
    CHECK(std::fabs(r.nodes[mid - k] + r.nodes[mid + k] - 1.0) <= 1e-15);
  CHECK(mid >= r.size() - 1 - mid);
  for (std::size_t j = 0; j < r.size(); ++j) {
    CHECK(r.weights[j] > 0.0);
    if (j) CHECK(r.nodes[j] > r.nodes[j - 1]);
  }
}

TEST_CASE("tanh-sinh integrals") {
  auto r = tanh_sinh_rule(0.1, 50);
  CHECK(std::fabs(integrate(r, [](double) { return 1.0; }) - 1.0) <= 1e-12);
  auto q = tanh_sinh_rule(0.08, 80);
  CHECK(std::fabs(integrate(q, [](double x) { return std::sqrt(x); }) - 2.0 / 3.0) <= 1e-10);
  CHECK(std::fabs(integrate(q, [](double x) { return 1.0 / std::sqrt(x); }) - 2.0) <= 1e-8);
}

TEST_CASE("tanh-sinh parameter checks") {
  CHECK_THROWS_AS(tanh_sinh_rule(0.0, 10), UsageError);
  CHECK_THROWS_AS(tanh_sinh_rule(0.1, 0), UsageError);
  CHECK_THROWS_AS(tanh_sinh_rule(0.5, 20), UsageError);
  CHECK_THROWS_AS(tanh_sinh_level(4), UsageError);
}

TEST_CASE("level presets") {
  auto l2 = tanh_sinh_level(2);
  auto r = tanh_sinh_rule(l2.h, l2.N);
  CHECK(r.size() <= 150);
  CHECK(std::fabs(integrate(r, [](double x) { return std::sqrt(x); }) - 2.0 / 3.0) <= 1e-10);
}

TEST_CASE("Gauss-Legendre classical values") {
  auto g1 = gauss_legendre_rule(1);
  CHECK(g1.nodes[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(g1.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
  auto g2 = gauss_legendre_rule(2);
  CHECK(g2.nodes[0] == doctest::Approx((1.0 - 1.0 / std::sqrt(3.0)) / 2).epsilon(1e-15));
  CHECK(g2.nodes[1] == doctest::Approx((1.0 + 1.0 / std::sqrt(3.0)) / 2).epsilon(1e-15));
  CHECK(g2.weights[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(g2.weights[1] == doctest::Approx(0.5).epsilon(1e-15));
  auto g5 = gauss_legendre_rule(5);
  CHECK(std::fabs(integrate(g5, [](double x) { return std::pow(x, 9); }) - 0.1) <= 1e-14);
}

TEST_CASE("Gauss-Legendre exactness across p") {
  for (int p = 1; p <= 40; ++p) {
    auto g = gauss_legendre_rule(p);
    REQUIRE(g.size() == static_cast<std::size_t>(p));
    for (int k = 0; k <= 2 * p - 1; k += std::max(1, p / 4))
      CHECK(std::fabs(integrate(g, [k](double x) { return std::pow(x, k); }) - 1.0 / (k + 1)) <= 1e-14);
    for (std::size_t j = 1; j < g.size(); ++j) CHECK(g.nodes[j] > g.nodes[j - 1]);
  }
}

TEST_CASE("integrate surfaces NaN") {
  auto g = gauss_legendre_rule(4);
  CHECK_THROWS_AS(integrate(g, [](double x) { return x > 0.5 ? std::nan("") : 1.0; }), DataError);
}

TEST_CASE("density histogram examples") {
  std::vector<double> nodes{std::exp(-1.0), std::exp(-2.0), std::exp(-3.0)};
  auto h = node_log_density(nodes, 1.0, 0.0);
  REQUIRE(h.counts.size() == 3);
  for (auto c : h.counts) CHECK(c == 1);
  CHECK(h.fitted_bins == 3);
  CHECK(h.slope == 0.0);
}

TEST_CASE("density bins are anchored at zero") {
  auto h = node_log_density(std::vector<double>{std::exp(-0.25), std::exp(-2.75)}, 0.5);
  for (std::size_t b = 0; b < h.bin_edges.size(); ++b) {
    const double q = h.bin_edges[b] / 0.5;
    CHECK(q == std::round(q));
  }
  CHECK(h.bin_edges.back() == 0.0);
}

TEST_CASE("rule CSV round trip") {
  auto r = tanh_sinh_rule(0.2, 35);
  const auto path = std::filesystem::temp_directory_path() / "capx_rule_roundtrip.csv";
  write_rule_csv(r, path);
  auto back = read_rule_csv(path);
  CHECK(back.nodes == r.nodes);
  CHECK(back.weights == r.weights);
  std::filesystem::remove(path);

  const auto bad = std::filesystem::temp_directory_path() / "capx_rule_bad.csv";
  std::ofstream(bad) << "node,weight\n0.5,1\n1.5,1\n";
  CHECK_THROWS_AS(read_rule_csv(bad), DataError);
  std::filesystem::remove(bad);
}
