#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "capx/approx.hpp"

namespace capx {

struct TanhSinhParams {
  double h;
  int N;
};
struct GaussLegendreParams {
  int p;
};
struct ExternalRuleSource {
  std::string path;
};
using RuleKind = std::variant<TanhSinhParams, GaussLegendreParams, ExternalRuleSource>;

// Rule on [0, 1]: nodes strictly increasing inside (0, 1), weights positive.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  RuleKind kind;

  std::size_t size() const noexcept { return nodes.size(); }
};

std::string describe(const RuleKind& kind);

// Nodes (1 + tanh(pi/2 sinh(jh)))/2 for j = -N..N.  Nodes within 1e-306 of
// either endpoint, or that round to 1, are dropped with their weights.
QuadratureRule tanh_sinh_rule(double h, int N);

// The three CLI presets (h, N): (0.2, 35), (0.1, 70), (0.05, 140).
TanhSinhParams tanh_sinh_level(int level);

QuadratureRule gauss_legendre_rule(int p);

// sum_j w_j f(x_j), accumulated in ascending |w_j| order.
double integrate(const QuadratureRule& rule, const RealFunction& f);

struct DensityHistogram {
  std::vector<double> bin_edges;  // ascending, size = counts.size() + 1
  std::vector<double> bin_centers;
  std::vector<std::size_t> counts;
  double slope = 0.0;        // counts vs bin center, over the fit region
  double correlation = 0.0;  // Pearson, same region
  std::size_t fitted_bins = 0;
};

// Histogram of s = log x over [min s, 0] with bins [lo, hi) anchored at 0.
// The linear fit uses bins whose upper edge is <= fit_upper.
DensityHistogram node_log_density(std::span<const double> nodes, double bin_width,
                                  double fit_upper = -2.0);
DensityHistogram node_log_density(const QuadratureRule& rule, double bin_width,
                                  double fit_upper = -2.0);

// node,weight CSV for third-party rules.
void write_rule_csv(const QuadratureRule& rule, const std::filesystem::path& path);
QuadratureRule read_rule_csv(const std::filesystem::path& path);

}  // namespace capx
