#include "capx/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "capx/clustering.hpp"
#include "capx/csv.hpp"
#include "capx/error.hpp"

namespace capx {

namespace {
constexpr double kEndpointFloor = 1e-306;
}

std::string describe(const RuleKind& kind) {
  std::ostringstream os;
  if (const auto* ts = std::get_if<TanhSinhParams>(&kind))
    os << "tanh_sinh(h=" << format_double(ts->h) << ",N=" << ts->N << ")";
  else if (const auto* gl = std::get_if<GaussLegendreParams>(&kind))
    os << "gauss_legendre(p=" << gl->p << ")";
  else
    os << "external(" << std::get<ExternalRuleSource>(kind).path << ")";
  return os.str();
}

QuadratureRule tanh_sinh_rule(double h, int N) {
  if (!(h > 0.0 && h <= 2.0)) throw UsageError("tanh_sinh_rule: h must lie in (0, 2]");
  if (N < 1) throw UsageError("tanh_sinh_rule: N must be >= 1");
  if (N * h > 7.0 + 1e-12) throw UsageError("tanh_sinh_rule: N*h must not exceed 7");

  QuadratureRule rule;
  rule.kind = TanhSinhParams{h, N};
  const double half_pi = 0.5 * std::numbers::pi;
  for (int j = -N; j <= N; ++j) {
    const double t = j * h;
    const double u = half_pi * std::sinh(t);
    // x = (1 + tanh u)/2 = logistic(-2u), 1 - x = logistic(2u)
    const double x = logistic(-2.0 * u);
    const double xc = logistic(2.0 * u);
    if (x < kEndpointFloor || xc < kEndpointFloor || x >= 1.0) continue;
    // 1/cosh^2(u) = 4 x (1 - x)
    const double w = h * half_pi * std::cosh(t) * x * xc * 2.0;
    if (!(w > 0.0)) continue;
    if (!rule.nodes.empty() && !(x > rule.nodes.back())) continue;
    rule.nodes.push_back(x);
    rule.weights.push_back(w);
  }
  return rule;
}

TanhSinhParams tanh_sinh_level(int level) {
  switch (level) {
    case 1: return {0.2, 35};
    case 2: return {0.1, 70};
    case 3: return {0.05, 140};
    default: throw UsageError("quadrature level must be 1, 2 or 3");
  }
}

namespace {
// P_p(z) and P_{p-1}(z) by the three-term recurrence.
std::pair<double, double> legendre_pair(int p, double z) {
  double p0 = 1.0, p1 = z;
  for (int k = 2; k <= p; ++k) {
    const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  return {p1, p0};
}
}  // namespace

QuadratureRule gauss_legendre_rule(int p) {
  if (p < 1 || p > 200) throw UsageError("gauss_legendre_rule: p must lie in [1, 200]");
  QuadratureRule rule;
  rule.kind = GaussLegendreParams{p};
  rule.nodes.resize(static_cast<std::size_t>(p));
  rule.weights.resize(static_cast<std::size_t>(p));
  const double dp = p;
  for (int i = 0; i < p; ++i) {
    // Chebyshev-like initial guess; roots come out descending in z
    double z = std::cos(std::numbers::pi * (i + 0.75) / (dp + 0.5));
    bool ok = false;
    for (int it = 0; it < 100; ++it) {
      const auto [pn, pm] = legendre_pair(p, z);
      const double dz = pn / (dp * (z * pn - pm) / (z * z - 1.0));
      z -= dz;
      if (std::fabs(dz) <= 4e-16) {
        ok = true;
        break;
      }
    }
    if (!ok) throw std::runtime_error("gauss_legendre_rule: Newton iteration did not converge");
    const auto [pn, pm] = legendre_pair(p, z);
    const double deriv = dp * (z * pn - pm) / (z * z - 1.0);
    const auto idx = static_cast<std::size_t>(p - 1 - i);
    rule.nodes[idx] = 0.5 * (1.0 + z);
    rule.weights[idx] = 1.0 / ((1.0 - z * z) * deriv * deriv);
  }
  return rule;
}

double integrate(const QuadratureRule& rule, const RealFunction& f) {
  if (rule.nodes.size() != rule.weights.size())
    throw UsageError("integrate: node and weight counts differ");
  std::vector<double> vals(rule.size());
  for (std::size_t j = 0; j < rule.size(); ++j) {
    vals[j] = f(rule.nodes[j]);
    if (std::isnan(vals[j]))
      throw DataError("integrate: integrand is NaN at node " + std::to_string(j) +
                      " (x = " + format_double(rule.nodes[j]) + ")");
  }
  std::vector<std::size_t> order(rule.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::fabs(rule.weights[a]) < std::fabs(rule.weights[b]);
  });
  double sum = 0.0;
  for (auto j : order) sum += rule.weights[j] * vals[j];
  return sum;
}

DensityHistogram node_log_density(std::span<const double> nodes, double bin_width,
                                  double fit_upper) {
  if (nodes.empty()) throw UsageError("node_log_density: no nodes");
  if (!(bin_width > 0.0) || !std::isfinite(bin_width))
    throw UsageError("node_log_density: bin width must be positive");
  std::vector<double> s;
  s.reserve(nodes.size());
  for (double x : nodes) {
    if (!(x > 0.0)) throw UsageError("node_log_density: nodes must be positive");
    s.push_back(std::log(x));
  }
  const double smin = *std::min_element(s.begin(), s.end());
  const std::size_t nbins =
      smin >= 0.0 ? 1 : static_cast<std::size_t>(std::ceil(-smin / bin_width - 1e-12));

  DensityHistogram hist;
  hist.bin_edges.resize(std::max<std::size_t>(nbins, 1) + 1);
  const std::size_t nb = hist.bin_edges.size() - 1;
  for (std::size_t b = 0; b <= nb; ++b)
    hist.bin_edges[b] = -static_cast<double>(nb - b) * bin_width;
  hist.counts.assign(nb, 0);
  hist.bin_centers.resize(nb);
  for (std::size_t b = 0; b < nb; ++b)
    hist.bin_centers[b] = 0.5 * (hist.bin_edges[b] + hist.bin_edges[b + 1]);
  for (double v : s) {
    if (v > 0.0 || v < hist.bin_edges.front()) continue;
    auto b = static_cast<std::size_t>(std::floor((v - hist.bin_edges.front()) / bin_width));
    if (b >= nb) b = nb - 1;
    ++hist.counts[b];
  }

  std::vector<double> cx, cy;
  for (std::size_t b = 0; b < nb; ++b)
    if (hist.bin_edges[b + 1] <= fit_upper) {
      cx.push_back(hist.bin_centers[b]);
      cy.push_back(static_cast<double>(hist.counts[b]));
    }
  hist.fitted_bins = cx.size();
  if (cx.size() >= 2) {
    const double n = static_cast<double>(cx.size());
    const double mx = std::accumulate(cx.begin(), cx.end(), 0.0) / n;
    const double my = std::accumulate(cy.begin(), cy.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < cx.size(); ++i) {
      sxx += (cx[i] - mx) * (cx[i] - mx);
      sxy += (cx[i] - mx) * (cy[i] - my);
      syy += (cy[i] - my) * (cy[i] - my);
    }
    hist.slope = sxy / sxx;
    hist.correlation = syy > 0.0 ? sxy / std::sqrt(sxx * syy) : 0.0;
  }
  return hist;
}

DensityHistogram node_log_density(const QuadratureRule& rule, double bin_width, double fit_upper) {
  return node_log_density(rule.nodes, bin_width, fit_upper);
}

void write_rule_csv(const QuadratureRule& rule, const std::filesystem::path& path) {
  CsvTable t;
  t.metadata.push_back("rule=" + describe(rule.kind));
  t.header = {"node", "weight"};
  for (std::size_t j = 0; j < rule.size(); ++j) t.rows.push_back({rule.nodes[j], rule.weights[j]});
  write_csv_table(t, path);
}

QuadratureRule read_rule_csv(const std::filesystem::path& path) {
  const CsvTable t = read_csv_table(path);
  if (t.header != std::vector<std::string>{"node", "weight"})
    throw DataError("read_rule_csv: expected header node,weight in '" + path.string() + "'");
  QuadratureRule rule;
  rule.kind = ExternalRuleSource{path.string()};
  for (std::size_t j = 0; j < t.rows.size(); ++j) {
    const double x = t.rows[j][0], w = t.rows[j][1];
    if (!(x > 0.0 && x < 1.0))
      throw DataError("read_rule_csv: node " + std::to_string(j) + " outside (0, 1)");
    if (!(w > 0.0)) throw DataError("read_rule_csv: weight " + std::to_string(j) + " not positive");
    if (!rule.nodes.empty() && !(x > rule.nodes.back()))
      throw DataError("read_rule_csv: nodes must be strictly increasing (row " +
                      std::to_string(j) + ")");
    rule.nodes.push_back(x);
    rule.weights.push_back(w);
  }
  return rule;
}

}  // namespace capx
