#include "capx/studies.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "capx/error.hpp"

namespace capx {

namespace {

template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) fn(i);
      });
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::pair<std::string, std::string>> base_metadata(const StudyConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> md;
  md.emplace_back("capx_version", kVersion);
  for (auto& kv : cfg.echo()) md.push_back(std::move(kv));
  return md;
}

LawsonOptions lawson_options(const StudyConfig& cfg) {
  LawsonOptions o;
  o.max_iters = cfg.lawson_max_iters;
  o.tol = cfg.lawson_tol;
  return o;
}

bool is_rational_activation(const Activation& a) {
  return a.kind() == Activation::Kind::logistic || a.exponent() == 1.0;
}

std::string failure_text(const std::string& where, const std::exception& e) {
  const char* kind = "error";
  if (dynamic_cast<const DegeneracyError*>(&e)) kind = "degeneracy";
  else if (dynamic_cast<const UsageError*>(&e)) kind = "usage";
  else if (dynamic_cast<const DomainError*>(&e)) kind = "domain";
  else if (dynamic_cast<const DataError*>(&e)) kind = "data";
  return where + "\t" + kind + "\t" + e.what();
}

// Shared driver for the two n-indexed studies.
ConvergenceTable run_pole_study(const StudyConfig& cfg, bool in_s) {
  cfg.validate();
  const std::size_t count = static_cast<std::size_t>(cfg.n_max - cfg.n_min + 1);
  std::vector<std::optional<ConvergenceRecord>> recs(count);
  std::vector<std::string> fails(count);
  std::vector<char> unconverged(count, 0);
  const std::string name = in_s ? "sigconv" : "ratconv";

  parallel_for(count, [&](std::size_t i) {
    const std::size_t n = static_cast<std::size_t>(cfg.n_min) + i;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const SqrtFit fit = in_s ? fit_sqrt_sigmoid(n, cfg) : fit_sqrt_rational(n, cfg);
      recs[i] = ConvergenceRecord{static_cast<double>(n), fit.lawson.report.sup_error,
                                  cfg.record_timing ? seconds_since(t0) : 0.0};
      unconverged[i] = fit.lawson.converged ? 0 : 1;
    } catch (const std::exception& e) {
      fails[i] = failure_text(name + " n=" + std::to_string(n), e);
    }
  });

  ConvergenceTable table;
  table.index_column = "n";
  table.metadata = base_metadata(cfg);
  table.metadata.emplace_back("target", in_s ? "exp(s/2)" : "sqrt(x)");
  table.metadata.emplace_back(
      "grid", in_s ? "chebyshev in s on [s_min-2,0], 30 per basis function, plus s=-inf and s=0"
                   : "x=exp(s), s chebyshev on [s_min-2,0], 30 per basis function, plus x=0 and x=1");
  std::string lazy;
  for (std::size_t i = 0; i < count; ++i) {
    if (recs[i]) table.records.push_back(*recs[i]);
    if (!fails[i].empty()) table.failures.push_back(fails[i]);
    if (recs[i] && unconverged[i]) lazy += (lazy.empty() ? "" : " ") + std::to_string(cfg.n_min + static_cast<int>(i));
  }
  if (!lazy.empty()) table.metadata.emplace_back("lawson_unconverged_n", lazy);
  attach_rate(table);
  return table;
}

}  // namespace

// ---------------------------------------------------------------------------

void attach_rate(ConvergenceTable& table) {
  std::vector<RatePoint> pts;
  for (const auto& r : table.records)
    if (r.sup_error >= kRateErrorFloor) pts.push_back({r.index, r.sup_error});
  table.rate.reset();
  if (pts.size() >= 3) {
    table.rate = fit_rate(pts);
    table.metadata.emplace_back("rate_points", std::to_string(pts.size()));
    table.metadata.emplace_back("rate_C", format_double(table.rate->C));
    table.metadata.emplace_back("rate_log_intercept", format_double(table.rate->log_intercept));
    table.metadata.emplace_back("rate_r_squared", format_double(table.rate->r_squared));
  } else {
    table.metadata.emplace_back("rate", "unavailable (fewer than 3 records above the error floor)");
  }
}

CsvTable to_csv_table(const ConvergenceTable& table) {
  CsvTable csv;
  for (const auto& [k, v] : table.metadata) csv.metadata.push_back(k + "=" + v);
  csv.header = {table.index_column, table.error_column, "wall_time_s"};
  for (const auto& r : table.records) csv.rows.push_back({r.index, r.sup_error, r.wall_time_s});
  return csv;
}

ConvergenceTable from_csv_table(const CsvTable& csv) {
  if (csv.header.size() != 3 || csv.header[2] != "wall_time_s")
    throw DataError("not a convergence table: unexpected header");
  ConvergenceTable t;
  t.index_column = csv.header[0];
  t.error_column = csv.header[1];
  for (const auto& line : csv.metadata) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    t.metadata.emplace_back(line.substr(0, eq), line.substr(eq + 1));
  }
  for (const auto& row : csv.rows) t.records.push_back({row[0], row[1], row[2]});
  RateFit fit;
  int found = 0;
  for (const auto& [k, v] : t.metadata) {
    if (k == "rate_C") fit.C = parse_double(v), ++found;
    else if (k == "rate_log_intercept") fit.log_intercept = parse_double(v), ++found;
    else if (k == "rate_r_squared") fit.r_squared = parse_double(v), ++found;
  }
  if (found == 3) t.rate = fit;
  return t;
}

void write_csv(const ConvergenceTable& table, const std::filesystem::path& path) {
  write_csv_table(to_csv_table(table), path);
}

ConvergenceTable read_convergence_csv(const std::filesystem::path& path) {
  return from_csv_table(read_csv_table(path));
}

// ---------------------------------------------------------------------------

SqrtFit fit_sqrt_rational(std::size_t n, const StudyConfig& cfg) {
  ClusteredPoleSet poles = place_poles(cfg.scheme, n, cfg.sigma);
  EvaluationGrid grid = log_chebyshev_grid(poles.s_min(), n + 1);
  const auto basis = is_rational_activation(cfg.activation)
                         ? basis_from_poles(poles)
                         : power_basis_from_poles(poles, cfg.activation.exponent());
  const RealFunction target = [](double x) { return std::sqrt(x); };
  LawsonResult res = lawson_minimax_fit(basis, target, grid.x, lawson_options(cfg));
  return {std::move(poles), std::move(grid), std::move(res)};
}

SqrtFit fit_sqrt_sigmoid(std::size_t n, const StudyConfig& cfg) {
  ClusteredPoleSet poles = place_poles(cfg.scheme, n, cfg.sigma);
  EvaluationGrid grid = log_chebyshev_grid(poles.s_min(), n + 1);
  const auto basis = sigmoid_basis_from_poles(poles, cfg.activation);
  const RealFunction target = [](double s) { return std::exp(0.5 * s); };
  LawsonResult res = lawson_minimax_fit(basis, target, grid.s, lawson_options(cfg));
  return {std::move(poles), std::move(grid), std::move(res)};
}

RationalApproximant to_rational(const SqrtFit& fit) {
  const auto& c = fit.lawson.coefficients;
  const auto& eps = fit.poles.eps_values();
  if (c.size() != eps.size() + 1) throw UsageError("to_rational: coefficient count mismatch");
  std::vector<PoleTerm> terms;
  terms.reserve(eps.size());
  for (std::size_t k = 0; k < eps.size(); ++k) terms.push_back({c[k + 1], eps[k]});
  return RationalApproximant(c[0], std::move(terms));
}

ConvergenceTable run_ratconv(const StudyConfig& cfg) { return run_pole_study(cfg, false); }
ConvergenceTable run_sigconv(const StudyConfig& cfg) { return run_pole_study(cfg, true); }

ConvergenceTable run_hpconv(const StudyConfig& cfg) {
  cfg.validate();
  const std::size_t count = static_cast<std::size_t>(cfg.j_max - cfg.j_min + 1);
  std::vector<std::optional<ConvergenceRecord>> recs(count);
  std::vector<std::string> fails(count);
  const DegreeStrategy strategy = cfg.degree_strategy();
  if (cfg.superexp_c && !cfg.uniform_degree)
    throw UsageError("hpconv with --superexp-c needs --uniform-degree");
  const RealFunction root = [](double x) { return std::sqrt(x); };

  parallel_for(count, [&](std::size_t i) {
    const std::size_t J = static_cast<std::size_t>(cfg.j_min) + i;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      std::optional<GeometricMesh> mesh;
      std::optional<DegreeAssignment> assign;
      if (cfg.superexp_c) {
        auto built = build_superexp_mesh(*cfg.superexp_c, J, *cfg.uniform_degree);
        mesh.emplace(std::move(built.first));
        assign.emplace(std::move(built.second));
      } else {
        mesh.emplace(build_geometric_mesh(cfg.rho, J));
        assign.emplace(assign_degrees(*mesh, strategy));
      }
      const HpApproximant approx = fit_piecewise_chebyshev(root, *mesh, *assign);
      const auto rep = hp_sup_error(approx, root, 200);
      recs[i] = ConvergenceRecord{static_cast<double>(dof_count(*assign)), rep.sup_error,
                                  cfg.record_timing ? seconds_since(t0) : 0.0};
    } catch (const std::exception& e) {
      fails[i] = failure_text("hpconv J=" + std::to_string(J), e);
    }
  });

  ConvergenceTable table;
  table.index_column = "dof";
  table.metadata = base_metadata(cfg);
  table.metadata.emplace_back("target", "sqrt(x)");
  if (cfg.superexp_c) {
    table.metadata.emplace_back("mesh", "superexponential exp(-c j^2)");
    table.metadata.emplace_back("experimental", "true");
  } else {
    table.metadata.emplace_back("mesh", "geometric rho^j");
  }
  table.metadata.emplace_back("points_per_element", "200");
  for (std::size_t i = 0; i < count; ++i) {
    if (recs[i]) table.records.push_back(*recs[i]);
    if (!fails[i].empty()) table.failures.push_back(fails[i]);
  }
  std::stable_sort(table.records.begin(), table.records.end(),
                   [](const auto& a, const auto& b) { return a.index < b.index; });
  attach_rate(table);
  return table;
}

CsvTable density_csv(const DensityHistogram& hist,
                     const std::vector<std::pair<std::string, std::string>>& metadata) {
  CsvTable csv;
  for (const auto& [k, v] : metadata) csv.metadata.push_back(k + "=" + v);
  csv.metadata.push_back("density_fitted_bins=" + std::to_string(hist.fitted_bins));
  csv.metadata.push_back("density_slope=" + format_double(hist.slope));
  csv.metadata.push_back("density_correlation=" + format_double(hist.correlation));
  csv.header = {"bin_center_s", "count"};
  for (std::size_t b = 0; b < hist.counts.size(); ++b)
    csv.rows.push_back({hist.bin_centers[b], static_cast<double>(hist.counts[b])});
  return csv;
}

QuadStudy run_quadconv(const StudyConfig& cfg) {
  cfg.validate();
  QuadStudy out;
  auto& table = out.table;
  table.index_column = "nodes";
  table.error_column = "abs_error";
  table.metadata = base_metadata(cfg);
  table.metadata.emplace_back("integrand", "sqrt(x) on [0,1], exact 2/3");
  std::string presets;
  const RealFunction root = [](double x) { return std::sqrt(x); };
  QuadratureRule last;
  for (int level = 1; level <= cfg.quad_level; ++level) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto p = tanh_sinh_level(level);
    QuadratureRule rule = tanh_sinh_rule(p.h, p.N);
    const double err = std::fabs(integrate(rule, root) - 2.0 / 3.0);
    table.records.push_back({static_cast<double>(rule.size()), err,
                             cfg.record_timing ? seconds_since(t0) : 0.0});
    presets += (presets.empty() ? "" : " ") + std::to_string(level) + ":" + describe(rule.kind);
    last = std::move(rule);
  }
  table.metadata.emplace_back("levels", presets);
  out.density = node_log_density(last, cfg.bin_width);
  auto md = base_metadata(cfg);
  md.emplace_back("rule", describe(last.kind));
  md.emplace_back("density_fit_region", "bins with upper edge <= -2");
  out.density_csv = density_csv(out.density, md);
  return out;
}

EquivReport run_equiv(const StudyConfig& cfg) {
  cfg.validate();
  if (!is_rational_activation(cfg.activation))
    throw UsageError("equiv needs activation logistic or power:1");
  StudyConfig fit_cfg = cfg;
  fit_cfg.activation = Activation::logistic();
  const std::size_t n = static_cast<std::size_t>(cfg.n_max);
  const SqrtFit fit = fit_sqrt_rational(n, fit_cfg);
  const RationalApproximant r = to_rational(fit);
  SigmoidModel m = to_sigmoid_model(r);
  if (cfg.activation.kind() == Activation::Kind::power)
    m = SigmoidModel(m.a0(), m.terms(), cfg.activation);

  EquivReport rep;
  rep.n = n;
  rep.points = 10000;
  for (std::size_t i = 0; i < rep.points; ++i) {
    const double e10 = -12.0 + 12.0 * static_cast<double>(i) / static_cast<double>(rep.points - 1);
    const double x = i + 1 == rep.points ? 1.0 : std::pow(10.0, e10);
    const double a = eval_rational(r, x);
    const double b = eval_sigmoid_model(m, std::log(x));
    const double diff = std::fabs(a - b);
    const double scale = std::max(std::fabs(a), std::fabs(b));
    const double rel = scale > 0.0 ? diff / scale : diff;
    const double mixed = diff / (1.0 + std::fabs(a));
    rep.max_relative = std::max(rep.max_relative, rel);
    if (mixed > rep.max_mixed) {
      rep.max_mixed = mixed;
      rep.worst_x = x;
    }
  }
  // Seeded spot checks off the log grid; reported, not judged.
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double x = 1.0 - unit(rng);
    const double a = eval_rational(r, x);
    rep.spot_max_mixed = std::max(rep.spot_max_mixed,
                                  std::fabs(a - eval_sigmoid_model(m, std::log(x))) / (1.0 + std::fabs(a)));
  }
  // r has zeros on the grid, so the pure ratio is reported but not judged.
  rep.passed = rep.max_mixed <= rep.threshold;

  auto md = base_metadata(cfg);
  md.emplace_back("points", "10000 log-spaced in [1e-12,1]");
  md.emplace_back("threshold", format_double(rep.threshold) + " on max_mixed");
  md.emplace_back("worst_x", format_double(rep.worst_x));
  md.emplace_back("spot_checks", "100 uniform x in (0,1] from seed");
  md.emplace_back("spot_max_mixed", format_double(rep.spot_max_mixed));
  for (const auto& [k, v] : md) rep.csv.metadata.push_back(k + "=" + v);
  rep.csv.header = {"n", "points", "max_relative", "max_mixed", "passed"};
  rep.csv.rows.push_back({static_cast<double>(n), static_cast<double>(rep.points), rep.max_relative,
                          rep.max_mixed, rep.passed ? 1.0 : 0.0});
  return rep;
}

CsvTable run_poles(const StudyConfig& cfg) {
  cfg.validate();
  const auto poles = place_poles(cfg.scheme, static_cast<std::size_t>(cfg.n_max), cfg.sigma);
  CsvTable csv;
  for (const auto& [k, v] : base_metadata(cfg)) csv.metadata.push_back(k + "=" + v);
  csv.metadata.push_back("s_min=" + format_double(poles.s_min()));
  csv.header = {"k", "s", "eps"};
  for (std::size_t k = 0; k < poles.n(); ++k)
    csv.rows.push_back({static_cast<double>(k), poles.s_values()[k], poles.eps_values()[k]});
  return csv;
}

double decay_slope(const std::vector<DecayPoint>& profile, double dlo, double dhi) {
  std::vector<double> xs, ys;
  for (const auto& p : profile) {
    const double ad = std::fabs(p.offset);
    if (ad >= dlo && ad <= dhi && p.influence > 0.0) {
      xs.push_back(ad);
      ys.push_back(std::log(p.influence));
    }
  }
  if (xs.size() < 2) throw UsageError("decay_slope: fewer than two points in range");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw UsageError("decay_slope: all offsets identical");
  return sxy / sxx;
}

DecayStudy run_decay(const StudyConfig& cfg) {
  cfg.validate();
  std::vector<double> offsets;
  for (int i = -120; i <= 120; ++i) offsets.push_back(0.25 * i);
  DecayStudy out;
  out.profile = strip_decay_profile(0.0, offsets);
  out.slope = decay_slope(out.profile, 5.0, 30.0);
  for (const auto& [k, v] : base_metadata(cfg)) out.csv.metadata.push_back(k + "=" + v);
  out.csv.metadata.push_back("center_s=0");
  out.csv.metadata.push_back("decay_slope_5_30=" + format_double(out.slope));
  out.csv.header = {"d", "influence"};
  for (const auto& p : out.profile) out.csv.rows.push_back({p.offset, p.influence});
  return out;
}

}  // namespace capx
