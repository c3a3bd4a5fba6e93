#include <doctest.h>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "capx/error.hpp"
#include "capx/studies.hpp"

using namespace capx;

namespace {

StudyConfig small_cfg(StudyKind k, int n_min, int n_max) {
  StudyConfig c;
  c.study = k;
  c.n_min = n_min;
  c.n_max = n_max;
  return c;
}

std::size_t count_substr(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("shortest round-trip formatting") {
  CHECK(format_double(0.125) == "0.125");
  CHECK(format_double(4.0) == "4");
  CHECK(format_double(0.01) == "0.01");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-300.0, 300.0);
  for (int i = 0; i < 2000; ++i) {
    const double v = std::pow(10.0, u(rng)) * (i % 2 ? -1.0 : 1.0);
    CHECK(parse_double(format_double(v)) == v);
  }
  CHECK(parse_double("+1.5") == 1.5);
  CHECK_THROWS_AS(parse_double("1.5x"), UsageError);
}

TEST_CASE("write_csv examples") {
  ConvergenceTable t;
  t.metadata = {{"capx_version", kVersion}};
  auto csv = to_csv_string(to_csv_table(t));
  CHECK(csv == "# capx_version=0.1.0\nn,sup_error,wall_time_s\n");

  t.records.push_back({4, 0.125, 0.01});
  csv = to_csv_string(to_csv_table(t));
  CHECK(csv == "# capx_version=0.1.0\nn,sup_error,wall_time_s\n4,0.125,0.01\n");
}

TEST_CASE("convergence CSV round trip through a file") {
  ConvergenceTable t;
  t.metadata = {{"capx_version", kVersion}, {"note", "a=b,c"}};
  for (int n = 1; n <= 12; ++n) t.records.push_back({double(n), std::exp(-std::sqrt(n) * 1.7) / 3.0, 0.0});
  attach_rate(t);
  const auto path = std::filesystem::temp_directory_path() / "capx_conv_roundtrip.csv";
  write_csv(t, path);
  auto back = read_convergence_csv(path);
  CHECK(back.records == t.records);
  CHECK(back.metadata == t.metadata);
  REQUIRE(back.rate);
  CHECK(back.rate->C == t.rate->C);
  CHECK(to_csv_table(back) == to_csv_table(t));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_convergence_csv("/nonexistent/dir/x.csv"), IoError);
}

TEST_CASE("CSV parser rejects ragged rows") {
  CHECK_THROWS_AS(parse_csv_string("a,b\n1,2\n3\n"), DataError);
  CHECK_THROWS_AS(parse_csv_string("a,b\n1,zz\n"), DataError);
}

TEST_CASE("rate fit skips records at the rounding floor") {
  ConvergenceTable t;
  t.records = {{1, 1e-2, 0}, {2, 1e-3, 0}, {3, 1e-4, 0}, {4, 1e-16, 0}, {5, 0.0, 0}};
  attach_rate(t);
  REQUIRE(t.rate);
  ConvergenceTable u;
  u.records = {{1, 1e-2, 0}, {2, 0.0, 0}};
  attach_rate(u);
  CHECK(!u.rate);
}

TEST_CASE("config text parsing and precedence") {
  auto entries = parse_config_text("# comment\n\nscheme = uniform\n--n-max=9\nsigma=2.5\n");
  CHECK(entries.at("scheme") == "uniform");
  CHECK(entries.at("n-max") == "9");
  StudyConfig cfg;
  apply_config(cfg, entries);
  CHECK(cfg.scheme == PoleScheme::uniform);
  CHECK(cfg.n_max == 9);
  CHECK(cfg.sigma == 2.5);
  apply_config(cfg, {{"n-max", "11"}});
  CHECK(cfg.n_max == 11);
  CHECK_THROWS_AS(apply_config(cfg, {{"colour", "red"}}), UsageError);
  CHECK_THROWS_AS(apply_config(cfg, {{"n-max", "eleven"}}), UsageError);
  CHECK_THROWS_AS(parse_config_text("justakey\n"), UsageError);

  StudyConfig both;
  both.taper_slope = 1.0;
  both.uniform_degree = 3;
  CHECK_THROWS_AS(both.validate(), UsageError);
}

TEST_CASE("config echo names every setting except the output paths") {
  StudyConfig cfg;
  cfg.out_csv = "x.csv";
  bool saw_sigma = false;
  for (const auto& [k, v] : cfg.echo()) {
    CHECK(k != "out-csv");
    CHECK(k != "out-svg");
    if (k == "sigma") {
      saw_sigma = true;
      CHECK(parse_double(v) == cfg.sigma);
    }
  }
  CHECK(saw_sigma);
}

TEST_CASE("SVG plot is well formed and deterministic") {
  ConvergenceTable t;
  t.metadata = {{"study", "ratconv"}};
  t.records = {{4, 1e-2, 0}, {9, 1e-3, 0}, {16, 1e-4, 0}};
  attach_rate(t);
  const std::string a = render_svg_plot(t, PlotAxis::sqrt_n);
  const std::string b = render_svg_plot(t, PlotAxis::sqrt_n);
  CHECK(a == b);
  CHECK(count_substr(a, "<circle") == 3);
  std::istringstream in(a);
  boost::property_tree::ptree tree;
  CHECK_NOTHROW(boost::property_tree::read_xml(in, tree));
  CHECK(tree.count("svg") == 1);

  ConvergenceTable zero;
  zero.records = {{1, 0.0, 0}};
  CHECK_THROWS_AS(render_svg_plot(zero, PlotAxis::sqrt_n), UsageError);
}

TEST_CASE("SVG fit line has slope -C / ln 10 in plot units") {
  ConvergenceTable t;
  for (int n = 1; n <= 20; ++n) t.records.push_back({double(n), 2.0 * std::exp(-1.8 * std::sqrt(n)), 0.0});
  attach_rate(t);
  const std::string svg = render_svg_plot(t, PlotAxis::sqrt_n);
  const auto pos = svg.find("stroke-dasharray");
  REQUIRE(pos != std::string::npos);
  const auto start = svg.rfind("<line", pos);
  double x1, y1, x2, y2;
  REQUIRE(std::sscanf(svg.c_str() + start, "<line x1=\"%lf\" y1=\"%lf\" x2=\"%lf\" y2=\"%lf\"", &x1, &y1,
                      &x2, &y2) == 4);
  // Data units per pixel are read off the first and last markers.
  std::vector<std::pair<double, double>> marks;
  for (auto p = svg.find("<circle"); p != std::string::npos; p = svg.find("<circle", p + 1)) {
    double cx, cy;
    std::sscanf(svg.c_str() + p, "<circle cx=\"%lf\" cy=\"%lf\"", &cx, &cy);
    marks.emplace_back(cx, cy);
  }
  REQUIRE(marks.size() == 20);
  const double dx_data = std::sqrt(20.0) - 1.0;
  const double dy_data = std::log10(t.records.back().sup_error) - std::log10(t.records.front().sup_error);
  const double xscale = (marks.back().first - marks.front().first) / dx_data;
  const double yscale = (marks.back().second - marks.front().second) / dy_data;
  const double slope = ((y2 - y1) / yscale) / ((x2 - x1) / xscale);
  CHECK(slope == doctest::Approx(-t.rate->C / std::log(10.0)).epsilon(0.01));
  CHECK(t.rate->C == doctest::Approx(1.8).epsilon(1e-9));
}

TEST_CASE("ratconv single pole beats the best constant") {
  auto t = run_ratconv(small_cfg(StudyKind::ratconv, 1, 1));
  REQUIRE(t.records.size() == 1);
  CHECK(t.records[0].sup_error < 0.5);
  CHECK(t.failures.empty());
  auto s = run_sigconv(small_cfg(StudyKind::sigconv, 1, 1));
  CHECK(s.records[0].sup_error < 0.5);
}

TEST_CASE("sigconv matches ratconv per n") {
  auto r = run_ratconv(small_cfg(StudyKind::ratconv, 1, 14));
  auto s = run_sigconv(small_cfg(StudyKind::sigconv, 1, 14));
  REQUIRE(r.records.size() == s.records.size());
  for (std::size_t i = 0; i < r.records.size(); ++i)
    CHECK(std::fabs(r.records[i].sup_error - s.records[i].sup_error) <= 1e-10);
}

TEST_CASE("studies are deterministic and carry metadata") {
  auto cfg = small_cfg(StudyKind::ratconv, 2, 10);
  const auto a = to_csv_string(to_csv_table(run_ratconv(cfg)));
  const auto b = to_csv_string(to_csv_table(run_ratconv(cfg)));
  CHECK(a == b);
  CHECK(a.find("# capx_version=0.1.0") == 0);
  CHECK(a.find("# sigma=4.442882938158366") != std::string::npos);
  CHECK(a.find("# grid=") != std::string::npos);

  setenv("CAPX_THREADS", "3", 1);
  const auto c = to_csv_string(to_csv_table(run_ratconv(cfg)));
  unsetenv("CAPX_THREADS");
  CHECK(a == c);
}

TEST_CASE("equivalence on a fitted approximant") {
  StudyConfig cfg = small_cfg(StudyKind::equiv, 1, 20);
  auto rep = run_equiv(cfg);
  CHECK(rep.points == 10000);
  CHECK(rep.max_mixed <= 1e-12);
  CHECK(rep.passed);
  cfg.n_max = 1;
  CHECK(run_equiv(cfg).max_mixed <= 1e-15);
  cfg.n_max = 20;
  cfg.activation = Activation::power(1.0);
  auto p1 = run_equiv(cfg);
  CHECK(p1.passed);
  CHECK(p1.max_mixed == rep.max_mixed);
  cfg.activation = Activation::power(2.0);
  CHECK_THROWS_AS(run_equiv(cfg), UsageError);
}

TEST_CASE("sigmoid model of study approximants agrees at random points") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t n : {3, 8, 20}) {
    auto fit = fit_sqrt_rational(n, StudyConfig{});
    auto r = to_rational(fit);
    auto m = to_sigmoid_model(r);
    for (int i = 0; i < 100; ++i) {
      const double x = 1.0 - u(rng);
      const double v = eval_rational(r, x);
      CHECK(std::fabs(eval_sigmoid_model(m, std::log(x)) - v) <= 1e-13 * (1.0 + std::fabs(v)));
    }
  }
}

TEST_CASE("tapered beats uniform from n = 9") {
  auto cfg = small_cfg(StudyKind::ratconv, 9, 24);
  auto tap = run_ratconv(cfg);
  cfg.scheme = PoleScheme::uniform;
  auto uni = run_ratconv(cfg);
  for (std::size_t i = 0; i < tap.records.size(); ++i) CHECK(tap.records[i].sup_error <= uni.records[i].sup_error);
}

TEST_CASE("hpconv is indexed by DOF") {
  StudyConfig cfg;
  cfg.study = StudyKind::hpconv;
  cfg.j_min = 1;
  cfg.j_max = 6;
  auto t = run_hpconv(cfg);
  CHECK(t.index_column == "dof");
  REQUIRE(t.records.size() == 6);
  CHECK(t.records[3].index == 15);
  for (std::size_t i = 1; i < t.records.size(); ++i) CHECK(t.records[i].sup_error < t.records[i - 1].sup_error);
  CHECK(to_csv_string(to_csv_table(t)).find("dof,sup_error,wall_time_s") != std::string::npos);
}

TEST_CASE("optimal ratio beats rho = 1/2 at a DOF budget of 60") {
  auto best_at_budget = [](double rho) {
    double best = INFINITY;
    for (std::size_t J = 1; J <= 60; ++J) {
      auto m = build_geometric_mesh(rho, J);
      auto a = assign_degrees(m, LinearTaper{1.0});
      if (dof_count(a) > 60) break;
      auto hp = fit_piecewise_chebyshev([](double x) { return std::sqrt(x); }, m, a);
      best = std::min(best, hp_sup_error(hp, [](double x) { return std::sqrt(x); }, 200).sup_error);
    }
    return best;
  };
  CHECK(best_at_budget(kOptimalRho) <= best_at_budget(0.5));
}

TEST_CASE("superexponential hp stays near the taper curve") {
  auto root = [](double x) { return std::sqrt(x); };
  // Linear-taper curve on rho = 1/2 for interpolation in log DOF.
  std::vector<std::pair<double, double>> taper;
  for (std::size_t J = 1; J <= 20; ++J) {
    auto m = build_geometric_mesh(0.5, J);
    auto a = assign_degrees(m, LinearTaper{1.0});
    auto hp = fit_piecewise_chebyshev(root, m, a);
    taper.emplace_back(double(dof_count(a)), hp_sup_error(hp, root, 200).sup_error);
  }
  auto taper_at = [&](double dof) {
    for (std::size_t i = 1; i < taper.size(); ++i)
      if (taper[i].first >= dof) {
        const double w = (dof - taper[i - 1].first) / (taper[i].first - taper[i - 1].first);
        return std::exp((1 - w) * std::log(taper[i - 1].second) + w * std::log(taper[i].second));
      }
    return taper.back().second;
  };
  int compared = 0;
  for (int p = 2; p <= 6; ++p)
    for (std::size_t J = 2; J <= 12; ++J) {
      auto [m, a] = build_superexp_mesh(0.5, J, p);
      const double dof = double(dof_count(a));
      if (dof > 120 || dof < taper.front().first) continue;
      auto hp = fit_piecewise_chebyshev(root, m, a);
      const double e = hp_sup_error(hp, root, 200).sup_error;
      const double ref = taper_at(dof);
      CAPTURE(p);
      CAPTURE(J);
      CHECK(e <= 4.0 * ref);
      ++compared;
    }
  CHECK(compared > 0);
}

TEST_CASE("quadconv examples") {
  StudyConfig cfg;
  cfg.study = StudyKind::quadconv;
  auto q = run_quadconv(cfg);
  REQUIRE(q.table.records.size() == 3);
  CHECK(q.table.records[1].sup_error <= 1e-10);
  CHECK(q.table.records[0].sup_error > q.table.records[1].sup_error);
  CHECK(q.density.slope > 0.0);
  CHECK(q.density_csv.header == std::vector<std::string>{"bin_center_s", "count"});
}

TEST_CASE("poles and decay studies") {
  StudyConfig cfg;
  cfg.study = StudyKind::poles;
  auto p = run_poles(cfg);
  REQUIRE(p.rows.size() == 20);
  CHECK(p.rows[0][1] == -cfg.sigma * std::sqrt(20.0));

  cfg.study = StudyKind::decay;
  auto d = run_decay(cfg);
  CHECK(d.slope == doctest::Approx(-1.0).epsilon(0.01));
}
