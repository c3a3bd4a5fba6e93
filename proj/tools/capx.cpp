// capx: command-line driver for the convergence studies.
//
//   capx ratconv --scheme tapered --n-min 4 --n-max 36 --out-csv rat.csv --out-svg rat.svg
//   capx hpconv --rho 0.5 --j-max 30 --uniform-degree 6
//   capx quadconv --quad-level 3
//   capx density --nodes-csv rule.csv --bin-width 1
//
// Settings are resolved as built-in defaults, then --config, then flags.
// CSV goes to --out-csv or stdout; summaries and FAIL lines go to stderr.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "capx/error.hpp"
#include "capx/studies.hpp"

namespace {

enum Exit { ok = 0, failed = 1, usage = 2, study_points_failed = 3, check_failed = 4, io = 5, data = 6 };

void emit(const capx::CsvTable& csv, const std::string& path) {
  if (path.empty())
    std::cout << capx::to_csv_string(csv);
  else
    capx::write_csv_table(csv, path);
}

int report_failures(const capx::ConvergenceTable& t) {
  for (const auto& f : t.failures) std::cerr << "FAIL " << f << "\n";
  return t.failures.empty() ? ok : study_points_failed;
}

void print_rate(const capx::ConvergenceTable& t) {
  if (t.rate)
    std::fprintf(stderr, "rate: C = %.6g  r^2 = %.6g  (%zu records)\n", t.rate->C,
                 t.rate->r_squared, t.records.size());
  else
    std::fprintf(stderr, "rate: unavailable (%zu records)\n", t.records.size());
}

int run_convergence(const capx::StudyConfig& cfg, const capx::ConvergenceTable& t,
                    capx::PlotAxis axis) {
  emit(capx::to_csv_table(t), cfg.out_csv);
  if (!cfg.out_svg.empty()) capx::write_svg_plot(t, cfg.out_svg, axis);
  print_rate(t);
  return report_failures(t);
}

int dispatch(const capx::StudyConfig& cfg) {
  using capx::StudyKind;
  switch (cfg.study) {
    case StudyKind::ratconv:
      return run_convergence(cfg, capx::run_ratconv(cfg), capx::PlotAxis::sqrt_n);
    case StudyKind::sigconv:
      return run_convergence(cfg, capx::run_sigconv(cfg), capx::PlotAxis::sqrt_n);
    case StudyKind::hpconv:
      return run_convergence(cfg, capx::run_hpconv(cfg), capx::PlotAxis::sqrt_dof);
    case StudyKind::quadconv: {
      auto q = capx::run_quadconv(cfg);
      emit(capx::to_csv_table(q.table), cfg.out_csv);
      if (!cfg.out_svg.empty()) capx::write_svg_plot(q.table, cfg.out_svg, capx::PlotAxis::sqrt_n);
      std::fprintf(stderr, "density: slope = %.6g  correlation = %.6g  (%zu bins fitted)\n",
                   q.density.slope, q.density.correlation, q.density.fitted_bins);
      return report_failures(q.table);
    }
    case StudyKind::poles:
      emit(capx::run_poles(cfg), cfg.out_csv);
      return ok;
    case StudyKind::equiv: {
      auto r = capx::run_equiv(cfg);
      emit(r.csv, cfg.out_csv);
      std::fprintf(stderr, "equiv: max relative %.3g, max mixed %.3g, worst x = %.3g\n",
                   r.max_relative, r.max_mixed, r.worst_x);
      if (!r.passed) {
        std::fprintf(stderr, "FAIL equiv\tdiscrepancy\tmax mixed %.3g exceeds %.3g\n",
                     r.max_mixed, r.threshold);
        return check_failed;
      }
      return ok;
    }
    case StudyKind::decay: {
      auto d = capx::run_decay(cfg);
      emit(d.csv, cfg.out_csv);
      std::fprintf(stderr, "decay: slope of log influence on 5 <= |d| <= 30 is %.6g\n", d.slope);
      return ok;
    }
    case StudyKind::density: {
      capx::QuadratureRule rule;
      if (cfg.nodes_csv.empty()) {
        const auto p = capx::tanh_sinh_level(cfg.quad_level);
        rule = capx::tanh_sinh_rule(p.h, p.N);
      } else {
        rule = capx::read_rule_csv(cfg.nodes_csv);
      }
      const auto hist = capx::node_log_density(rule, cfg.bin_width);
      auto md = cfg.echo();
      md.insert(md.begin(), {"capx_version", capx::kVersion});
      md.emplace_back("rule", capx::describe(rule.kind));
      emit(capx::density_csv(hist, md), cfg.out_csv);
      std::fprintf(stderr, "density: slope = %.6g  correlation = %.6g  (%zu bins fitted)\n",
                   hist.slope, hist.correlation, hist.fitted_bins);
      return ok;
    }
  }
  return failed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"capx: convergence studies for sqrt(x) on [0, 1]"};
  app.set_version_flag("--version", std::string(capx::kVersion));

  std::string study;
  std::string config_path;
  app.add_option("study", study,
                 "ratconv | sigconv | hpconv | quadconv | poles | equiv | decay | density");
  app.add_option("--config", config_path, "key=value settings file");

  // Every other flag is a config key; values are validated by apply_config.
  const std::vector<std::pair<std::string, std::string>> keyed = {
      {"scheme", "pole placement: tapered | uniform"},
      {"sigma", "pole spacing scale"},
      {"activation", "logistic | power:<a>"},
      {"n-min", "smallest pole count"},
      {"n-max", "largest pole count"},
      {"rho", "geometric mesh ratio"},
      {"j-min", "fewest mesh levels"},
      {"j-max", "most mesh levels"},
      {"taper-slope", "degree slope for linear taper"},
      {"uniform-degree", "one degree on every element"},
      {"superexp-c", "use exp(-c j^2) breakpoints (experimental)"},
      {"quad-level", "tanh-sinh preset 1..3"},
      {"bin-width", "density histogram bin width in log x"},
      {"nodes-csv", "node,weight CSV for the density study"},
      {"out-csv", "CSV output path (default stdout)"},
      {"out-svg", "SVG plot output path"},
      {"seed", "RNG seed (recorded in metadata)"},
      {"lawson-iters", "Lawson iteration cap"},
      {"lawson-tol", "Lawson relative stopping tolerance"},
      {"timing", "record wall time per point (true | false)"},
  };
  std::map<std::string, std::optional<std::string>> flag_values;
  for (const auto& [key, help] : keyed) flag_values[key];
  for (const auto& [key, help] : keyed) app.add_option("--" + key, flag_values[key], help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    capx::StudyConfig cfg;
    if (!config_path.empty()) capx::apply_config(cfg, capx::read_config_file(config_path));
    std::map<std::string, std::string> flags;
    for (const auto& [key, v] : flag_values)
      if (v) flags[key] = *v;
    if (!study.empty()) flags["study"] = study;
    capx::apply_config(cfg, flags);
    if (study.empty() && config_path.empty())
      throw capx::UsageError("no study given; run capx --help");
    cfg.validate();
    return dispatch(cfg);
  } catch (const capx::UsageError& e) {
    std::cerr << "FAIL usage\t" << e.what() << "\n";
    return usage;
  } catch (const capx::DomainError& e) {
    std::cerr << "FAIL domain\t" << e.what() << "\n";
    return usage;
  } catch (const capx::IoError& e) {
    std::cerr << "FAIL io\t" << e.what() << "\n";
    return io;
  } catch (const capx::DataError& e) {
    std::cerr << "FAIL data\t" << e.what() << "\n";
    return data;
  } catch (const std::exception& e) {
    std::cerr << "FAIL error\t" << e.what() << "\n";
    return failed;
  }
}
