#pragma once

// Reproducible convergence studies and their file outputs.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "capx/approx.hpp"
#include "capx/clustering.hpp"
#include "capx/csv.hpp"
#include "capx/hp_mesh.hpp"
#include "capx/quadrature.hpp"

namespace capx {

inline constexpr const char* kVersion = "0.1.0";
// Records below this are at the rounding floor and are left out of rate fits.
inline constexpr double kRateErrorFloor = 1e-14;

enum class StudyKind { ratconv, sigconv, hpconv, quadconv, poles, equiv, decay, density };
std::string to_string(StudyKind k);
StudyKind parse_study_kind(const std::string& text);

struct StudyConfig {
  StudyKind study = StudyKind::ratconv;
  PoleScheme scheme = PoleScheme::tapered;
  double sigma = 4.4428829381583662;  // pi * sqrt(2)
  Activation activation = Activation::logistic();
  int n_min = 1;
  int n_max = 20;
  double rho = 0.5;
  int j_min = 1;
  int j_max = 20;
  std::optional<double> taper_slope;   // default strategy: taper with slope 1
  std::optional<int> uniform_degree;
  std::optional<double> superexp_c;    // hpconv on exp(-c j^2) meshes
  int quad_level = 3;
  double bin_width = 1.0;
  std::string nodes_csv;
  std::string out_csv;
  std::string out_svg;
  std::uint64_t seed = 1;
  int lawson_max_iters = 400;
  double lawson_tol = 1e-9;
  bool record_timing = false;

  // Ordered key=value echo; keys match the config-file/flag names.
  std::vector<std::pair<std::string, std::string>> echo() const;
  DegreeStrategy degree_strategy() const;
  void validate() const;
};

// Flat key=value text (blank lines and '#' comments ignored).
std::map<std::string, std::string> parse_config_text(const std::string& text);
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);
// Applies entries onto cfg; unknown keys raise UsageError.
void apply_config(StudyConfig& cfg, const std::map<std::string, std::string>& entries);

struct ConvergenceRecord {
  double index;
  double sup_error;
  double wall_time_s;

  bool operator==(const ConvergenceRecord&) const = default;
};

struct ConvergenceTable {
  std::string index_column = "n";
  std::string error_column = "sup_error";
  std::vector<ConvergenceRecord> records;
  std::vector<std::pair<std::string, std::string>> metadata;
  std::optional<RateFit> rate;
  // Machine-readable descriptions of study points that failed.
  std::vector<std::string> failures;
};

CsvTable to_csv_table(const ConvergenceTable& table);
ConvergenceTable from_csv_table(const CsvTable& csv);
void write_csv(const ConvergenceTable& table, const std::filesystem::path& path);
ConvergenceTable read_convergence_csv(const std::filesystem::path& path);

// Fits the rate to records with sup_error >= kRateErrorFloor and records it
// in the metadata.  Leaves rate empty if fewer than three remain.
void attach_rate(ConvergenceTable& table);

enum class PlotAxis { sqrt_n, sqrt_dof };
std::string render_svg_plot(const ConvergenceTable& table, PlotAxis axis);
void write_svg_plot(const ConvergenceTable& table, const std::filesystem::path& path,
                    PlotAxis axis);

// One fixed-pole Lawson fit of sqrt(x) on the standard log-Chebyshev grid.
struct SqrtFit {
  ClusteredPoleSet poles;
  EvaluationGrid grid;
  LawsonResult lawson;
};
SqrtFit fit_sqrt_rational(std::size_t n, const StudyConfig& cfg);
// Same problem in s = log x: target e^(s/2), activation-shaped basis.
SqrtFit fit_sqrt_sigmoid(std::size_t n, const StudyConfig& cfg);
// Only for logistic / power(1) fits.
RationalApproximant to_rational(const SqrtFit& fit);

ConvergenceTable run_ratconv(const StudyConfig& cfg);
ConvergenceTable run_sigconv(const StudyConfig& cfg);
ConvergenceTable run_hpconv(const StudyConfig& cfg);

struct QuadStudy {
  ConvergenceTable table;  // nodes vs |integral - 2/3|
  DensityHistogram density;
  CsvTable density_csv;
};
QuadStudy run_quadconv(const StudyConfig& cfg);

struct EquivReport {
  std::size_t n = 0;
  std::size_t points = 0;
  // max |r(x) - R(log x)| / max(|r(x)|, |R(log x)|)
  double max_relative = 0.0;
  // max |r(x) - R(log x)| / (1 + |r(x)|); this one decides `passed`
  double max_mixed = 0.0;
  double worst_x = 0.0;
  // Same measure at 100 points drawn from cfg.seed.
  double spot_max_mixed = 0.0;
  double threshold = 1e-12;
  bool passed = false;
  CsvTable csv;
};
EquivReport run_equiv(const StudyConfig& cfg);

CsvTable run_poles(const StudyConfig& cfg);

struct DecayStudy {
  std::vector<DecayPoint> profile;
  double slope = 0.0;  // of log influence vs |d| on [5, 30]
  CsvTable csv;
};
DecayStudy run_decay(const StudyConfig& cfg);

// Least-squares slope of log(influence) against |d| for dlo <= |d| <= dhi.
double decay_slope(const std::vector<DecayPoint>& profile, double dlo, double dhi);

CsvTable density_csv(const DensityHistogram& hist,
                     const std::vector<std::pair<std::string, std::string>>& metadata);

// Worker count: CAPX_THREADS if set (>= 1), else hardware concurrency.
unsigned worker_count();

}  // namespace capx
