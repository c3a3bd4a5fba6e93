#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "capx/error.hpp"
#include "capx/studies.hpp"

namespace capx {

namespace {
const std::pair<StudyKind, const char*> kStudyNames[] = {
    {StudyKind::ratconv, "ratconv"}, {StudyKind::sigconv, "sigconv"},
    {StudyKind::hpconv, "hpconv"},   {StudyKind::quadconv, "quadconv"},
    {StudyKind::poles, "poles"},     {StudyKind::equiv, "equiv"},
    {StudyKind::decay, "decay"},     {StudyKind::density, "density"},
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return static_cast<int>(x);
  } catch (const std::exception&) {
    throw UsageError("config key '" + key + "': expected an integer, got '" + v + "'");
  }
}

double parse_real(const std::string& key, const std::string& v) {
  try {
    return parse_double(v);
  } catch (const UsageError&) {
    throw UsageError("config key '" + key + "': expected a number, got '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw UsageError("config key '" + key + "': expected a boolean, got '" + v + "'");
}
}  // namespace

std::string to_string(StudyKind k) {
  for (const auto& [kind, name] : kStudyNames)
    if (kind == k) return name;
  return "unknown";
}

StudyKind parse_study_kind(const std::string& text) {
  for (const auto& [kind, name] : kStudyNames)
    if (text == name) return kind;
  throw UsageError("unknown study '" + text + "'");
}

std::vector<std::pair<std::string, std::string>> StudyConfig::echo() const {
  auto opt_real = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("none");
  };
  return {
      {"study", to_string(study)},
      {"scheme", to_string(scheme)},
      {"sigma", format_double(sigma)},
      {"activation", activation.to_string()},
      {"n-min", std::to_string(n_min)},
      {"n-max", std::to_string(n_max)},
      {"rho", format_double(rho)},
      {"j-min", std::to_string(j_min)},
      {"j-max", std::to_string(j_max)},
      {"taper-slope", opt_real(taper_slope)},
      {"uniform-degree", uniform_degree ? std::to_string(*uniform_degree) : "none"},
      {"superexp-c", opt_real(superexp_c)},
      {"quad-level", std::to_string(quad_level)},
      {"bin-width", format_double(bin_width)},
      {"nodes-csv", nodes_csv.empty() ? "none" : nodes_csv},
      {"seed", std::to_string(seed)},
      {"lawson-iters", std::to_string(lawson_max_iters)},
      {"lawson-tol", format_double(lawson_tol)},
      {"timing", record_timing ? "true" : "false"},
  };
}

DegreeStrategy StudyConfig::degree_strategy() const {
  if (uniform_degree) return UniformDegree{*uniform_degree};
  return LinearTaper{taper_slope.value_or(1.0)};
}

void StudyConfig::validate() const {
  if (!(sigma > 0.0)) throw UsageError("sigma must be positive");
  if (n_min < 1 || n_max < n_min) throw UsageError("need 1 <= n-min <= n-max");
  if (j_min < 1 || j_max < j_min) throw UsageError("need 1 <= j-min <= j-max");
  if (!(rho > 0.0 && rho < 1.0)) throw UsageError("rho must lie in (0, 1)");
  if (taper_slope && uniform_degree)
    throw UsageError("--taper-slope and --uniform-degree are mutually exclusive");
  if (taper_slope && !(*taper_slope > 0.0)) throw UsageError("taper slope must be positive");
  if (uniform_degree && *uniform_degree < 0) throw UsageError("uniform degree must be >= 0");
  if (superexp_c && !(*superexp_c > 0.0)) throw UsageError("superexp-c must be positive");
  if (quad_level < 1 || quad_level > 3) throw UsageError("quad-level must be 1, 2 or 3");
  if (!(bin_width > 0.0)) throw UsageError("bin-width must be positive");
  if (lawson_max_iters < 1) throw UsageError("lawson-iters must be >= 1");
  if (!(lawson_tol >= 0.0)) throw UsageError("lawson-tol must be >= 0");
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw UsageError("config line " + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(t.substr(0, eq));
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    out[key] = trim(t.substr(eq + 1));
  }
  return out;
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

void apply_config(StudyConfig& cfg, const std::map<std::string, std::string>& entries) {
  for (const auto& [key, v] : entries) {
    if (key == "study") cfg.study = parse_study_kind(v);
    else if (key == "scheme") cfg.scheme = parse_pole_scheme(v);
    else if (key == "sigma") cfg.sigma = parse_real(key, v);
    else if (key == "activation") cfg.activation = Activation::parse(v);
    else if (key == "n-min") cfg.n_min = parse_int(key, v);
    else if (key == "n-max") cfg.n_max = parse_int(key, v);
    else if (key == "rho") cfg.rho = parse_real(key, v);
    else if (key == "j-min") cfg.j_min = parse_int(key, v);
    else if (key == "j-max") cfg.j_max = parse_int(key, v);
    else if (key == "taper-slope") cfg.taper_slope = parse_real(key, v);
    else if (key == "uniform-degree") cfg.uniform_degree = parse_int(key, v);
    else if (key == "superexp-c") cfg.superexp_c = parse_real(key, v);
    else if (key == "quad-level") cfg.quad_level = parse_int(key, v);
    else if (key == "bin-width") cfg.bin_width = parse_real(key, v);
    else if (key == "nodes-csv") cfg.nodes_csv = v;
    else if (key == "out-csv") cfg.out_csv = v;
    else if (key == "out-svg") cfg.out_svg = v;
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(key, v));
    else if (key == "lawson-iters") cfg.lawson_max_iters = parse_int(key, v);
    else if (key == "lawson-tol") cfg.lawson_tol = parse_real(key, v);
    else if (key == "timing") cfg.record_timing = parse_bool(key, v);
    else throw UsageError("unknown config key '" + key + "'");
  }
}

unsigned worker_count() {
  if (const char* env = std::getenv("CAPX_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace capx
