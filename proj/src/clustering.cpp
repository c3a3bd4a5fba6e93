#include "capx/clustering.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

#include "capx/error.hpp"
#include "capx/kernels.hpp"

namespace capx {

std::string to_string(PoleScheme s) { return s == PoleScheme::tapered ? "tapered" : "uniform"; }

PoleScheme parse_pole_scheme(const std::string& text) {
  if (text == "tapered") return PoleScheme::tapered;
  if (text == "uniform") return PoleScheme::uniform;
  throw UsageError("unknown pole scheme '" + text + "' (expected uniform|tapered)");
}

ClusteredPoleSet::ClusteredPoleSet(PoleScheme scheme, double sigma, std::vector<double> s)
    : scheme_(scheme), sigma_(sigma), s_(std::move(s)) {
  eps_.reserve(s_.size());
  for (double v : s_) eps_.push_back(std::exp(v));
}

namespace {
void check_pole_args(std::size_t n, double sigma) {
  if (n < 1) throw UsageError("place_poles: n must be >= 1");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw UsageError("place_poles: sigma must be positive");
}
}  // namespace

ClusteredPoleSet place_poles_tapered(std::size_t n, double sigma) {
  check_pole_args(n, sigma);
  const double rn = std::sqrt(static_cast<double>(n));
  std::vector<double> s(n);
  for (std::size_t k = 0; k < n; ++k) s[k] = -sigma * (rn - std::sqrt(static_cast<double>(k)));
  return ClusteredPoleSet(PoleScheme::tapered, sigma, std::move(s));
}

ClusteredPoleSet place_poles_uniform(std::size_t n, double sigma) {
  check_pole_args(n, sigma);
  const double extent = sigma * std::sqrt(static_cast<double>(n));
  std::vector<double> s(n);
  for (std::size_t k = 0; k < n; ++k)
    s[k] = -extent * (static_cast<double>(n - k) / static_cast<double>(n));
  return ClusteredPoleSet(PoleScheme::uniform, sigma, std::move(s));
}

ClusteredPoleSet place_poles(PoleScheme scheme, std::size_t n, double sigma) {
  return scheme == PoleScheme::tapered ? place_poles_tapered(n, sigma)
                                       : place_poles_uniform(n, sigma);
}

// ---------------------------------------------------------------------------

Activation Activation::power(double a) {
  if (!(a > 0.0) || !std::isfinite(a))
    throw DomainError("power activation requires a finite exponent a > 0");
  return Activation(Kind::power, a);
}

std::string Activation::to_string() const {
  if (kind_ == Kind::logistic) return "logistic";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, a_);
  return "power:" + std::string(buf, res.ptr);
}

Activation Activation::parse(const std::string& text) {
  if (text == "logistic") return logistic();
  const std::string prefix = "power:";
  if (text.rfind(prefix, 0) != 0)
    throw UsageError("unknown activation '" + text + "' (expected logistic|power:a)");
  const std::string arg = text.substr(prefix.size());
  auto parse_num = [&](const std::string& t) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size())
      throw UsageError("bad activation exponent '" + arg + "'");
    return v;
  };
  const auto slash = arg.find('/');
  const double a = slash == std::string::npos
                       ? parse_num(arg)
                       : parse_num(arg.substr(0, slash)) / parse_num(arg.substr(slash + 1));
  return power(a);
}

double logistic(double u) {
  if (u > 0.0) {
    const double e = std::exp(-u);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(u));
}

double activation_eval(const Activation& act, double u) {
  if (std::isnan(u)) throw DomainError("activation_eval: NaN argument");
  if (act.kind() == Activation::Kind::logistic || act.exponent() == 1.0) return logistic(u);
  const double a = act.exponent();
  // log(1 + e^u) without overflow
  const double softplus = u > 0.0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u));
  return std::exp(-a * softplus);
}

// ---------------------------------------------------------------------------

SigmoidModel::SigmoidModel(double a0, std::vector<SigmoidTerm> terms, Activation act)
    : a0_(a0), terms_(std::move(terms)), act_(act) {
  if (!std::isfinite(a0_)) throw DomainError("SigmoidModel: non-finite a0");
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    if (!std::isfinite(terms_[k].coeff) || !std::isfinite(terms_[k].shift))
      throw DomainError("SigmoidModel: non-finite term " + std::to_string(k));
    if (k > 0 && !(terms_[k].shift > terms_[k - 1].shift))
      throw DomainError("SigmoidModel: shifts must be strictly increasing");
  }
}

SigmoidModel to_sigmoid_model(const RationalApproximant& r) {
  std::vector<SigmoidTerm> terms;
  terms.reserve(r.size());
  for (const auto& t : r.terms()) {
    if (!(t.eps > 0.0)) throw DomainError("to_sigmoid_model: eps must be positive");
    terms.push_back({t.coeff, std::log(t.eps)});
  }
  return SigmoidModel(r.a0(), std::move(terms), Activation::logistic());
}

RationalApproximant from_sigmoid_model(const SigmoidModel& m) {
  const auto& act = m.activation();
  if (act.kind() != Activation::Kind::logistic && act.exponent() != 1.0)
    throw UsageError("from_sigmoid_model: only logistic models are rational");
  std::vector<PoleTerm> terms;
  terms.reserve(m.terms().size());
  for (const auto& t : m.terms()) terms.push_back({t.coeff, std::exp(t.shift)});
  return RationalApproximant(m.a0(), std::move(terms));
}

double eval_sigmoid_model(const SigmoidModel& m, double s) {
  if (std::isnan(s)) throw DomainError("eval_sigmoid_model: NaN argument");
  double acc = m.a0();
  for (const auto& t : m.terms()) acc += t.coeff * activation_eval(m.activation(), s - t.shift);
  return acc;
}

// ---------------------------------------------------------------------------

namespace {
BasisFunction constant_function() {
  return {[](double) { return 1.0; },
          [](std::span<const double>, std::span<double> out) {
            std::fill(out.begin(), out.end(), 1.0);
          }};
}
}  // namespace

std::vector<BasisFunction> basis_from_poles(const ClusteredPoleSet& poles) {
  std::vector<BasisFunction> basis;
  basis.reserve(poles.n() + 1);
  basis.push_back(constant_function());
  for (double eps : poles.eps_values()) {
    basis.push_back({[eps](double x) { return 1.0 / (1.0 + x / eps); },
                     [eps](std::span<const double> xs, std::span<double> out) {
                       kernels::active().pole_column(xs, eps, out);
                     }});
  }
  return basis;
}

std::vector<BasisFunction> power_basis_from_poles(const ClusteredPoleSet& poles, double a) {
  if (!(a > 0.0) || !std::isfinite(a))
    throw DomainError("power_basis_from_poles: exponent must be positive");
  if (a == 1.0) return basis_from_poles(poles);
  std::vector<BasisFunction> basis;
  basis.reserve(poles.n() + 1);
  basis.push_back(constant_function());
  for (double eps : poles.eps_values())
    basis.push_back({[eps, a](double x) { return std::pow(1.0 + x / eps, -a); }, {}});
  return basis;
}

std::vector<BasisFunction> sigmoid_basis_from_poles(const ClusteredPoleSet& poles,
                                                    const Activation& act) {
  std::vector<BasisFunction> basis;
  basis.reserve(poles.n() + 1);
  basis.push_back(constant_function());
  for (double sk : poles.s_values())
    basis.push_back({[sk, act](double s) { return activation_eval(act, s - sk); }, {}});
  return basis;
}

std::vector<DecayPoint> strip_decay_profile(double s_k, std::span<const double> offsets) {
  std::vector<DecayPoint> out;
  out.reserve(offsets.size());
  for (double d : offsets) {
    if (!std::isfinite(d)) throw UsageError("strip_decay_profile: offsets must be finite");
    const double u = (s_k + d) - s_k;
    out.push_back({d, std::min(logistic(u), logistic(-u))});
  }
  return out;
}

EvaluationGrid log_chebyshev_grid(double s_min, std::size_t basis_count, std::size_t per_function) {
  if (!std::isfinite(s_min) || !(s_min < 0.0))
    throw UsageError("log_chebyshev_grid: s_min must be finite and negative");
  if (basis_count == 0 || per_function == 0)
    throw UsageError("log_chebyshev_grid: empty grid requested");
  const std::size_t m = basis_count * per_function;
  const double lo = s_min - 2.0, hi = 0.0;
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);

  EvaluationGrid g;
  g.s.reserve(m + 2);
  g.s.push_back(-std::numeric_limits<double>::infinity());
  // cos(pi (j + 1/2) / m) for j = m-1 .. 0 gives ascending points
  for (std::size_t j = m; j-- > 0;)
    g.s.push_back(mid + half * std::cos(std::numbers::pi * (static_cast<double>(j) + 0.5) /
                                        static_cast<double>(m)));
  g.s.push_back(0.0);
  g.x.reserve(g.s.size());
  for (double s : g.s) g.x.push_back(std::exp(s));
  return g;
}

}  // namespace capx
