#pragma once

// Pole placement on the log axis, the s = log x change of variables, and
// activation-function evaluation.
//
// A pole of 1/(1 + x/eps) at x = -eps becomes, with s = log x, the logistic
// 1/(1 + e^(s - s_k)) centered at s_k = log eps.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "capx/approx.hpp"

namespace capx {

enum class PoleScheme { uniform, tapered };

std::string to_string(PoleScheme s);
PoleScheme parse_pole_scheme(const std::string& text);

class ClusteredPoleSet {
 public:
  std::size_t n() const noexcept { return s_.size(); }
  PoleScheme scheme() const noexcept { return scheme_; }
  double sigma() const noexcept { return sigma_; }
  // Strictly increasing, all negative; front() == -sigma * sqrt(n).
  const std::vector<double>& s_values() const noexcept { return s_; }
  const std::vector<double>& eps_values() const noexcept { return eps_; }
  double s_min() const noexcept { return s_.front(); }

 private:
  friend ClusteredPoleSet place_poles_tapered(std::size_t, double);
  friend ClusteredPoleSet place_poles_uniform(std::size_t, double);
  ClusteredPoleSet(PoleScheme scheme, double sigma, std::vector<double> s);

  PoleScheme scheme_;
  double sigma_;
  std::vector<double> s_;
  std::vector<double> eps_;
};

// s_k = -sigma (sqrt(n) - sqrt(k)), k = 0..n-1: density in s falls linearly
// to zero at s_min = -sigma sqrt(n).
ClusteredPoleSet place_poles_tapered(std::size_t n, double sigma);
// s_k = -sigma sqrt(n) (n - k) / n: equispaced with step sigma / sqrt(n).
ClusteredPoleSet place_poles_uniform(std::size_t n, double sigma);
ClusteredPoleSet place_poles(PoleScheme scheme, std::size_t n, double sigma);

class Activation {
 public:
  enum class Kind { logistic, power };

  static Activation logistic() { return Activation(Kind::logistic, 1.0); }
  // (1 + e^u)^(-a); throws DomainError for a <= 0.
  static Activation power(double a);

  Kind kind() const noexcept { return kind_; }
  double exponent() const noexcept { return a_; }
  // "logistic" or "power:<a>"
  std::string to_string() const;
  static Activation parse(const std::string& text);

  bool operator==(const Activation&) const = default;

 private:
  Activation(Kind k, double a) : kind_(k), a_(a) {}
  Kind kind_;
  double a_;
};

// logistic(u) = 1/(1+e^u).  Never forms e^u for u > 0.
double logistic(double u);
double activation_eval(const Activation& act, double u);

struct SigmoidTerm {
  double coeff;
  double shift;  // s_k
};

// a0 + sum_k a_k act(s - s_k), shifts strictly increasing.
class SigmoidModel {
 public:
  SigmoidModel(double a0, std::vector<SigmoidTerm> terms, Activation act = Activation::logistic());

  double a0() const noexcept { return a0_; }
  const std::vector<SigmoidTerm>& terms() const noexcept { return terms_; }
  const Activation& activation() const noexcept { return act_; }

 private:
  double a0_;
  std::vector<SigmoidTerm> terms_;
  Activation act_;
};

SigmoidModel to_sigmoid_model(const RationalApproximant& r);
// Inverse of to_sigmoid_model; requires act == power(1) or logistic.
RationalApproximant from_sigmoid_model(const SigmoidModel& m);
// Accepts s = -inf, where every term equals its coefficient.
double eval_sigmoid_model(const SigmoidModel& m, double s);

// Constant followed by x -> 1/(1 + x/eps_k) in pole order.
std::vector<BasisFunction> basis_from_poles(const ClusteredPoleSet& poles);
// Constant followed by x -> (1 + x/eps_k)^(-a).  a == 1 is basis_from_poles.
std::vector<BasisFunction> power_basis_from_poles(const ClusteredPoleSet& poles, double a);
// The same basis written in s: constant followed by s -> act(s - s_k).
std::vector<BasisFunction> sigmoid_basis_from_poles(const ClusteredPoleSet& poles,
                                                    const Activation& act);

struct DecayPoint {
  double offset;
  double influence;
};

// Distance of the logistic centered at s_k from its nearer asymptote, at
// s_k + d for each offset d.  Decays like e^(-|d|).
std::vector<DecayPoint> strip_decay_profile(double s_k, std::span<const double> offsets);

// Chebyshev (first kind) points in s on [s_min - 2, 0], per_function per
// basis function, plus s = -inf (x = 0) and s = 0 (x = 1).  Ascending.
struct EvaluationGrid {
  std::vector<double> s;
  std::vector<double> x;
};
EvaluationGrid log_chebyshev_grid(double s_min, std::size_t basis_count,
                                  std::size_t per_function = 30);

}  // namespace capx
