#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "monolab/quasi_periodic.hpp"

namespace monolab {

/// f(t,u) = u (1 - u) (u - a(t)); x-independent.
struct BistableForm {
  QPSignal a;
};

/// f(t,x,u) = u (b(t) rho(|x|) - alpha (1 - rho(|x|)) - u^2), where rho is 1 on
/// |x| <= r_inner, a cos^2 taper in between and 0 on |x| >= r_outer.
struct RadialLogisticForm {
  QPSignal b;
  double alpha = 1.0;
  double r_inner = 1.0;
  double r_outer = 6.0;
};

/// f(t,u) = sum_j c_j(t) u^j; x-independent.
struct PolynomialForm {
  std::vector<QPSignal> coeffs;
};

using ReactionForm = std::variant<BistableForm, RadialLogisticForm, PolynomialForm>;

/// Constants declared for the dissipativity hypotheses. (f3) uses eps0, R0, alpha;
/// the wave condition (F) uses eps0, mu.
struct HypothesisParams {
  double eps0 = 0.0;
  double R0 = 0.0;
  double alpha = 0.0;
  double mu = 0.0;
};

/// Time factors evaluated once per phase so per-node evaluation stays cheap.
struct ReactionSnapshot {
  std::vector<double> factors;
};

class ReactionTerm {
 public:
  explicit ReactionTerm(ReactionForm form, HypothesisParams params = {},
                        std::optional<bool> g_symmetric = std::nullopt,
                        std::optional<bool> zero_at_zero = std::nullopt);

  static ReactionTerm zero(const FrequencyBasis& basis);
  /// f = -rate * u.
  static ReactionTerm linear_decay(const FrequencyBasis& basis, double rate);

  const ReactionForm& form() const noexcept { return form_; }
  const HypothesisParams& params() const noexcept { return params_; }
  const FrequencyBasis& basis() const noexcept { return basis_; }
  std::string form_name() const;

  /// Declared (f1) flag: f depends on x only through |x|.
  bool g_symmetric() const noexcept { return g_symmetric_; }
  /// Declared (f2) flag: f(t,x,0) = 0.
  bool zero_at_zero() const noexcept { return zero_at_zero_; }
  /// Structural: no x dependence at all (required for translations).
  bool x_independent() const noexcept;

  /// Spatial weight at radius r (1 for x-independent forms).
  double weight(double radius) const;
  ReactionSnapshot snapshot(const TorusPhase& phase) const;

  double value(const ReactionSnapshot& s, double weight, double u) const;
  double du(const ReactionSnapshot& s, double weight, double u) const;

  double value(const TorusPhase& phase, double radius, double u) const {
    return value(snapshot(phase), weight(radius), u);
  }
  double du(const TorusPhase& phase, double radius, double u) const {
    return du(snapshot(phase), weight(radius), u);
  }

  /// Upper bound for -df/du over u in [lo, hi], sampled over the torus and radii.
  double sampled_lipschitz(double lo, double hi, double max_radius) const;

 private:
  ReactionForm form_;
  HypothesisParams params_;
  FrequencyBasis basis_;
  bool g_symmetric_ = true;
  bool zero_at_zero_ = false;
};

void to_json(nlohmann::json& j, const ReactionTerm& r);
ReactionTerm reaction_from_json(const nlohmann::json& j);

/// A sampled counterexample to a declared hypothesis.
struct HypothesisWitness {
  std::string hypothesis;
  TorusPhase phase;
  double radius = 0.0;
  double u = 0.0;
  double value = 0.0;
  std::string describe() const;
};

/// Samples f(t,x,0) over phases and radii; returns the first nonzero witness.
std::optional<HypothesisWitness> find_zero_violation(const ReactionTerm& r, double max_radius,
                                                     int samples = 64);
/// Samples df/du <= -alpha on |x| >= R0, |u| <= eps0.
std::optional<HypothesisWitness> find_dissipativity_violation(const ReactionTerm& r,
                                                              double max_radius,
                                                              int samples = 64);
/// Samples df/du <= -mu for |u - limit| < eps0 around each constant limit state.
std::optional<HypothesisWitness> find_wave_condition_violation(const ReactionTerm& r,
                                                               const std::vector<double>& limits,
                                                               int samples = 64);

/// Deterministic sample phases on the torus (Kronecker sequence).
std::vector<TorusPhase> sample_phases(std::size_t m, int count);

}  // namespace monolab
