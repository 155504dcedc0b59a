#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "monolab/group_actions.hpp"
#include "monolab/orbit_dynamics.hpp"

namespace monolab {

enum class VerdictStatus { pass, fail, hypothesis_unmet, error };

std::string_view to_string(VerdictStatus s);

/// Outcome of one executable prediction. `measured` is a violation magnitude, so
/// pass means measured <= tolerance.
struct VerifierReport {
  std::string name;
  VerdictStatus status = VerdictStatus::error;
  double measured = 0.0;
  double tolerance = 0.0;
  /// Where the reference value comes from: "exact", "analytic", "closed form",
  /// "regression baseline", ...
  std::string provenance;
  double runtime_seconds = 0.0;
  nlohmann::json details = nlohmann::json::object();

  bool passed() const noexcept { return status == VerdictStatus::pass; }
};

void to_json(nlohmann::json& j, const VerifierReport& r);
VerifierReport report_from_json(const nlohmann::json& j);

/// Integrates n_pairs random ordered pairs to T and checks the order at every step.
VerifierReport check_monotone(const Problem& problem, const IntegratorConfig& config,
                              int n_pairs, double T, std::uint64_t seed,
                              const TorusPhase& phase, unsigned workers = 1);

/// max over samples of sup_distance(g u(T, u0), u(T, g u0)).
/// Throws SymmetryFlagMissing unless the reaction declares the needed invariance.
VerifierReport check_equivariance(const Problem& problem, const IntegratorConfig& config,
                                  std::span<const GroupElement> group,
                                  std::span<const Profile> states, double T,
                                  const TorusPhase& phase, double tol = 1e-5);

/// Rotation-invariance of a cover profile. Generic angles use tol_generic; multiples of
/// pi/2 use tol_lattice. `measured` is the worst deviation relative to its tolerance.
/// Reports hypothesis_unmet when `stable` is false.
VerifierReport check_symmetry(const Profile& cover, std::span<const double> angles, bool stable,
                              double tol_generic = 1e-3, double tol_lattice = 1e-8);

/// Comparability of every pair of shifted copies, direction consistent with shift order
/// and strict at the mid-domain node. Boundary nodes are compared non-strictly.
VerifierReport check_total_order(const Profile& wave, std::span<const double> shifts, double tol);

/// Consecutive differences one-signed up to tol.
VerifierReport check_spatial_monotonicity(const Profile& profile, double tol);

struct PhaseSeries {
  std::vector<double> times;
  std::vector<double> sigma;
  std::vector<double> residual;
  double sigma_star = 0.0;
  /// max - min of sigma over the Cauchy window.
  double cauchy_spread = 0.0;
  /// Mean residual over the second half of samples is below that of the first half.
  bool residual_decreasing = false;
};

/// Golden-section search for sigma(t) = argmin sup_distance(u(t), reference(t) shifted by
/// sigma) on [lo, hi]. The Cauchy window is the samples with time >= cauchy_start (default:
/// final quarter). Throws BracketFailure if a minimiser sits on the bracket edge and
/// NoConvergence if the spread over the window exceeds cauchy_tol.
PhaseSeries extract_asymptotic_phase(std::span<const double> times,
                                     std::span<const Profile> trajectory,
                                     std::span<const Profile> reference, double lo, double hi,
                                     double cauchy_tol = 1e-3,
                                     std::optional<double> cauchy_start = std::nullopt,
                                     double search_tol = 1e-6);

/// Evolves the cover and v0 together and checks cover - u >= -2 eps0 exp(-alpha t) at
/// every node with |x| >= R. Hypotheses are checked on the way (cover >= u at the inner
/// rim, df/du <= -alpha on the segment between them outside B_R); a failure throws
/// HypothesisViolated naming the node and time.
VerifierReport check_decay_bound(const Problem& problem, const IntegratorConfig& config,
                                 const SkewState& cover, const Profile& v0, double R, double T,
                                 double slack_tol = 1e-10);

struct SupersolutionResult {
  Profile phi_plus;
  Profile phi_minus;
  VerifierReport trapping;
  VerifierReport monotone_in_time;
  double exterior_deviation_start = 0.0;
  double exterior_deviation_end = 0.0;
};

/// Damped heat equation phi_t = Laplace(phi) - alpha phi outside B_R with data +-3 eps_star
/// on B_R, at the box edge and at t = 0; checks cover + phi- <= u <= cover + phi+ outside
/// B_R and that phi+ never increases. Throws HypothesisViolated if R <= R0, if
/// |cover| > eps_star outside B_R, or if sup |u - cover| reaches eps0/4.
SupersolutionResult supersolution_pair(const Problem& problem, const IntegratorConfig& config,
                                       const SkewState& cover, const Profile& v0, double R,
                                       double eps_star, double T, double tol = 1e-12);

/// w0 = (g cover) wedge cover must stay below both evolved covers at every step.
VerifierReport check_wedge_order(const SkewState& cover, const Translation& g,
                                 const Problem& problem, const IntegratorConfig& config, double T);

}  // namespace monolab
