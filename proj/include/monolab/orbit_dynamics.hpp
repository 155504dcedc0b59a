#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "monolab/semiflow.hpp"

namespace monolab {

enum class LimitStatus { converged, undecided };

/// Profiles of one orbit sampled whenever the base phase comes back near its start,
/// so every sample lives over (nearly) the same fiber.
struct OmegaLimitEstimate {
  TorusPhase fiber;
  double eps_return = 0.0;
  double merge_radius = 0.0;
  std::map<double, Profile> samples;
  /// Return times grouped by sup-distance single linkage.
  std::vector<std::vector<double>> clusters;
  std::vector<double> cluster_diameters;
  /// Hausdorff distance between the halves of successively shorter tail windows.
  std::vector<double> stage_diagnostics;
  double diagnostic = 0.0;
  LimitStatus status = LimitStatus::undecided;

  ProfileSet sample_set() const;
};

struct OmegaLimitOptions {
  /// Return times before this are skipped (transient).
  double burn_in = 0.0;
  /// Stage agreement needed to call the estimate converged.
  double tol = 1e-4;
};

/// Integrates to `horizon` and samples at the closest step of each run of
/// consecutive base returns within eps_return of the initial phase.
OmegaLimitEstimate omega_limit(const SkewState& state, const Problem& problem,
                               const IntegratorConfig& config, double eps_return, double horizon,
                               const OmegaLimitOptions& options = {});

/// True iff the estimate is a single cluster of diameter < tol.
/// Throws Undecided for unconverged estimates.
bool one_cover_check(const OmegaLimitEstimate& estimate, double tol);

struct StabilityModulus {
  /// (eps, delta(eps)) with delta the largest working ladder rung.
  std::vector<std::pair<double, double>> table;
  std::size_t ensemble_size = 0;
  double horizon = 0.0;
  int ladder_depth = 0;
  /// Ensemble member and rung of the first rejected perturbation, if any.
  std::optional<std::size_t> worst_member;
  std::optional<double> worst_delta;
  /// Largest deviation seen by the worst member before rejection.
  double worst_deviation = 0.0;
};

/// 32 perturbation shapes of unit sup norm: 24 signed smooth bumps at varied centres
/// and widths, then 8 uniform noise fields smoothed once.
std::vector<Profile> perturbation_ensemble(const Grid& grid, std::uint64_t seed,
                                           std::size_t count = 32);

/// For each eps, walks delta = eps/2, eps/4, ... (ladder_depth rungs) and keeps the
/// first delta for which every member base + delta*p stays within eps of the base orbit
/// on [0, T]. Throws NotStable if the last rung still fails for some eps.
StabilityModulus stability_probe(const SkewState& base, const Problem& problem,
                                 const IntegratorConfig& config, std::span<const double> eps_list,
                                 std::span<const Profile> ensemble, double T, int ladder_depth = 10,
                                 unsigned workers = 1);

/// Largest sup-distance between the orbits of a and b over n steps (early exit at cap).
double max_orbit_deviation(const Stepper& stepper, SkewState a, SkewState b, long n,
                           double cap = std::numeric_limits<double>::infinity());

void to_json(nlohmann::json& j, const OmegaLimitEstimate& e);
void to_json(nlohmann::json& j, const StabilityModulus& m);

}  // namespace monolab
