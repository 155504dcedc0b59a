#include "monolab/orbit_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <nlohmann/json.hpp>

#include "monolab/error.hpp"
#include "monolab/parallel.hpp"

namespace monolab {

namespace {

struct ReturnStep {
  long step;
  double distance;
};

// Closest step of each run of consecutive returns.
std::vector<ReturnStep> return_steps(const TorusPhase& phase, const FrequencyBasis& basis,
                                     double eps, long first, long last, double dt) {
  std::vector<ReturnStep> out;
  bool in_run = false;
  for (long k = first; k <= last; ++k) {
    const double d = torus_distance(advance_phase(phase, basis, static_cast<double>(k) * dt), phase);
    if (d < eps) {
      if (!in_run || d < out.back().distance) {
        if (in_run) out.back() = {k, d};
        else out.push_back({k, d});
      }
      in_run = true;
    } else {
      in_run = false;
    }
  }
  return out;
}

double diameter(const std::vector<const Profile*>& members) {
  double d = 0.0;
  for (std::size_t i = 0; i < members.size(); ++i)
    for (std::size_t j = i + 1; j < members.size(); ++j)
      d = std::max(d, sup_distance(*members[i], *members[j]));
  return d;
}

std::vector<std::size_t> link_clusters(const std::vector<const Profile*>& p, double radius) {
  std::vector<std::size_t> parent(p.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (sup_distance(*p[i], *p[j]) <= radius) parent[find(j)] = find(i);
  for (std::size_t i = 0; i < p.size(); ++i) parent[i] = find(i);
  return parent;
}

double halves_distance(const std::vector<const Profile*>& window) {
  const std::size_t half = window.size() / 2;
  std::vector<Profile> a, b;
  for (std::size_t i = 0; i < window.size(); ++i) (i < half ? a : b).push_back(*window[i]);
  return hausdorff(ProfileSet(std::move(a)), ProfileSet(std::move(b)));
}

}  // namespace

ProfileSet OmegaLimitEstimate::sample_set() const {
  std::vector<Profile> members;
  members.reserve(samples.size());
  for (const auto& [t, p] : samples) members.push_back(p);
  return ProfileSet(std::move(members));
}

OmegaLimitEstimate omega_limit(const SkewState& state, const Problem& problem,
                               const IntegratorConfig& config, double eps_return, double horizon,
                               const OmegaLimitOptions& options) {
  if (!(eps_return > 0.0) || !(horizon >= 0.0)) {
    throw LabError(ErrorKind::InvalidArgument, "omega_limit needs eps_return > 0 and horizon >= 0");
  }
  const Stepper stepper(problem, config);
  const double dt = config.dt;
  const long last = static_cast<long>(std::floor(horizon / dt + 1e-9));
  const long first = std::max(1L, static_cast<long>(std::ceil(options.burn_in / dt - 1e-9)));
  const auto returns = return_steps(state.phase, problem.reaction.basis(), eps_return, first, last, dt);
  if (returns.empty()) {
    throw LabError(ErrorKind::EmptyReturnSet,
                   "no base return within horizon; increase horizon or eps_return");
  }

  OmegaLimitEstimate est;
  est.fiber = state.phase;
  est.eps_return = eps_return;
  est.merge_radius = 10.0 * eps_return;
  SkewState cur = state;
  std::size_t next = 0;
  stepper.advance(cur, returns.back().step, [&](const SkewState& s, long k) {
    if (next < returns.size() && returns[next].step == k) {
      est.samples.emplace(s.time, s.profile);
      ++next;
    }
  });

  std::vector<const Profile*> ordered;
  std::vector<double> times;
  for (const auto& [t, p] : est.samples) {
    ordered.push_back(&p);
    times.push_back(t);
  }

  for (std::size_t n = ordered.size(); n >= 2;) {
    std::vector<const Profile*> window(ordered.end() - static_cast<long>(n), ordered.end());
    est.stage_diagnostics.push_back(halves_distance(window));
    if (n == 2) break;
    n = (n + 1) / 2;
  }
  const auto& d = est.stage_diagnostics;
  if (!d.empty()) est.diagnostic = d.back();
  if (d.size() >= 2 && d[d.size() - 1] <= options.tol && d[d.size() - 2] <= options.tol) {
    est.status = LimitStatus::converged;
  }

  const auto root = link_clusters(ordered, est.merge_radius);
  std::map<std::size_t, std::size_t> slot;
  std::vector<std::vector<const Profile*>> members;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    auto [it, fresh] = slot.emplace(root[i], est.clusters.size());
    if (fresh) {
      est.clusters.emplace_back();
      members.emplace_back();
    }
    est.clusters[it->second].push_back(times[i]);
    members[it->second].push_back(ordered[i]);
  }
  for (const auto& m : members) est.cluster_diameters.push_back(diameter(m));
  return est;
}

bool one_cover_check(const OmegaLimitEstimate& estimate, double tol) {
  if (estimate.status != LimitStatus::converged) {
    throw LabError(ErrorKind::Undecided, "omega-limit estimate has not converged");
  }
  return estimate.clusters.size() == 1 && estimate.cluster_diameters.front() < tol;
}

std::vector<Profile> perturbation_ensemble(const Grid& grid, std::uint64_t seed,
                                           std::size_t count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t n_bumps = count - count / 4;
  const bool flat = grid.dimension() == 1;
  const Axis& ax = grid.axis(0);
  const Axis& ay = flat ? ax : grid.axis(1);
  const double span = std::min(ax.max - ax.min, ay.max - ay.min);

  auto finish = [&](std::vector<double> v) {
    for (std::size_t k = 0; k < v.size(); ++k)
      if (grid.on_boundary(k)) v[k] = 0.0;
    double peak = 0.0;
    for (double x : v) peak = std::max(peak, std::abs(x));
    if (peak > 0.0)
      for (double& x : v) x /= peak;
    return Profile(grid, std::move(v));
  };

  std::vector<Profile> out;
  out.reserve(count);
  for (std::size_t b = 0; b < n_bumps; ++b) {
    const double cx = ax.min + (ax.max - ax.min) * (0.25 + 0.5 * unit(rng));
    const double cy = ay.min + (ay.max - ay.min) * (0.25 + 0.5 * unit(rng));
    const double w = span * (0.01 + 0.09 * unit(rng));
    const double sign = b % 2 == 0 ? 1.0 : -1.0;
    std::vector<double> v(grid.size());
    for (std::size_t j = 0; j < grid.ny(); ++j) {
      for (std::size_t i = 0; i < grid.nx(); ++i) {
        const double dx = grid.x(i) - cx;
        const double dy = flat ? 0.0 : grid.y(j) - cy;
        v[grid.index(i, j)] = sign * std::exp(-(dx * dx + dy * dy) / (2.0 * w * w));
      }
    }
    out.push_back(finish(std::move(v)));
  }
  while (out.size() < count) {
    std::vector<double> noise(grid.size());
    for (auto& x : noise) x = 2.0 * unit(rng) - 1.0;
    std::vector<double> v(grid.size(), 0.0);
    const std::size_t nx = grid.nx(), ny = grid.ny();
    for (std::size_t j = 0; j < ny; ++j) {
      for (std::size_t i = 0; i < nx; ++i) {
        double acc = noise[grid.index(i, j)];
        int cnt = 1;
        auto take = [&](std::size_t ii, std::size_t jj) {
          acc += noise[grid.index(ii, jj)];
          ++cnt;
        };
        if (i > 0) take(i - 1, j);
        if (i + 1 < nx) take(i + 1, j);
        if (!flat && j > 0) take(i, j - 1);
        if (!flat && j + 1 < ny) take(i, j + 1);
        v[grid.index(i, j)] = acc / cnt;
      }
    }
    out.push_back(finish(std::move(v)));
  }
  return out;
}

double max_orbit_deviation(const Stepper& stepper, SkewState a, SkewState b, long n, double cap) {
  double worst = sup_distance(a.profile, b.profile);
  for (long k = 0; k < n && worst < cap; ++k) {
    stepper.step(a);
    stepper.step(b);
    worst = std::max(worst, sup_distance(a.profile, b.profile));
  }
  return worst;
}

StabilityModulus stability_probe(const SkewState& base, const Problem& problem,
                                 const IntegratorConfig& config, std::span<const double> eps_list,
                                 std::span<const Profile> ensemble, double T, int ladder_depth,
                                 unsigned workers) {
  if (ensemble.empty() || ladder_depth < 1) {
    throw LabError(ErrorKind::InvalidArgument, "stability probe needs an ensemble and a ladder");
  }
  const Stepper stepper(problem, config);
  const long n = stepper.steps_for(T);
  StabilityModulus out;
  out.ensemble_size = ensemble.size();
  out.horizon = T;
  out.ladder_depth = ladder_depth;

  for (double eps : eps_list) {
    if (!(eps > 0.0)) {
      throw LabError(ErrorKind::InvalidArgument, "stability probe needs positive eps");
    }
    std::optional<double> found;
    double delta = eps;
    for (int rung = 1; rung <= ladder_depth && !found; ++rung) {
      delta *= 0.5;
      std::vector<double> dev(ensemble.size());
      parallel_for(ensemble.size(), workers, [&](std::size_t i) {
        SkewState moved = base;
        auto v = moved.profile.values();
        const auto p = ensemble[i].values();
        for (std::size_t k = 0; k < v.size(); ++k) v[k] += delta * p[k];
        dev[i] = max_orbit_deviation(stepper, base, moved, n, eps);
      });
      const auto bad = std::find_if(dev.begin(), dev.end(), [&](double d) { return !(d < eps); });
      if (bad == dev.end()) {
        found = delta;
      } else if (!out.worst_member || rung == ladder_depth) {
        out.worst_member = static_cast<std::size_t>(bad - dev.begin());
        out.worst_delta = delta;
        out.worst_deviation = *bad;
      }
    }
    if (!found) {
      throw LabError(ErrorKind::NotStable,
                     "eps=" + std::to_string(eps) + ": ensemble member " +
                         std::to_string(*out.worst_member) + " leaves the eps-tube even at delta=" +
                         std::to_string(*out.worst_delta));
    }
    out.table.emplace_back(eps, *found);
  }
  return out;
}

void to_json(nlohmann::json& j, const OmegaLimitEstimate& e) {
  j = nlohmann::json::object();
  j["fiber"] = e.fiber.theta();
  j["eps_return"] = e.eps_return;
  j["merge_radius"] = e.merge_radius;
  auto times = nlohmann::json::array();
  for (const auto& [t, p] : e.samples) times.push_back(t);
  j["sample_times"] = times;
  j["clusters"] = e.clusters;
  j["cluster_diameters"] = e.cluster_diameters;
  j["stage_diagnostics"] = e.stage_diagnostics;
  j["diagnostic"] = e.diagnostic;
  j["status"] = e.status == LimitStatus::converged ? "converged" : "undecided";
}

void to_json(nlohmann::json& j, const StabilityModulus& m) {
  j = nlohmann::json::object();
  auto table = nlohmann::json::array();
  for (const auto& [eps, delta] : m.table) table.push_back({{"eps", eps}, {"delta", delta}});
  j["table"] = table;
  j["ensemble_size"] = m.ensemble_size;
  j["horizon"] = m.horizon;
  j["ladder_depth"] = m.ladder_depth;
  j["worst_member"] = m.worst_member ? nlohmann::json(*m.worst_member) : nlohmann::json(nullptr);
  j["worst_delta"] = m.worst_delta ? nlohmann::json(*m.worst_delta) : nlohmann::json(nullptr);
  j["worst_deviation"] = m.worst_deviation;
}

}  // namespace monolab
