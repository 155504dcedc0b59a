#include "monolab/theorem_verifiers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "monolab/error.hpp"
#include "monolab/parallel.hpp"

namespace monolab {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

VerifierReport make_report(std::string name, double measured, double tol, std::string provenance,
                           Clock::time_point t0) {
  VerifierReport r;
  r.name = std::move(name);
  r.measured = measured;
  r.tolerance = tol;
  r.status = measured <= tol ? VerdictStatus::pass : VerdictStatus::fail;
  r.provenance = std::move(provenance);
  r.runtime_seconds = seconds_since(t0);
  return r;
}

std::pair<double, double> sample_range(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::wave: return {-0.1, 1.1};
    case ProblemKind::radial: return {-0.5, 1.0};
    case ProblemKind::generic: break;
  }
  return {-0.5, 0.5};
}

// Largest amount by which u exceeds v anywhere (0 if u <= v).
double excess(std::span<const double> u, std::span<const double> v) {
  double worst = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) worst = std::max(worst, u[k] - v[k]);
  return worst;
}

std::vector<std::size_t> exterior_nodes(const Grid& g, double R) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < g.size(); ++k)
    if (g.radius(k) >= R) out.push_back(k);
  return out;
}

// Nodes inside B_R with a lattice neighbour outside it.
std::vector<std::size_t> inner_rim(const Grid& g, double R) {
  std::vector<std::size_t> out;
  const std::size_t nx = g.nx(), ny = g.ny();
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t k = g.index(i, j);
      if (g.radius(k) >= R) continue;
      const bool touches = (i > 0 && g.radius(k - 1) >= R) || (i + 1 < nx && g.radius(k + 1) >= R) ||
                           (j > 0 && g.radius(k - nx) >= R) || (j + 1 < ny && g.radius(k + nx) >= R);
      if (touches) out.push_back(k);
    }
  }
  return out;
}

std::string node_at(const Grid& g, std::size_t k, double t) {
  std::ostringstream os;
  os << "node " << k << " (|x|=" << g.radius(k) << ") at t=" << t;
  return os.str();
}

}  // namespace

std::string_view to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::pass: return "pass";
    case VerdictStatus::fail: return "fail";
    case VerdictStatus::hypothesis_unmet: return "hypothesis_unmet";
    case VerdictStatus::error: return "error";
  }
  return "error";
}

void to_json(nlohmann::json& j, const VerifierReport& r) {
  j = nlohmann::json{{"name", r.name},
                     {"status", std::string(to_string(r.status))},
                     {"measured", r.measured},
                     {"tolerance", r.tolerance},
                     {"provenance", r.provenance},
                     {"runtime_seconds", r.runtime_seconds},
                     {"details", r.details}};
}

VerifierReport report_from_json(const nlohmann::json& j) {
  VerifierReport r;
  r.name = j.at("name").get<std::string>();
  const auto status = j.at("status").get<std::string>();
  if (status == "pass") r.status = VerdictStatus::pass;
  else if (status == "fail") r.status = VerdictStatus::fail;
  else if (status == "hypothesis_unmet") r.status = VerdictStatus::hypothesis_unmet;
  else r.status = VerdictStatus::error;
  r.measured = j.at("measured").is_number() ? j.at("measured").get<double>() : NAN;
  r.tolerance = j.at("tolerance").is_number() ? j.at("tolerance").get<double>() : NAN;
  r.provenance = j.value("provenance", "");
  r.runtime_seconds = j.value("runtime_seconds", 0.0);
  r.details = j.value("details", nlohmann::json::object());
  return r;
}

VerifierReport check_monotone(const Problem& problem, const IntegratorConfig& config,
                              int n_pairs, double T, std::uint64_t seed,
                              const TorusPhase& phase, unsigned workers) {
  const auto t0 = Clock::now();
  const Stepper stepper(problem, config);
  const long n = stepper.steps_for(T);
  const auto [lo, hi] = sample_range(problem.kind);
  const Grid& g = problem.grid;
  std::vector<double> worst(static_cast<std::size_t>(std::max(0, n_pairs)), 0.0);

  parallel_for(worst.size(), workers, [&](std::size_t p) {
    std::seed_seq seq{seed, static_cast<std::uint64_t>(p)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> value(lo, hi), gap(0.0, 0.2), coin(0.0, 1.0);
    std::vector<double> a(g.size()), b(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
      a[k] = value(rng);
      b[k] = coin(rng) < 0.5 ? a[k] : a[k] + gap(rng);
    }
    SkewState sa{Profile(g, std::move(a)), phase, 0.0};
    SkewState sb{Profile(g, std::move(b)), phase, 0.0};
    double w = excess(sa.profile.values(), sb.profile.values());
    for (long k = 0; k < n; ++k) {
      stepper.step(sa);
      stepper.step(sb);
      w = std::max(w, excess(sa.profile.values(), sb.profile.values()));
    }
    worst[p] = w;
  });

  const auto it = std::max_element(worst.begin(), worst.end());
  const double measured = it == worst.end() ? 0.0 : *it;
  auto r = make_report("monotone", measured, 0.0, "exact", t0);
  r.details = {{"pairs", n_pairs}, {"T", T}, {"dt", config.dt}, {"dt_times_L", config.dt * config.lipschitz},
               {"seed", seed}, {"state_range", {lo, hi}}};
  if (measured > 0.0) r.details["worst_pair"] = it - worst.begin();
  return r;
}

VerifierReport check_equivariance(const Problem& problem, const IntegratorConfig& config,
                                  std::span<const GroupElement> group,
                                  std::span<const Profile> states, double T,
                                  const TorusPhase& phase, double tol) {
  const auto t0 = Clock::now();
  for (const auto& g : group) {
    if (std::holds_alternative<Translation>(g)) {
      if (problem.grid.dimension() != 1 || !problem.reaction.x_independent()) {
        throw LabError(ErrorKind::SymmetryFlagMissing,
                       "translations need a 1-D problem with an x-independent reaction");
      }
    } else if (problem.grid.dimension() != 2 || !problem.reaction.g_symmetric()) {
      throw LabError(ErrorKind::SymmetryFlagMissing,
                     "rotations need a 2-D problem whose reaction declares radial symmetry");
    }
  }
  const Stepper stepper(problem, config);
  const long n = stepper.steps_for(T);
  auto evolve = [&](const Profile& u) {
    SkewState s{u, phase, 0.0};
    stepper.advance(s, n);
    return s.profile;
  };
  double worst = 0.0;
  auto per = nlohmann::json::array();
  for (const auto& u0 : states) {
    const Profile uT = evolve(u0);
    for (const auto& g : group) {
      const double d = sup_distance(apply(g, uT), evolve(apply(g, u0)));
      worst = std::max(worst, d);
      per.push_back(d);
    }
  }
  auto r = make_report("equivariance", worst, tol, "exact commutation", t0);
  r.details = {{"deviations", per}, {"T", T}, {"h", problem.grid.h()}};
  return r;
}

VerifierReport check_symmetry(const Profile& cover, std::span<const double> angles, bool stable,
                              double tol_generic, double tol_lattice) {
  const auto t0 = Clock::now();
  if (!stable) {
    VerifierReport r;
    r.name = "symmetry";
    r.status = VerdictStatus::hypothesis_unmet;
    r.measured = NAN;
    r.tolerance = 1.0;
    r.provenance = "exact";
    r.details = {{"reason", "stability probe did not report the cover as uniformly stable"}};
    r.runtime_seconds = seconds_since(t0);
    return r;
  }
  if (cover.grid().dimension() != 2) {
    throw LabError(ErrorKind::DimensionMismatch, "symmetry is checked on 2-D profiles");
  }
  double worst = 0.0;
  auto per = nlohmann::json::array();
  for (double theta : angles) {
    const double q = theta / (0.5 * std::numbers::pi);
    const bool lattice = std::abs(q - std::round(q)) < 1e-12;
    const double tol = lattice ? tol_lattice : tol_generic;
    const double d = sup_distance(apply(Rotation2D(theta), cover), cover);
    worst = std::max(worst, d / tol);
    per.push_back({{"angle", theta}, {"deviation", d}, {"tolerance", tol}});
  }
  auto r = make_report("symmetry", worst, 1.0, "exact", t0);
  r.details = {{"angles", per}, {"measured_is", "worst deviation divided by its tolerance"}};
  return r;
}

VerifierReport check_total_order(const Profile& wave, std::span<const double> shifts, double tol) {
  const auto t0 = Clock::now();
  if (wave.grid().dimension() != 1) {
    throw LabError(ErrorKind::DimensionMismatch, "total order is checked on 1-D profiles");
  }
  std::vector<double> s(shifts.begin(), shifts.end());
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  std::vector<Profile> copies;
  for (double sigma : s) copies.push_back(apply(Translation{sigma}, wave));

  const std::size_t mid = wave.grid().nx() / 2;
  int incomparable = 0, not_strict = 0, direction = 0, inconsistent = 0;
  nlohmann::json witness = nullptr;
  for (std::size_t i = 0; i < copies.size(); ++i) {
    for (std::size_t j = i + 1; j < copies.size(); ++j) {
      const Profile& a = copies[i];
      const Profile& b = copies[j];
      const bool le = leq(a, b, tol);
      const bool ge = leq(b, a, tol);
      if (!le && !ge) {
        ++incomparable;
        if (witness.is_null()) {
          std::size_t above = 0, below = 0;
          for (std::size_t k = 0; k < a.size(); ++k) {
            if (a[k] - b[k] > a[above] - b[above]) above = k;
            if (b[k] - a[k] > b[below] - a[below]) below = k;
          }
          witness = {{"shifts", {s[i], s[j]}}, {"node_first_above", above}, {"node_second_above", below}};
        }
        continue;
      }
      const double gap = b[mid] - a[mid];
      int dir = 0;
      if (le && gap > tol) dir = 1;
      else if (ge && -gap > tol) dir = -1;
      if (dir == 0) {
        ++not_strict;
        continue;
      }
      if (direction == 0) direction = dir;
      else if (dir != direction) ++inconsistent;
    }
  }
  const double violations = incomparable + not_strict + inconsistent;
  auto r = make_report("total_order", violations, 0.0, "exact", t0);
  r.details = {{"shifts", s},
               {"tol", tol},
               {"incomparable_pairs", incomparable},
               {"non_strict_pairs", not_strict},
               {"inconsistent_pairs", inconsistent},
               {"direction", direction > 0 ? "increasing in shift" : direction < 0 ? "decreasing in shift" : "none"},
               {"strictness_node", mid},
               {"note", "strict ordering is required at the mid-domain node only; boundary nodes are compared non-strictly"}};
  if (!witness.is_null()) r.details["witness"] = witness;
  return r;
}

VerifierReport check_spatial_monotonicity(const Profile& profile, double tol) {
  const auto t0 = Clock::now();
  if (profile.grid().dimension() != 1) {
    throw LabError(ErrorKind::DimensionMismatch, "spatial monotonicity is checked on 1-D profiles");
  }
  double up = 0.0, down = 0.0;
  for (std::size_t i = 0; i + 1 < profile.size(); ++i) {
    const double d = profile[i + 1] - profile[i];
    up = std::max(up, d);
    down = std::max(down, -d);
  }
  auto r = make_report("spatial_monotonicity", std::min(up, down), tol, "exact", t0);
  r.details = {{"largest_rise", up}, {"largest_drop", down},
               {"orientation", up <= tol ? "nonincreasing" : down <= tol ? "nondecreasing" : "neither"}};
  return r;
}

PhaseSeries extract_asymptotic_phase(std::span<const double> times,
                                     std::span<const Profile> trajectory,
                                     std::span<const Profile> reference, double lo, double hi,
                                     double cauchy_tol, std::optional<double> cauchy_start,
                                     double search_tol) {
  if (times.size() != trajectory.size() || times.size() != reference.size() || times.empty()) {
    throw LabError(ErrorKind::InvalidArgument, "phase extraction needs matching nonempty series");
  }
  if (!(hi > lo)) {
    throw LabError(ErrorKind::InvalidArgument, "phase bracket must satisfy lo < hi");
  }
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  PhaseSeries out;
  for (std::size_t i = 0; i < times.size(); ++i) {
    auto J = [&](double sigma) { return sup_distance(trajectory[i], apply(Translation{sigma}, reference[i])); };
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = J(c), fd = J(d);
    while (b - a > search_tol) {
      if (fc <= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - inv_phi * (b - a);
        fc = J(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + inv_phi * (b - a);
        fd = J(d);
      }
    }
    const double sigma = 0.5 * (a + b);
    if (sigma - lo < 2.0 * search_tol || hi - sigma < 2.0 * search_tol) {
      throw LabError(ErrorKind::BracketFailure,
                     "phase minimiser at the bracket edge (t=" + std::to_string(times[i]) + ")");
    }
    out.times.push_back(times[i]);
    out.sigma.push_back(sigma);
    out.residual.push_back(J(sigma));
  }

  const std::size_t n = out.times.size();
  std::size_t from = n - std::max<std::size_t>(1, n / 4);
  if (cauchy_start) {
    from = static_cast<std::size_t>(
        std::lower_bound(out.times.begin(), out.times.end(), *cauchy_start - 1e-9) - out.times.begin());
    if (from >= n) from = n - 1;
  }
  const auto [mn, mx] = std::minmax_element(out.sigma.begin() + static_cast<long>(from), out.sigma.end());
  out.cauchy_spread = *mx - *mn;
  out.sigma_star = out.sigma.back();
  double first = 0.0, second = 0.0;
  const std::size_t half = n / 2;
  for (std::size_t i = 0; i < n; ++i) (i < half ? first : second) += out.residual[i];
  first /= static_cast<double>(std::max<std::size_t>(1, half));
  second /= static_cast<double>(n - half);
  out.residual_decreasing = half == 0 || second <= first;
  if (out.cauchy_spread > cauchy_tol) {
    throw LabError(ErrorKind::NoConvergence,
                   "phase series spread " + std::to_string(out.cauchy_spread) +
                       " over the Cauchy window exceeds " + std::to_string(cauchy_tol));
  }
  return out;
}

VerifierReport check_decay_bound(const Problem& problem, const IntegratorConfig& config,
                                 const SkewState& cover, const Profile& v0, double R, double T,
                                 double slack_tol) {
  const auto t0 = Clock::now();
  const auto& hp = problem.reaction.params();
  if (!(hp.eps0 > 0.0) || !(hp.alpha > 0.0)) {
    throw LabError(ErrorKind::HypothesisViolated, "decay bound needs positive eps0 and alpha");
  }
  const Grid& g = problem.grid;
  const Stepper stepper(problem, config);
  const long n = stepper.steps_for(T);
  const auto outside = exterior_nodes(g, R);
  const auto rim = inner_rim(g, R);
  std::vector<double> weight(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) weight[k] = problem.reaction.weight(g.radius(k));

  SkewState ub = cover;
  SkewState u{v0, cover.phase, cover.time};
  double worst = -std::numeric_limits<double>::infinity();
  double worst_t = 0.0;
  std::size_t worst_k = 0;
  for (long step = 0; step <= n; ++step) {
    const double t = static_cast<double>(step) * config.dt;
    const auto snap = problem.reaction.snapshot(ub.phase);
    for (std::size_t k : rim) {
      if (ub.profile[k] < u.profile[k]) {
        throw LabError(ErrorKind::HypothesisViolated,
                       "cover below the solution on the rim of B_R: " + node_at(g, k, t));
      }
    }
    const double bound = -2.0 * hp.eps0 * std::exp(-hp.alpha * t);
    for (std::size_t k : outside) {
      for (double th : {0.0, 0.5, 1.0}) {
        const double s = th * ub.profile[k] + (1.0 - th) * u.profile[k];
        if (problem.reaction.du(snap, weight[k], s) > -hp.alpha) {
          throw LabError(ErrorKind::HypothesisViolated,
                         "df/du > -alpha between cover and solution: " + node_at(g, k, t));
        }
      }
      const double violation = bound - (ub.profile[k] - u.profile[k]);
      if (violation > worst) {
        worst = violation;
        worst_t = t;
        worst_k = k;
      }
    }
    if (step < n) {
      stepper.step(ub);
      stepper.step(u);
    }
  }
  auto r = make_report("decay_bound", worst, slack_tol, "analytic envelope", t0);
  r.details = {{"R", R}, {"T", T}, {"eps0", hp.eps0}, {"alpha", hp.alpha},
               {"alpha_dt", hp.alpha * config.dt}, {"exterior_nodes", outside.size()},
               {"min_slack", -worst}, {"tightest_node", worst_k}, {"tightest_time", worst_t}};
  return r;
}

SupersolutionResult supersolution_pair(const Problem& problem, const IntegratorConfig& config,
                                       const SkewState& cover, const Profile& v0, double R,
                                       double eps_star, double T, double tol) {
  const auto t0 = Clock::now();
  const auto& hp = problem.reaction.params();
  if (!(R > hp.R0)) {
    throw LabError(ErrorKind::HypothesisViolated, "supersolution radius must exceed R0");
  }
  const Grid& g = problem.grid;
  const auto outside = exterior_nodes(g, R);

  Problem damped = make_generic_problem(g, ReactionTerm::linear_decay(problem.reaction.basis(), hp.alpha));
  damped.pinned.assign(g.size(), 0);
  for (std::size_t k = 0; k < g.size(); ++k) damped.pinned[k] = g.radius(k) < R ? 1 : 0;
  IntegratorConfig dcfg = config;
  dcfg.boundary = Boundary::dirichlet_frozen;
  dcfg.lipschitz = hp.alpha;
  const Stepper heat(damped, dcfg);
  const Stepper flow(problem, config);
  const long n = flow.steps_for(T);

  SkewState plus{Profile::constant(g, 3.0 * eps_star), cover.phase, 0.0};
  SkewState minus{Profile::constant(g, -3.0 * eps_star), cover.phase, 0.0};
  SkewState ub = cover;
  SkewState u{v0, cover.phase, cover.time};

  double trap = 0.0, rise = 0.0;
  nlohmann::json trap_at = nullptr;
  auto exterior_dev = [&] {
    double d = 0.0;
    for (std::size_t k : outside) d = std::max(d, std::abs(u.profile[k] - ub.profile[k]));
    return d;
  };
  SupersolutionResult res{plus.profile, minus.profile, {}, {}, exterior_dev(), 0.0};

  for (long step = 0; step <= n; ++step) {
    const double t = static_cast<double>(step) * config.dt;
    for (std::size_t k : outside) {
      if (std::abs(ub.profile[k]) > eps_star) {
        throw LabError(ErrorKind::HypothesisViolated, "|cover| exceeds eps_star outside B_R: " + node_at(g, k, t));
      }
    }
    if (!(sup_distance(u.profile, ub.profile) < hp.eps0 / 4.0)) {
      throw LabError(ErrorKind::HypothesisViolated,
                     "sup |u - cover| reached eps0/4 at t=" + std::to_string(t));
    }
    for (std::size_t k : outside) {
      const double above = u.profile[k] - (ub.profile[k] + plus.profile[k]);
      const double below = (ub.profile[k] + minus.profile[k]) - u.profile[k];
      const double v = std::max(above, below);
      if (v > trap) {
        trap = v;
        trap_at = {{"kind", std::string(to_string(ErrorKind::TrappingViolated))}, {"node", k},
                   {"radius", g.radius(k)}, {"time", t}};
      }
    }
    if (step == n) break;
    const Profile before = plus.profile;
    heat.step(plus);
    heat.step(minus);
    flow.step(ub);
    flow.step(u);
    rise = std::max(rise, excess(plus.profile.values(), before.values()));
  }
  res.exterior_deviation_end = exterior_dev();
  res.phi_plus = plus.profile;
  res.phi_minus = minus.profile;
  res.trapping = make_report("supersolution_trapping", trap, tol, "comparison with damped heat flow", t0);
  res.trapping.details = {{"R", R}, {"eps_star", eps_star}, {"T", T},
                          {"exterior_deviation_start", res.exterior_deviation_start},
                          {"exterior_deviation_end", res.exterior_deviation_end}};
  if (!trap_at.is_null()) res.trapping.details["worst"] = trap_at;
  res.monotone_in_time = make_report("supersolution_monotone", rise, tol, "exact", t0);
  res.monotone_in_time.details = {{"largest_increase", rise}};
  return res;
}

VerifierReport check_wedge_order(const SkewState& cover, const Translation& g,
                                 const Problem& problem, const IntegratorConfig& config, double T) {
  const auto t0 = Clock::now();
  const Stepper stepper(problem, config);
  const long n = stepper.steps_for(T);
  SkewState a = cover;
  SkewState b{apply(g, cover.profile), cover.phase, cover.time};
  SkewState w{wedge(a.profile, b.profile), cover.phase, cover.time};
  double worst = 0.0;
  auto check = [&] {
    worst = std::max({worst, excess(w.profile.values(), a.profile.values()),
                      excess(w.profile.values(), b.profile.values())});
  };
  check();
  for (long k = 0; k < n; ++k) {
    stepper.step(a);
    stepper.step(b);
    stepper.step(w);
    check();
  }
  auto r = make_report("wedge_order", worst, 0.0, "exact", t0);
  r.details = {{"shift", g.sigma}, {"T", T},
               {"final_gap_to_cover", sup_distance(w.profile, a.profile)},
               {"final_gap_to_shifted", sup_distance(w.profile, b.profile)}};
  return r;
}

}  // namespace monolab
