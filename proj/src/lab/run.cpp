#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numbers>
#include <optional>
#include <sstream>

#include "monolab/error.hpp"
#include "monolab/group_actions.hpp"
#include "monolab/lab.hpp"
#include "monolab/parallel.hpp"
#include "monolab/scenarios.hpp"

#ifndef MONOLAB_VERSION
#define MONOLAB_VERSION "0.0.0"
#endif

namespace monolab {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

class DirLock {
 public:
  explicit DirLock(const fs::path& dir) : path_(dir / ".mlab.lock") {
    std::FILE* f = std::fopen(path_.c_str(), "wx");
    if (!f) throw LabError(ErrorKind::IoError, "another run holds " + path_.string());
    std::fprintf(f, "%ld\n", static_cast<long>(::getpid()));
    std::fclose(f);
  }
  ~DirLock() {
    std::error_code ec;
    fs::remove(path_, ec);
  }
  DirLock(const DirLock&) = delete;
  DirLock& operator=(const DirLock&) = delete;

 private:
  fs::path path_;
};

std::ofstream open_out(const fs::path& p) {
  std::ofstream os(p);
  if (!os) throw LabError(ErrorKind::IoError, "cannot write " + p.string());
  os << std::setprecision(17);
  return os;
}

/// Files written next to the report plus their manifests.
class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) {
    fs::create_directories(dir_ / "profiles");
    fs::create_directories(dir_ / "plots");
  }

  const fs::path& dir() const { return dir_; }

  void profile(const std::string& name, const Profile& u, const std::string& description, double time) {
    save_binary(dir_ / "profiles" / (name + ".bin"), u);
    const Grid& g = u.grid();
    json grid = {{"x", {g.axis(0).min, g.axis(0).max, g.axis(0).n}}};
    if (g.dimension() == 2) grid["y"] = {g.axis(1).min, g.axis(1).max, g.axis(1).n};
    profiles_.push_back({{"file", name + ".bin"}, {"description", description}, {"time", time}, {"grid", grid}});
  }

  void plot(const std::string& name, const std::vector<std::string>& columns,
            const std::vector<std::vector<double>>& rows, const std::string& x, const std::string& y,
            const std::string& title) {
    auto os = open_out(dir_ / "plots" / (name + ".csv"));
    for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
    os << '\n';
    for (const auto& r : rows) {
      for (std::size_t c = 0; c < r.size(); ++c) os << (c ? "," : "") << r[c];
      os << '\n';
    }
    plots_.push_back({{"file", name + ".csv"}, {"columns", columns}, {"x", x}, {"y", y}, {"title", title}});
  }

  void finish() const {
    open_out(dir_ / "profiles" / "manifest.json") << json{{"format", "monolab binary profile"}, {"profiles", profiles_}}.dump(2)
                                                  << '\n';
    open_out(dir_ / "plots" / "manifest.json") << json{{"plots", plots_}}.dump(2) << '\n';
  }

 private:
  fs::path dir_;
  json profiles_ = json::array();
  json plots_ = json::array();
};

class TrajectoryWriter {
 public:
  explicit TrajectoryWriter(const fs::path& p) : os_(open_out(p)) { os_ << "time,node,value\n"; }
  void record(const SkewState& s) {
    for (std::size_t k = 0; k < s.profile.size(); ++k) os_ << s.time << ',' << k << ',' << s.profile[k] << '\n';
  }

 private:
  std::ofstream os_;
};

json summarize(const std::string& name, double t0, const SkewState& end, long steps) {
  const auto& v = end.profile.values();
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return {{"name", name}, {"t_start", t0}, {"t_end", end.time}, {"steps", steps},
          {"final_sup_norm", sup_norm(end.profile)}, {"final_min", *lo}, {"final_max", *hi}};
}

VerdictStatus status_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::HypothesisViolated:
    case ErrorKind::NotStable:
    case ErrorKind::SymmetryFlagMissing:
      return VerdictStatus::hypothesis_unmet;
    case ErrorKind::TrappingViolated:
      return VerdictStatus::fail;
    default:
      return VerdictStatus::error;
  }
}

VerifierReport guarded(const std::string& name, const std::function<VerifierReport()>& fn) {
  const auto t0 = Clock::now();
  VerifierReport r;
  try {
    r = fn();
  } catch (const LabError& e) {
    r = VerifierReport{};
    r.status = status_for(e.kind());
    r.measured = NAN;
    r.tolerance = NAN;
    r.details = {{"error_kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
  } catch (const std::exception& e) {
    r = VerifierReport{};
    r.status = VerdictStatus::error;
    r.measured = NAN;
    r.tolerance = NAN;
    r.details = {{"message", e.what()}};
  }
  r.name = name;
  r.runtime_seconds = seconds_since(t0);
  return r;
}

VerifierReport ratio_report(double measured, const std::string& provenance) {
  VerifierReport r;
  r.measured = measured;
  r.tolerance = 1.0;
  r.status = measured <= 1.0 ? VerdictStatus::pass : VerdictStatus::fail;
  r.provenance = provenance;
  return r;
}

Profile combine(const Profile& base, double scale, const Profile& p) {
  std::vector<double> v(base.values().begin(), base.values().end());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] += scale * p[k];
  return Profile(base.grid(), std::move(v));
}

Profile combine_abs(const Profile& base, double scale, const Profile& p) {
  std::vector<double> v(base.values().begin(), base.values().end());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] += scale * std::abs(p[k]);
  return Profile(base.grid(), std::move(v));
}

const Profile& member(const std::vector<Profile>& ens, const json& index) {
  return ens.at(index.get<std::size_t>() % ens.size());
}

Grid coarsened(const Grid& g, std::size_t k) {
  const auto n = [k](const Axis& a) { return (a.n - 1) / k + 1; };
  if (g.dimension() == 1) return Grid::line(g.axis(0).min, g.axis(0).max, n(g.axis(0)));
  return Grid::box(g.axis(0).min, g.axis(0).max, n(g.axis(0)), g.axis(1).min, g.axis(1).max, n(g.axis(1)));
}

/// Shared state of a run: the cover, its orbit analyses and the verifier closures.
struct Context {
  const ExperimentConfig& cfg;
  unsigned workers;
  Outputs out;
  std::vector<Profile> ensemble;
  std::optional<Problem> problem;
  std::optional<SkewState> cover;
  std::optional<OmegaLimitEstimate> estimate;
  std::optional<StabilityModulus> stability;
  json stability_error = nullptr;
  json trajectories = json::array();
  json analyses = json::object();

  bool selected(const std::string& name) const {
    return std::any_of(cfg.verifiers.begin(), cfg.verifiers.end(), [&](const auto& v) { return v.name == name; });
  }
  const json& options(const std::string& name) const {
    for (const auto& v : cfg.verifiers)
      if (v.name == name) return v.options;
    throw LabError(ErrorKind::InvalidArgument, "verifier not selected: " + name);
  }
  const json& stage(const std::string& name) const { return cfg.run.at(name); }
};

void run_omega_limit(Context& c) {
  const json& o = c.stage("omega_limit");
  OmegaLimitOptions opt;
  opt.burn_in = o.at("burn_in").get<double>();
  opt.tol = o.at("tol").get<double>();
  try {
    c.estimate = omega_limit(*c.cover, *c.problem, c.cfg.integrator, o.at("eps_return").get<double>(),
                             o.at("horizon").get<double>(), opt);
    c.analyses["omega_limit"] = *c.estimate;
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < c.estimate->stage_diagnostics.size(); ++i)
      rows.push_back({static_cast<double>(i), c.estimate->stage_diagnostics[i]});
    c.out.plot("omega_stages", {"stage", "diagnostic"}, rows, "stage", "diagnostic",
               "Hausdorff distance between window halves per refinement stage");
  } catch (const LabError& e) {
    c.analyses["omega_limit"] = {{"error_kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
  }
}

void run_stability(Context& c) {
  if (!c.selected("stability") && !c.selected("symmetry")) return;
  const json o = c.selected("stability") ? c.options("stability") : json{{"eps", {0.05}}, {"T", 20.0}, {"members", 8}, {"ladder_depth", 6}};
  const auto eps = o.at("eps").get<std::vector<double>>();
  const auto n = std::min(o.at("members").get<std::size_t>(), c.ensemble.size());
  const std::vector<Profile> ens(c.ensemble.begin(), c.ensemble.begin() + static_cast<long>(n));
  try {
    c.stability = stability_probe(*c.cover, *c.problem, c.cfg.integrator, eps, ens, o.at("T").get<double>(),
                                  o.at("ladder_depth").get<int>(), c.workers);
    c.analyses["stability"] = *c.stability;
    std::vector<std::vector<double>> rows;
    for (const auto& [e, d] : c.stability->table) rows.push_back({e, d});
    c.out.plot("stability", {"eps", "delta"}, rows, "eps", "delta", "Stability modulus delta(eps)");
  } catch (const LabError& e) {
    c.stability_error = {{"error_kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
    c.analyses["stability"] = c.stability_error;
  }
}

VerifierReport stability_report(const Context& c) {
  if (!c.stability) {
    if (c.stability_error.is_null()) throw LabError(ErrorKind::InvalidArgument, "stability probe did not run");
    const auto kind = c.stability_error.at("error_kind").get<std::string>();
    throw LabError(kind == "NotStable" ? ErrorKind::NotStable : ErrorKind::NoConvergence,
                   c.stability_error.at("message").get<std::string>());
  }
  VerifierReport r;
  r.status = VerdictStatus::pass;
  r.measured = 0.0;
  r.tolerance = 0.0;
  r.provenance = "ensemble probe";
  r.details = *c.stability;
  r.details["measured_is"] = "number of eps values without a working delta";
  return r;
}

VerifierReport one_cover_report(const Context& c, const json& o) {
  if (!c.estimate) throw LabError(ErrorKind::NoConvergence, "omega-limit estimate unavailable");
  const double tol = o.at("tol").get<double>();
  const double htol = o.at("hausdorff_tol").get<double>();
  const bool single = one_cover_check(*c.estimate, tol);
  const double hd = hausdorff(c.estimate->sample_set(), ProfileSet({c.cover->profile}));
  double diam = 0.0;
  for (double d : c.estimate->cluster_diameters) diam = std::max(diam, d);
  double measured = std::max(hd / htol, diam / tol);
  if (c.estimate->clusters.size() != 1) measured = std::max(measured, static_cast<double>(c.estimate->clusters.size()));
  auto r = ratio_report(measured, "exact");
  r.details = {{"one_cover", single}, {"clusters", c.estimate->clusters.size()}, {"max_cluster_diameter", diam},
               {"hausdorff_to_cover", hd}, {"samples", c.estimate->samples.size()},
               {"diagnostic", c.estimate->diagnostic},
               {"measured_is", "max(hausdorff/hausdorff_tol, diameter/tol), or the cluster count if above one"}};
  return r;
}

VerifierReport monotone_report(const Context& c, const json& o, const std::optional<QPSignal>& speed) {
  const Grid g = coarsened(c.cfg.grid, o.at("coarsen").get<std::size_t>());
  Problem p = speed ? make_wave_problem(g, c.cfg.reaction, *speed)
                    : (c.cfg.scenario == Scenario::radial_2d ? make_radial_problem(g, c.cfg.reaction)
                                                             : make_generic_problem(g, c.cfg.reaction));
  const double lo = c.cfg.scenario == Scenario::wave_1d ? -0.1 : -0.5;
  const double hi = c.cfg.scenario == Scenario::wave_1d ? 1.1 : (c.cfg.scenario == Scenario::radial_2d ? 1.0 : 0.5);
  double rmax = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) rmax = std::max(rmax, g.radius(k));
  const double L = c.cfg.reaction.sampled_lipschitz(lo, hi, rmax);
  const double T = o.at("T").get<double>();
  const double target = o.at("dt_L").get<double>();
  const double dt = L > 0.0 ? T / std::ceil(T * L / target) : c.cfg.integrator.dt;
  const IntegratorConfig cfg{dt, c.cfg.integrator.boundary, L};
  auto r = check_monotone(p, cfg, o.at("pairs").get<int>(), T, c.cfg.seed, c.cover->phase, 1);
  r.details["h"] = g.h();
  r.details["sampled_lipschitz"] = L;
  return r;
}

// ---------------------------------------------------------------------------------------------
// wave_1d

void prepare_wave(Context& c) {
  const Grid& g = c.cfg.grid;
  const json& init = c.stage("initial");
  const double width = init.at("width").get<double>();
  const Profile& bump = member(c.ensemble, init.at("member"));
  const double amp = init.at("bump").get<double>();
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    v[i] = std::clamp(0.5 * (1.0 - std::tanh(g.x(i) / width)) + amp * bump[i], 0.0, 1.0);
  const Profile initial(g, std::move(v));
  c.out.profile("initial", initial, "seeded non-monotone initial front", 0.0);

  const json& f = c.stage("frame");
  FrameFitOptions fo;
  fo.harmonics = f.at("harmonics").get<int>();
  fo.relax = f.at("relax").get<double>();
  fo.window = f.at("window").get<double>();
  fo.sample_every = f.at("sample_every").get<double>();
  fo.level = f.at("level").get<double>();
  fo.drift_tol = f.at("drift_tol").get<double>();
  fo.max_iterations = f.at("max_iterations").get<int>();
  const auto& basis = c.cfg.reaction.basis();
  SkewState s{initial, TorusPhase::zero(basis.size()), 0.0};
  const auto fit = fit_frame_speed(c.cfg.reaction, g, c.cfg.integrator,
                                   QPSignal::constant(basis, f.at("initial_speed").get<double>()), s, fo);
  const MultiIndex zero(basis.size(), 0);
  c.analyses["frame_fit"] = {{"mean_speed", fit.speed.modes().count(zero) ? fit.speed.modes().at(zero).real() : 0.0},
                             {"drift_history", fit.drift_history},
                             {"front_position", fit.front_position},
                             {"speed", fit.speed}};
  c.trajectories.push_back(summarize("frame_fit", 0.0, s, std::lround(s.time / c.cfg.integrator.dt)));
  c.problem = make_wave_problem(g, c.cfg.reaction, fit.speed);
  c.cover = s;
  c.out.profile("cover", s.profile, "converged wave profile over the recorded fiber", s.time);

  // Relaxation of the initial front in the fitted frame.
  const Stepper stepper(*c.problem, c.cfg.integrator);
  const json& tr = c.stage("trajectory");
  TrajectoryWriter traj(c.out.dir() / "trajectory.csv");
  SkewState t{initial, TorusPhase::zero(basis.size()), 0.0};
  traj.record(t);
  const long every = stepper.steps_for(tr.at("sample_every").get<double>());
  const long n = stepper.steps_for(tr.at("T").get<double>());
  stepper.advance(t, n, [&](const SkewState& st, long k) {
    if (k % every == 0) traj.record(st);
  });
  c.trajectories.push_back(summarize("initial_relaxation", 0.0, t, n));

  std::vector<std::vector<double>> profile_rows, track_rows;
  for (std::size_t i = 0; i < g.size(); ++i) profile_rows.push_back({g.x(i), s.profile[i]});
  c.out.plot("cover_profile", {"x", "value"}, profile_rows, "x", "value", "Converged wave profile");
  SkewState probe = s;
  const auto track = track_front(stepper, probe, 100.0, 0.5, fo.level);
  for (std::size_t i = 0; i < track.times.size(); ++i)
    track_rows.push_back({track.times[i] - s.time, track.positions[i],
                          evaluate(fit.speed, s.phase, track.times[i] - s.time)});
  c.out.plot("front_position", {"time", "position", "frame_speed"}, track_rows, "time", "position",
             "Front position in the fitted frame and the frame speed d(t)");
}

VerifierReport wave_equivariance(const Context& c, const json& o) {
  const Grid& g = c.cfg.grid;
  std::vector<GroupElement> group;
  for (const auto& k : o.at("shifts_h")) group.push_back(Translation{k.get<double>() * g.h()});
  std::vector<Profile> states{c.cover->profile};
  const auto count = o.at("states").get<std::size_t>();
  for (std::size_t i = 1; i < count; ++i) {
    const double sign = i % 2 == 0 ? 1.0 : -1.0;
    const double centre = 5.0 * (static_cast<double>(i) - 2.0);
    const Profile bump = Profile::from_function_1d(g, [&](double x) { return std::exp(-(x - centre) * (x - centre) / 9.0); });
    states.push_back(combine(c.cover->profile, 0.05 * sign, bump));
  }
  return check_equivariance(*c.problem, c.cfg.integrator, group, states, o.at("T").get<double>(),
                            c.cover->phase, o.at("tol").get<double>());
}

VerifierReport wave_spatial(const Context& c, const json& o) {
  if (!c.estimate || c.estimate->status != LimitStatus::converged) {
    throw LabError(ErrorKind::HypothesisViolated, "the wave's omega-limit estimate did not converge");
  }
  auto r = check_spatial_monotonicity(c.cover->profile, o.at("tol").get<double>());
  r.details["omega_limit_diagnostic"] = c.estimate->diagnostic;
  return r;
}

struct PhaseOutcome {
  std::optional<PhaseSeries> series;
};

VerifierReport wave_phase(const Context& c, const json& o, PhaseOutcome& keep) {
  const Stepper stepper(*c.problem, c.cfg.integrator);
  const double amp = o.at("amplitude").get<double>();
  SkewState ref = *c.cover;
  SkewState u{combine(c.cover->profile, amp, member(c.ensemble, o.at("member"))), ref.phase, ref.time};
  const long every = stepper.steps_for(o.at("sample_every").get<double>());
  const long n = stepper.steps_for(o.at("T").get<double>());
  std::vector<double> times{0.0};
  std::vector<Profile> traj{u.profile}, refs{ref.profile};
  for (long k = 1; k <= n; ++k) {
    stepper.step(ref);
    stepper.step(u);
    if (k % every == 0) {
      times.push_back(static_cast<double>(k) * c.cfg.integrator.dt);
      traj.push_back(u.profile);
      refs.push_back(ref.profile);
    }
  }
  const auto bracket = o.at("bracket").get<std::vector<double>>();
  const double ctol = o.at("cauchy_tol").get<double>();
  const double rtol = o.at("residual_tol").get<double>();
  PhaseSeries s = extract_asymptotic_phase(times, traj, refs, bracket[0], bracket[1], std::numeric_limits<double>::infinity(),
                                           o.at("cauchy_start").get<double>());
  keep.series = s;
  auto r = ratio_report(std::max(s.cauchy_spread / ctol, s.residual.back() / rtol), "regression baseline");
  r.details = {{"sigma_star", s.sigma_star},
               {"cauchy_spread", s.cauchy_spread},
               {"cauchy_tol", ctol},
               {"final_residual", s.residual.back()},
               {"residual_tol", rtol},
               {"residual_decreasing", s.residual_decreasing},
               {"perturbation_sup_norm", amp},
               {"measured_is", "max(cauchy_spread/cauchy_tol, final_residual/residual_tol)"}};
  return r;
}

std::vector<std::pair<std::string, std::function<VerifierReport()>>> wave_verifiers(Context& c, PhaseOutcome& phase) {
  std::vector<std::pair<std::string, std::function<VerifierReport()>>> jobs;
  for (const auto& v : c.cfg.verifiers) {
    const json& o = v.options;
    std::function<VerifierReport()> fn;
    if (v.name == "monotone") fn = [&c, &o] { return monotone_report(c, o, c.problem->speed); };
    else if (v.name == "equivariance") fn = [&c, &o] { return wave_equivariance(c, o); };
    else if (v.name == "spatial_monotonicity") fn = [&c, &o] { return wave_spatial(c, o); };
    else if (v.name == "total_order")
      fn = [&c, &o] {
        return check_total_order(c.cover->profile, o.at("shifts").get<std::vector<double>>(), o.at("tol").get<double>());
      };
    else if (v.name == "asymptotic_phase") fn = [&c, &o, &phase] { return wave_phase(c, o, phase); };
    else if (v.name == "wedge_order")
      fn = [&c, &o] {
        return check_wedge_order(*c.cover, Translation{o.at("sigma").get<double>()}, *c.problem, c.cfg.integrator,
                                 o.at("T").get<double>());
      };
    else if (v.name == "one_cover") fn = [&c, &o] { return one_cover_report(c, o); };
    else if (v.name == "stability") fn = [&c] { return stability_report(c); };
    jobs.emplace_back(v.name, fn);
  }
  return jobs;
}

// ---------------------------------------------------------------------------------------------
// radial_2d and custom

void prepare_transient(Context& c, const Profile& initial, const Problem& problem) {
  c.problem = problem;
  c.out.profile("initial", initial, "initial condition", 0.0);
  const Stepper stepper(problem, c.cfg.integrator);
  const json& tr = c.stage("transient");
  SkewState s{initial, TorusPhase::zero(c.cfg.reaction.basis().size()), 0.0};
  TrajectoryWriter traj(c.out.dir() / "trajectory.csv");
  traj.record(s);
  const long every = stepper.steps_for(tr.at("sample_every").get<double>());
  const long n = stepper.steps_for(tr.at("T").get<double>());
  stepper.advance(s, n, [&](const SkewState& st, long k) {
    if (k % every == 0) traj.record(st);
  });
  c.trajectories.push_back(summarize("transient", 0.0, s, n));
  c.cover = s;
  c.out.profile("cover", s.profile, "state after the transient, taken as the cover over its fiber", s.time);
}

Profile gaussian(const Grid& g, double amp, const std::vector<double>& centre, double width) {
  if (g.dimension() == 1) {
    return Profile::from_function_1d(g, [&](double x) {
      return amp * std::exp(-(x - centre[0]) * (x - centre[0]) / (width * width));
    });
  }
  return Profile::from_function_2d(g, [&](double x, double y) {
    const double dx = x - centre[0], dy = y - centre[1];
    return amp * std::exp(-(dx * dx + dy * dy) / (width * width));
  });
}

VerifierReport radial_equivariance(const Context& c, const json& o) {
  const auto hs = o.at("h").get<std::vector<double>>();
  const double half = o.at("half").get<double>();
  const double tol = o.at("tol").get<double>();
  const double min_ratio = o.at("min_ratio").get<double>();
  const std::vector<GroupElement> group{Rotation2D(o.at("angle").get<double>())};
  const IntegratorConfig cfg{o.at("dt").get<double>(), Boundary::dirichlet_zero, c.cfg.integrator.lipschitz};
  std::vector<double> devs;
  json per = json::array();
  for (double h : hs) {
    const auto n = static_cast<std::size_t>(std::llround(2.0 * half / h)) + 1;
    const Grid g = Grid::square(half, n);
    const Problem p = make_radial_problem(g, c.cfg.reaction);
    const std::vector<Profile> states{gaussian(g, o.at("amplitude").get<double>(),
                                               o.at("centre").get<std::vector<double>>(), o.at("width").get<double>())};
    const auto r = check_equivariance(p, cfg, group, states, o.at("T").get<double>(),
                                      TorusPhase::zero(c.cfg.reaction.basis().size()), tol);
    devs.push_back(r.measured);
    per.push_back({{"h", g.h()}, {"deviation", r.measured}});
  }
  double measured = devs.front() / tol;
  json ratios = json::array();
  for (std::size_t i = 1; i < devs.size(); ++i) {
    const double ratio = devs[i - 1] / devs[i];
    ratios.push_back(ratio);
    measured = std::max(measured, min_ratio / ratio);
  }
  auto r = ratio_report(measured, "exact commutation; second-order interpolation budget");
  r.details = {{"angle", o.at("angle")}, {"runs", per}, {"refinement_ratios", ratios}, {"tol", tol},
               {"min_ratio", min_ratio}, {"measured_is", "max(deviation at the first h / tol, min_ratio / each ratio)"}};
  return r;
}

VerifierReport radial_symmetry(const Context& c, const json& o) {
  const bool converged = c.estimate && c.estimate->status == LimitStatus::converged;
  const bool stable = c.stability.has_value() && converged;
  auto r = check_symmetry(c.cover->profile, o.at("angles").get<std::vector<double>>(), stable,
                          o.at("tol_generic").get<double>(), o.at("tol_lattice").get<double>());
  if (!converged) r.details["reason"] = "omega-limit estimate did not converge";
  r.details["stable"] = c.stability.has_value();
  r.details["time"] = c.cover->time;
  return r;
}

VerifierReport radial_decay(const Context& c, const json& o) {
  const Profile v0 = combine_abs(c.cover->profile, -o.at("amplitude").get<double>(), member(c.ensemble, o.at("member")));
  return check_decay_bound(*c.problem, c.cfg.integrator, *c.cover, v0, o.at("R").get<double>(), o.at("T").get<double>(),
                           o.at("slack_tol").get<double>());
}

VerifierReport radial_supersolution(const Context& c, const json& o) {
  const Profile v0 = combine(c.cover->profile, o.at("amplitude").get<double>(), member(c.ensemble, o.at("member")));
  const double tol = o.at("tol").get<double>();
  const auto res = supersolution_pair(*c.problem, c.cfg.integrator, *c.cover, v0, o.at("R").get<double>(),
                                      c.cfg.reaction.params().eps0 / 4.0, o.at("T").get<double>(), tol);
  VerifierReport r;
  r.measured = std::max(res.trapping.measured, res.monotone_in_time.measured);
  r.tolerance = tol;
  r.status = r.measured <= tol ? VerdictStatus::pass : VerdictStatus::fail;
  r.provenance = "comparison with damped heat flow";
  r.details = {{"trapping", res.trapping},
               {"phi_plus_nonincreasing", res.monotone_in_time},
               {"eps_star", c.cfg.reaction.params().eps0 / 4.0},
               {"exterior_deviation_start", res.exterior_deviation_start},
               {"exterior_deviation_end", res.exterior_deviation_end},
               {"exterior_deviation_shrank", res.exterior_deviation_end < res.exterior_deviation_start}};
  return r;
}

std::vector<std::pair<std::string, std::function<VerifierReport()>>> field_verifiers(Context& c) {
  std::vector<std::pair<std::string, std::function<VerifierReport()>>> jobs;
  for (const auto& v : c.cfg.verifiers) {
    const json& o = v.options;
    std::function<VerifierReport()> fn;
    if (v.name == "monotone") fn = [&c, &o] { return monotone_report(c, o, std::nullopt); };
    else if (v.name == "equivariance") fn = [&c, &o] { return radial_equivariance(c, o); };
    else if (v.name == "symmetry") fn = [&c, &o] { return radial_symmetry(c, o); };
    else if (v.name == "decay_bound") fn = [&c, &o] { return radial_decay(c, o); };
    else if (v.name == "supersolution") fn = [&c, &o] { return radial_supersolution(c, o); };
    else if (v.name == "one_cover") fn = [&c, &o] { return one_cover_report(c, o); };
    else if (v.name == "stability") fn = [&c] { return stability_report(c); };
    jobs.emplace_back(v.name, fn);
  }
  return jobs;
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace

int exit_code(std::span<const VerifierReport> reports) {
  bool unmet = false;
  for (const auto& r : reports) {
    if (r.status == VerdictStatus::fail || r.status == VerdictStatus::error) return 1;
    if (r.status == VerdictStatus::hypothesis_unmet) unmet = true;
  }
  return unmet ? 3 : 0;
}

unsigned workers_from_env() {
  if (const char* s = std::getenv("MLAB_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(s, &end, 10);
    if (end != s && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return default_workers();
}

RunReport run_experiment(const ExperimentConfig& config, unsigned workers) {
  const auto t0 = Clock::now();
  fs::create_directories(config.output_dir);
  const DirLock lock(config.output_dir);
  Context c{config, std::max(1u, workers), Outputs(config.output_dir), {}, {}, {}, {}, {}, nullptr, json::array(),
            json::object()};
  c.ensemble = perturbation_ensemble(config.grid, config.seed);

  PhaseOutcome phase;
  std::vector<std::pair<std::string, std::function<VerifierReport()>>> jobs;
  switch (config.scenario) {
    case Scenario::wave_1d:
      prepare_wave(c);
      break;
    case Scenario::radial_2d: {
      const json& init = c.stage("initial");
      prepare_transient(c,
                        gaussian(config.grid, init.at("amplitude").get<double>(),
                                 init.at("centre").get<std::vector<double>>(), init.at("width").get<double>()),
                        make_radial_problem(config.grid, config.reaction));
      break;
    }
    case Scenario::custom: {
      const json& init = c.stage("initial");
      const double amp = init.at("amplitude").get<double>();
      const Profile u0 = init.at("kind") == "constant"
                             ? Profile::constant(config.grid, amp)
                             : gaussian(config.grid, amp, init.at("centre").get<std::vector<double>>(),
                                        init.at("width").get<double>());
      prepare_transient(c, u0, make_generic_problem(config.grid, config.reaction));
      break;
    }
  }
  run_omega_limit(c);
  run_stability(c);
  jobs = config.scenario == Scenario::wave_1d ? wave_verifiers(c, phase) : field_verifiers(c);

  std::vector<VerifierReport> reports(jobs.size());
  parallel_for(jobs.size(), c.workers, [&](std::size_t i) { reports[i] = guarded(jobs[i].first, jobs[i].second); });

  if (phase.series) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < phase.series->times.size(); ++i)
      rows.push_back({phase.series->times[i], phase.series->sigma[i], phase.series->residual[i]});
    c.out.plot("phase", {"time", "sigma", "residual"}, rows, "time", "sigma", "Asymptotic phase and residual");
  }
  for (const auto& r : reports) {
    if (r.name == "symmetry" && r.details.contains("angles")) {
      std::vector<std::vector<double>> rows;
      for (const auto& a : r.details.at("angles")) rows.push_back({a.at("angle"), a.at("deviation")});
      c.out.plot("symmetry", {"angle", "deviation"}, rows, "angle", "deviation", "sup |R u - u| per rotation angle");
    }
    if (r.name == "equivariance" && r.details.contains("runs")) {
      std::vector<std::vector<double>> rows;
      for (const auto& a : r.details.at("runs")) rows.push_back({a.at("h"), a.at("deviation")});
      c.out.plot("equivariance", {"h", "deviation"}, rows, "h", "deviation", "Rotation commutation defect against grid step");
    }
  }
  if (config.grid.dimension() == 2) {
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < config.grid.size(); ++k) rows.push_back({config.grid.radius(k), c.cover->profile[k]});
    std::sort(rows.begin(), rows.end());
    c.out.plot("radial_profile", {"radius", "value"}, rows, "radius", "value", "Cover values against distance from the origin");
  }
  c.out.finish();

  json summary = {{"pass", 0}, {"fail", 0}, {"hypothesis_unmet", 0}, {"error", 0}};
  for (const auto& r : reports) summary[std::string(to_string(r.status))] = summary[std::string(to_string(r.status))].get<int>() + 1;
  summary["exit_code"] = exit_code(reports);

  RunReport out;
  out.verifiers = reports;
  out.json = {{"schema", kReportSchema},
              {"version", MONOLAB_VERSION},
              {"scenario", std::string(to_string(config.scenario))},
              {"seed", config.seed},
              {"workers", c.workers},
              {"config", config.source},
              {"resolved", {{"run", config.run}, {"verifiers", json::object()}}},
              {"verifiers", reports},
              {"summary", summary},
              {"trajectories", c.trajectories},
              {"analyses", c.analyses},
              {"wall_clock_seconds", seconds_since(t0)},
              {"created_at", timestamp()}};
  for (const auto& v : config.verifiers) out.json["resolved"]["verifiers"][v.name] = v.options;
  open_out(config.output_dir / "report.json") << out.json.dump(2) << '\n';
  open_out(config.output_dir / "summary.txt") << render_summary(out.json);
  return out;
}

}  // namespace monolab
