// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
// Exit status is the number of failed criteria (0 when everything holds).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "monolab/error.hpp"
#include "monolab/lab.hpp"
#include "monolab/orbit_dynamics.hpp"
#include "monolab/scenarios.hpp"

using namespace monolab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string note;
};

const json& verifier(const json& report, const std::string& name) {
  for (const auto& v : report.at("verifiers")) {
    if (v.at("name") == name) return v;
  }
  throw std::runtime_error("report has no " + name + " entry");
}

bool passed(const json& v) { return v.at("status") == "pass"; }

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

json run_bundled(const std::string& name, const fs::path& out, unsigned workers) {
  auto cfg = load_config(fs::path(MONOLAB_SOURCE_DIR) / "configs" / name);
  fs::remove_all(out);
  cfg.output_dir = out;
  return run_experiment(cfg, workers).json;
}

const FrequencyBasis kOne({1.0});

ReactionTerm linear_decay_term(double eps0, double alpha) {
  HypothesisParams p;
  p.eps0 = eps0;
  p.alpha = alpha;
  return ReactionTerm(PolynomialForm{{QPSignal(kOne), QPSignal::constant(kOne, -alpha)}}, p);
}

/// The analytic exterior case: zero cover, pure decay outside a pinned disc, data 2 eps0.
Outcome analytic_decay(double dt) {
  const double eps0 = 0.05, R = 2.0;
  const Grid g = Grid::square(5, 41);
  Problem p = make_generic_problem(g, linear_decay_term(eps0, 1.0));
  p.pinned.assign(g.size(), 0);
  for (std::size_t k = 0; k < g.size(); ++k) p.pinned[k] = g.radius(k) < R;
  const IntegratorConfig cfg{dt, Boundary::dirichlet_zero, 1.0};
  const SkewState cover{Profile::constant(g, 0.0), TorusPhase::zero(1), 0.0};
  const Profile v0 = Profile::from_function_2d(g, [&](double x, double y) { return std::hypot(x, y) < R ? 0.0 : 2 * eps0; });
  const auto r = check_decay_bound(p, cfg, cover, v0, R, 1.0, 0.0);
  return {r.passed(), fmt("alpha*dt=%g slack %.3e", dt, r.details.at("min_slack").get<double>())};
}

/// Largest |c u' + u'' + u(1-u)(u-a)| of the tanh front, derivatives by hand.
double front_residual(double a, double c) {
  const double k = 1.0 / (2.0 * std::numbers::sqrt2);
  double worst = 0.0;
  for (double xi = -40.0; xi <= 40.0; xi += 0.01) {
    const double s = std::tanh(k * xi);
    const double u = 0.5 * (1.0 - s);
    const double du = -0.5 * k * (1.0 - s * s);
    const double d2u = k * k * s * (1.0 - s * s);
    worst = std::max(worst, std::abs(c * du + d2u + u * (1.0 - u) * (u - a)));
  }
  return worst;
}

Outcome front_speed() {
  const double a = 0.25;
  const double c = (1.0 - 2.0 * a) / std::numbers::sqrt2;
  const double residual = front_residual(a, c);
  if (!(residual < 1e-10)) return {false, fmt("closed-form residual %.3e", residual)};
  const ReactionTerm f(BistableForm{QPSignal::constant(kOne, a)});
  const Grid g = Grid::line(-40, 40, 1601);
  const IntegratorConfig cfg{0.005, Boundary::dirichlet_limits, 1.0};
  const Problem p = make_wave_problem(g, f, QPSignal(kOne));
  const Profile u0 = Profile::from_function_1d(g, [](double x) {
    return 0.5 * (1.0 - std::tanh((x + 10.0) / (2.0 * std::numbers::sqrt2)));
  });
  std::vector<double> times;
  for (int i = 0; i <= 10; ++i) times.push_back(10.0 + 2.0 * i);
  const auto traj = integrate(SkewState{u0, TorusPhase::zero(1), 0.0}, 30.0, p, cfg, times);
  const double measured = wave_speed_estimate(traj, 0.5);
  const double rel = std::abs(measured - c) / c;
  return {rel < 0.02, fmt("residual %.1e, speed %.5f vs %.5f (%.2f%%)", residual, measured, c, 100 * rel)};
}

Outcome solitary_wave() {
  const Grid wide = Grid::line(-20, 20, 401);
  const auto order = check_total_order(Profile::from_function_1d(wide, [](double x) { return std::exp(-x * x); }),
                                       std::vector<double>{-1.0, 0.0, 1.0}, 1e-8);
  const auto incomparable = order.details.at("incomparable_pairs").get<long>();
  if (order.passed() || incomparable == 0) return {false, "Gaussian pulse shifts were ordered"};

  const double a = 0.25;
  const ReactionTerm f(BistableForm{QPSignal::constant(kOne, a)});
  const Grid g = Grid::line(-30, 30, 301);
  const Problem p = make_generic_problem(g, f);
  const IntegratorConfig cfg{0.05, Boundary::dirichlet_zero, 1.0};
  const SkewState pulse{Profile::from_function_1d(g, [a](double x) { return stationary_pulse(a, x); }),
                        TorusPhase::zero(1), 0.0};
  const auto ensemble = perturbation_ensemble(g, 11, 16);
  const std::vector<double> eps{0.1};
  try {
    (void)stability_probe(pulse, p, cfg, eps, ensemble, 100.0, 6);
  } catch (const LabError& e) {
    if (e.kind() == ErrorKind::NotStable) {
      return {true, fmt("%ld incomparable pair(s); stationary pulse NotStable", incomparable)};
    }
    throw;
  }
  return {false, "stationary pulse passed the stability probe"};
}

double golden_sigma_star() {
  std::ifstream in(fs::path(MONOLAB_SOURCE_DIR) / "tests" / "golden" / "baselines.json");
  return json::parse(in).at("wave_1d").at("sigma_star").at("value").get<double>();
}

}  // namespace

int main() {
  const unsigned workers = workers_from_env();
  const fs::path root = fs::temp_directory_path() / "monolab_acceptance";
  json wave, radial;
  double wave_seconds = 0.0, radial_seconds = 0.0;

  const auto timed = [](auto&& fn, double& seconds) {
    const auto t0 = std::chrono::steady_clock::now();
    auto result = fn();
    seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
  };

  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria;

  criteria.emplace_back("1 discrete monotonicity", [&] {
    const auto& v = verifier(wave, "monotone");
    const auto& d = v.at("details");
    const bool ok = passed(v) && d.at("pairs") == 100 && d.at("T") == 50.0 && d.at("dt_times_L").get<double>() <= 0.5 &&
                    v.at("measured").get<double>() <= 0.0 && v.at("runtime_seconds").get<double>() < 120.0;
    return Outcome{ok, fmt("100 pairs, T=50, dt*L=%.4f, worst excess %.1e", d.at("dt_times_L").get<double>(),
                           v.at("measured").get<double>())};
  });

  criteria.emplace_back("2 equivariance", [&] {
    const auto& shifts = verifier(wave, "equivariance");
    const auto& rot = verifier(radial, "equivariance");
    const auto& runs = rot.at("details").at("runs");
    const double dev = runs.at(0).at("deviation").get<double>();
    const double ratio = rot.at("details").at("refinement_ratios").at(0).get<double>();
    const double shift_dev = shifts.at("measured").get<double>();
    const bool ok = shift_dev < 1e-12 && runs.at(0).at("h") == 0.05 && dev < 1e-5 && ratio >= 3.5;
    return Outcome{ok, fmt("shifts %.1e; rotation h=0.05 %.2e, halving ratio %.2f", shift_dev, dev, ratio)};
  });

  criteria.emplace_back("3 stable-wave spatial monotonicity", [&] {
    const auto& omega = wave.at("analyses").at("omega_limit");
    const double diag = omega.at("diagnostic").get<double>();
    const auto& v = verifier(wave, "spatial_monotonicity");
    const bool ok = omega.at("status") == "converged" && diag < 1e-4 && passed(v) && v.at("tolerance") == 1e-8 &&
                    wave_seconds < 300.0;
    return Outcome{ok, fmt("omega diagnostic %.2e, rise %.1e, wave run %.1f s", diag, v.at("measured").get<double>(),
                           wave_seconds)};
  });

  criteria.emplace_back("4 asymptotic phase", [&] {
    const auto& v = verifier(wave, "asymptotic_phase");
    const auto& d = v.at("details");
    const double spread = d.at("cauchy_spread").get<double>();
    const double residual = d.at("final_residual").get<double>();
    const double sigma = d.at("sigma_star").get<double>();
    const double golden = golden_sigma_star();
    const bool ok = d.at("perturbation_sup_norm") == 0.05 && spread <= 1e-3 && residual < 1e-3 &&
                    std::abs(sigma - golden) < 1e-5;
    return Outcome{ok, fmt("spread %.2e over [100,200], residual %.2e, sigma* %.6f (golden %.6f)", spread, residual,
                           sigma, golden)};
  });

  criteria.emplace_back("5 rotational symmetry", [&] {
    const auto& v = verifier(radial, "symmetry");
    bool ok = passed(v) && radial_seconds < 600.0;
    std::string note;
    for (const auto& a : v.at("details").at("angles")) {
      const double dev = a.at("deviation").get<double>();
      const double tol = a.at("tolerance").get<double>();
      ok = ok && dev < tol;
      note += fmt("%.4f:%.2e ", a.at("angle").get<double>(), dev);
    }
    return Outcome{ok, note + fmt("(radial run %.1f s)", radial_seconds)};
  });

  criteria.emplace_back("6 comparison bound", [&] {
    bool ok = true;
    std::string note;
    for (double dt : {0.1, 0.01, 0.001}) {
      const auto o = analytic_decay(dt);
      ok = ok && o.pass;
      note += o.note + "; ";
    }
    const auto& v = verifier(radial, "decay_bound");
    const double slack = v.at("details").at("min_slack").get<double>();
    ok = ok && passed(v) && slack >= -1e-10;
    return Outcome{ok, note + fmt("flagship slack %.2e", slack)};
  });

  criteria.emplace_back("7 supersolution trapping", [&] {
    const auto& v = verifier(radial, "supersolution");
    const auto& d = v.at("details");
    const auto& trap = d.at("trapping");
    const auto& mono = d.at("phi_plus_nonincreasing");
    const bool ok = passed(v) && trap.at("status") == "pass" && mono.at("status") == "pass" &&
                    trap.at("details").at("T") == 50.0;
    return Outcome{ok, fmt("trapping excess %.1e, phi+ increase %.1e", trap.at("measured").get<double>(),
                           mono.at("measured").get<double>())};
  });

  criteria.emplace_back("8 front-speed oracle", front_speed);

  criteria.emplace_back("9 wedge-orbit ordering", [&] {
    const auto& v = verifier(wave, "wedge_order");
    const auto& d = v.at("details");
    const bool ok = passed(v) && v.at("tolerance") == 0.0 && d.at("shift") == 0.2 && d.at("T") == 50.0;
    return Outcome{ok, fmt("worst excess %.1e", v.at("measured").get<double>())};
  });

  criteria.emplace_back("10 solitary-wave demonstration", solitary_wave);

  criteria.emplace_back("11 1-cover detection", [&] {
    const auto& v = verifier(wave, "one_cover");
    const auto& d = v.at("details");
    const double hd = d.at("hausdorff_to_cover").get<double>();
    const double diam = d.at("max_cluster_diameter").get<double>();
    const bool ok = passed(v) && d.at("one_cover") == true && hd <= 1e-4 && diam < 1e-3;
    return Outcome{ok, fmt("Hausdorff %.2e, cluster diameter %.2e", hd, diam)};
  });

  try {
    wave = timed([&] { return run_bundled("wave_1d_default.json", root / "wave_1d", workers); }, wave_seconds);
    radial = timed([&] { return run_bundled("radial_2d_default.json", root / "radial_2d", workers); }, radial_seconds);
  } catch (const std::exception& e) {
    std::printf("flagship runs failed: %s\n", e.what());
    return static_cast<int>(criteria.size());
  }

  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%-36s %s  %s\n", name.c_str(), o.pass ? "PASS" : "FAIL", o.note.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures;
}
