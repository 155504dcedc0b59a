#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "monolab/error.hpp"
#include "monolab/scenarios.hpp"
#include "monolab/theorem_verifiers.hpp"

using namespace monolab;

namespace {

const FrequencyBasis kOne({1.0});

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const LabError& e) {
    return e.kind();
  }
  FAIL("expected a LabError");
  return ErrorKind::InvalidArgument;
}

Profile front(const Grid& g, double centre = 0.0) {
  return Profile::from_function_1d(g, [&](double x) { return 0.5 * (1.0 - std::tanh((x - centre) / 2.0)); });
}

ReactionTerm decay_with(double eps0, double alpha, double R0 = 0.0) {
  HypothesisParams p;
  p.eps0 = eps0;
  p.alpha = alpha;
  p.R0 = R0;
  return ReactionTerm(PolynomialForm{{QPSignal(kOne), QPSignal::constant(kOne, -alpha)}}, p);
}

}  // namespace

TEST_CASE("heat flow is order preserving on random pairs") {
  const Grid g = Grid::line(-5, 5, 101);
  const Problem p = make_generic_problem(g, ReactionTerm::zero(kOne));
  const IntegratorConfig cfg{0.01, Boundary::dirichlet_zero, 1.0};
  const auto r = check_monotone(p, cfg, 16, 1.0, 7, TorusPhase::zero(1), 4);
  CHECK(r.passed());
  CHECK(r.measured == 0.0);
  CHECK(r.details.at("pairs") == 16);
}

TEST_CASE("bistable flow is order preserving and seeded runs agree") {
  const Grid g = Grid::line(-20, 20, 201);
  const Problem p = make_wave_problem(g, default_bistable(), QPSignal(FrequencyBasis({1.0, std::numbers::sqrt2})));
  const IntegratorConfig cfg{0.05, Boundary::dirichlet_limits, 1.0};
  const auto a = check_monotone(p, cfg, 8, 5.0, 11, TorusPhase::zero(2), 2);
  const auto b = check_monotone(p, cfg, 8, 5.0, 11, TorusPhase::zero(2), 1);
  CHECK(a.passed());
  CHECK(a.measured == b.measured);
}

TEST_CASE("monotone check refuses a step that breaks the CFL bound") {
  const Grid g = Grid::line(-5, 5, 51);
  const Problem p = make_generic_problem(g, ReactionTerm::zero(kOne));
  const IntegratorConfig cfg{1.5, Boundary::dirichlet_zero, 1.0};
  CHECK(kind_of([&] { (void)check_monotone(p, cfg, 2, 3.0, 1, TorusPhase::zero(1)); }) == ErrorKind::CFLViolation);
}

TEST_CASE("equivariance: identity and grid-step shifts commute with the flow") {
  const Grid g = Grid::line(-20, 20, 401);
  const Problem p = make_generic_problem(g, ReactionTerm(BistableForm{QPSignal::constant(kOne, 0.3)}));
  const IntegratorConfig cfg{0.01, Boundary::dirichlet_zero, 1.0};
  const std::vector<Profile> states{
      Profile::from_function_1d(g, [](double x) { return std::exp(-(x - 1.5) * (x - 1.5)); }),
      Profile::from_function_1d(g, [](double x) { return 0.6 * std::exp(-(x + 2) * (x + 2) / 4); })};
  const std::vector<GroupElement> group{Translation{0.0}, Translation{g.h()}, Translation{-3 * g.h()}};
  const auto r = check_equivariance(p, cfg, group, states, 1.0, TorusPhase::zero(1));
  CHECK(r.passed());
  CHECK(r.measured < 1e-12);
  CHECK(r.details.at("deviations").size() == 6);
}

TEST_CASE("equivariance requires the matching symmetry flag") {
  const Grid g = Grid::line(-5, 5, 51);
  const Problem p = make_generic_problem(g, ReactionTerm::zero(kOne));
  const IntegratorConfig cfg{0.01, Boundary::dirichlet_zero, 1.0};
  const std::vector<Profile> states{Profile::constant(g, 0.0)};
  const std::vector<GroupElement> rot{Rotation2D(0.3)};
  CHECK(kind_of([&] { (void)check_equivariance(p, cfg, rot, states, 0.1, TorusPhase::zero(1)); }) ==
        ErrorKind::SymmetryFlagMissing);

  const Grid g2 = Grid::square(3, 31);
  const Problem radial = make_generic_problem(g2, default_radial());
  const std::vector<Profile> states2{Profile::constant(g2, 0.0)};
  const std::vector<GroupElement> shift{Translation{0.1}};
  CHECK(kind_of([&] { (void)check_equivariance(radial, cfg, shift, states2, 0.1, TorusPhase::zero(2)); }) ==
        ErrorKind::SymmetryFlagMissing);
}

TEST_CASE("symmetry of a radial profile and the stability gate") {
  const Grid g = Grid::square(6, 241);
  const Profile u = Profile::from_function_2d(g, [](double x, double y) { return std::exp(-(x * x + y * y) / 2); });
  const std::vector<double> angles{std::numbers::pi / 2, std::numbers::pi, std::numbers::pi / 7, 1.0};
  const auto r = check_symmetry(u, angles, true);
  CHECK(r.passed());
  CHECK(r.details.at("angles")[0].at("deviation").get<double>() < 1e-14);

  const Profile skew = Profile::from_function_2d(g, [](double x, double y) { return std::exp(-(x - 1) * (x - 1) - y * y); });
  CHECK_FALSE(check_symmetry(skew, angles, true).passed());

  const auto gated = check_symmetry(u, angles, false);
  CHECK(gated.status == VerdictStatus::hypothesis_unmet);
}

TEST_CASE("total order: shifted fronts are ordered, shifted pulses are not") {
  const Grid g = Grid::line(-20, 20, 401);
  const std::vector<double> shifts{-1.0, 0.0, 0.5, 1.0};
  const auto inc = check_total_order(
      Profile::from_function_1d(g, [](double x) { return 0.5 * (1 + std::tanh(x)); }), shifts, 1e-12);
  CHECK(inc.passed());
  CHECK(inc.details.at("direction") == "decreasing in shift");
  const auto dec = check_total_order(front(g), shifts, 1e-12);
  CHECK(dec.passed());
  CHECK(dec.details.at("direction") == "increasing in shift");

  const auto pulse = check_total_order(
      Profile::from_function_1d(g, [](double x) { return std::exp(-x * x); }), std::vector<double>{-1.0, 1.0}, 1e-12);
  CHECK_FALSE(pulse.passed());
  CHECK(pulse.details.at("incomparable_pairs") == 1);
  CHECK(pulse.details.contains("witness"));
}

TEST_CASE("total order and spatial monotonicity agree on random profiles") {
  const Grid g = Grid::line(0, 10, 101);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> step(0.001, 0.1), any(-0.05, 0.1);
  const std::vector<double> shifts{0.0, g.h(), 2 * g.h()};
  int monotone = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(g.size());
    const bool sorted = trial % 2 == 0;
    double acc = 0.0;
    for (auto& x : v) x = acc += sorted ? step(rng) : any(rng);
    const Profile u(g, v);
    const bool spatial = check_spatial_monotonicity(u, 1e-12).passed();
    CHECK(check_total_order(u, shifts, 1e-12).passed() == spatial);
    monotone += spatial;
  }
  CHECK(monotone == 25);
}

TEST_CASE("spatial monotonicity examples") {
  const Grid g = Grid::line(-3, 3, 61);
  const auto affine = check_spatial_monotonicity(Profile::from_function_1d(g, [](double x) { return 2 - x; }), 1e-12);
  CHECK(affine.passed());
  CHECK(affine.details.at("orientation") == "nonincreasing");
  const auto wave = check_spatial_monotonicity(Profile::from_function_1d(g, [](double x) { return std::sin(x); }), 1e-12);
  CHECK_FALSE(wave.passed());
  CHECK(wave.measured > 0.05);
  CHECK(check_spatial_monotonicity(Profile::constant(g, 0.3), 0.0).passed());
}

TEST_CASE("asymptotic phase of an exact family member") {
  const Grid g = Grid::line(-20, 20, 401);
  const Profile ref = front(g);
  std::vector<double> times;
  std::vector<Profile> traj, refs;
  for (int i = 0; i < 20; ++i) {
    times.push_back(i);
    traj.push_back(apply(Translation{0.7}, ref));
    refs.push_back(ref);
  }
  const auto s = extract_asymptotic_phase(times, traj, refs, -3.0, 3.0);
  CHECK(s.sigma_star == doctest::Approx(0.7).epsilon(1e-5));
  CHECK(s.cauchy_spread < 1e-5);
  CHECK(s.residual.back() < 1e-5);
  CHECK(s.residual_decreasing);
}

TEST_CASE("asymptotic phase: bracket edge and drifting phase") {
  const Grid g = Grid::line(-20, 20, 401);
  const Profile ref = front(g);
  std::vector<double> times{0, 1, 2, 3};
  std::vector<Profile> refs(4, ref), far(4, apply(Translation{5.0}, ref));
  CHECK(kind_of([&] { (void)extract_asymptotic_phase(times, far, refs, -2.0, 2.0); }) == ErrorKind::BracketFailure);

  std::vector<Profile> drift;
  for (double t : times) drift.push_back(apply(Translation{0.5 * t}, ref));
  CHECK(kind_of([&] { (void)extract_asymptotic_phase(times, drift, refs, -4.0, 4.0, 1e-3, 1.0); }) ==
        ErrorKind::NoConvergence);
}

TEST_CASE("decay bound holds for pure linear decay across step sizes") {
  const double eps0 = 0.05, R = 2.0;
  const Grid g = Grid::square(5, 41);
  for (double dt : {0.1, 0.01, 0.001}) {
    Problem p = make_generic_problem(g, decay_with(eps0, 1.0));
    p.pinned.assign(g.size(), 0);
    for (std::size_t k = 0; k < g.size(); ++k) p.pinned[k] = g.radius(k) < R;
    const IntegratorConfig cfg{dt, Boundary::dirichlet_zero, 1.0};
    const SkewState cover{Profile::constant(g, 0.0), TorusPhase::zero(1), 0.0};
    const Profile v0 = Profile::from_function_2d(g, [&](double x, double y) {
      return std::hypot(x, y) < R ? 0.0 : 2 * eps0;
    });
    const auto r = check_decay_bound(p, cfg, cover, v0, R, 1.0);
    CHECK(r.passed());
    CHECK(r.details.at("min_slack").get<double>() >= -1e-10);
  }
}

TEST_CASE("decay bound rejects a reaction without enough damping") {
  const Grid g = Grid::square(5, 21);
  Problem p = make_generic_problem(g, decay_with(0.05, 1.0));
  p.reaction = ReactionTerm(PolynomialForm{{QPSignal(kOne), QPSignal::constant(kOne, -0.5)}}, p.reaction.params());
  const IntegratorConfig cfg{0.01, Boundary::dirichlet_zero, 1.0};
  const SkewState cover{Profile::constant(g, 0.0), TorusPhase::zero(1), 0.0};
  CHECK(kind_of([&] { (void)check_decay_bound(p, cfg, cover, Profile::constant(g, 0.0), 2.0, 0.1); }) ==
        ErrorKind::HypothesisViolated);
}

TEST_CASE("supersolution pair traps a small perturbation and decreases in time") {
  const Grid g = Grid::square(5, 41);
  const Problem p = make_generic_problem(g, decay_with(0.4, 1.0, 1.0));
  const IntegratorConfig cfg{0.01, Boundary::dirichlet_zero, 1.0};
  const SkewState cover{Profile::constant(g, 0.0), TorusPhase::zero(1), 0.0};
  const Profile v0 = Profile::from_function_2d(g, [](double x, double y) {
    return 0.05 * std::exp(-(x * x + y * y) / 8) * std::cos(x / 5) * std::cos(y / 5);
  });
  const auto res = supersolution_pair(p, cfg, cover, v0, 2.0, 0.1, 5.0);
  CHECK(res.trapping.passed());
  CHECK(res.monotone_in_time.passed());
  CHECK(res.exterior_deviation_end < res.exterior_deviation_start);
  CHECK(sup_norm(res.phi_plus) == doctest::Approx(0.3));
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(res.phi_minus[k] == doctest::Approx(-res.phi_plus[k]));

  CHECK(kind_of([&] { (void)supersolution_pair(p, cfg, cover, v0, 0.5, 0.1, 1.0); }) ==
        ErrorKind::HypothesisViolated);
  CHECK(kind_of([&] { (void)supersolution_pair(p, cfg, cover, Profile::constant(g, 0.2), 2.0, 0.1, 1.0); }) ==
        ErrorKind::HypothesisViolated);
}

TEST_CASE("wedge of a front with its shift stays below both") {
  const Grid g = Grid::line(-30, 30, 301);
  const ReactionTerm f(BistableForm{QPSignal::constant(kOne, 0.3)});
  const Problem p = make_wave_problem(g, f, QPSignal(kOne));
  const IntegratorConfig cfg{0.05, Boundary::dirichlet_limits, 1.0};
  const SkewState cover{front(g), TorusPhase::zero(1), 0.0};
  const auto same = check_wedge_order(cover, Translation{0.0}, p, cfg, 5.0);
  CHECK(same.passed());
  CHECK(same.details.at("final_gap_to_cover") == 0.0);
  const auto shifted = check_wedge_order(cover, Translation{2.0}, p, cfg, 5.0);
  CHECK(shifted.passed());
}

TEST_CASE("closed-form standing pulse solves the stationary equation") {
  const double a = 0.25, h = 0.01;
  CHECK(stationary_pulse(a, 0.0) == doctest::Approx(0.3924).epsilon(1e-4));
  double worst = 0.0;
  for (double x = -15; x <= 15; x += 0.37) {
    const double u = stationary_pulse(a, x);
    const double uxx = (stationary_pulse(a, x + h) - 2 * u + stationary_pulse(a, x - h)) / (h * h);
    worst = std::max(worst, std::abs(uxx + u * (1 - u) * (u - a)));
  }
  CHECK(worst < 1e-5);
  CHECK(stationary_pulse(a, 30.0) < 1e-6);
  CHECK_THROWS_AS(stationary_pulse(0.6, 0.0), LabError);
}

TEST_CASE("verifier reports round trip through JSON") {
  VerifierReport r;
  r.name = "x";
  r.status = VerdictStatus::hypothesis_unmet;
  r.measured = 0.25;
  r.tolerance = 1.0;
  r.provenance = "exact";
  r.details = {{"k", 3}};
  const nlohmann::json j = r;
  CHECK(j.at("status") == "hypothesis_unmet");
  const auto back = report_from_json(j);
  CHECK(back.status == r.status);
  CHECK(back.measured == 0.25);
  CHECK(back.details.at("k") == 3);
}
