#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "monolab/scenarios.hpp"

using namespace monolab;

TEST_CASE("default signals match their Fourier description") {
  const auto a = default_threshold();
  const auto b = default_growth();
  for (double t : {0.0, 0.4, 3.0, 17.5}) {
    CHECK(evaluate(a, TorusPhase::zero(2), t) == doctest::Approx(0.25 + 0.1 * std::sin(t) + 0.05 * std::sin(std::numbers::sqrt2 * t)));
    CHECK(evaluate(b, TorusPhase::zero(2), t) == doctest::Approx(1.0 + 0.3 * std::sin(t) + 0.2 * std::sin(std::numbers::sqrt2 * t)));
  }
  CHECK(default_bistable().params().eps0 == 0.02);
  CHECK(default_radial().params().R0 == 6.0);
}

TEST_CASE("frame fit pins the default front in place") {
  const Grid g = Grid::line(-50, 50, 1001);
  const IntegratorConfig cfg{0.02, Boundary::dirichlet_limits, 1.0};
  const ReactionTerm f = default_bistable();
  SkewState s{Profile::from_function_1d(g, [](double x) { return 0.5 * (1 - std::tanh(x / (2 * std::numbers::sqrt2))); }),
              TorusPhase::zero(2), 0.0};
  const double c0 = (1 - 2 * 0.25) / std::numbers::sqrt2;
  const auto fit = fit_frame_speed(f, g, cfg, QPSignal::constant(f.basis(), c0), s);
  REQUIRE(fit.drift_history.size() >= 3);
  CHECK(std::abs(fit.drift_history.back()) < 1e-8);
  for (std::size_t i = 1; i < fit.drift_history.size(); ++i)
    CHECK(std::abs(fit.drift_history[i]) < std::abs(fit.drift_history[i - 1]));
  CHECK(fit.speed.modes().at({0, 0}).real() == doctest::Approx(0.3565).epsilon(1e-3));

  const Stepper stepper(make_wave_problem(g, f, fit.speed), cfg);
  const auto track = track_front(stepper, s, 200.0, 1.0, 0.5);
  const auto [lo, hi] = std::minmax_element(track.positions.begin(), track.positions.end());
  CHECK(*hi - *lo < 1e-3);
}
