#include "monolab/scenarios.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "monolab/error.hpp"
#include "monolab/group_actions.hpp"

namespace monolab {

namespace {

const FrequencyBasis& default_basis() {
  static const FrequencyBasis basis({1.0, std::numbers::sqrt2});
  return basis;
}

// One representative of each +-k pair with max |k_j| <= h.
std::vector<MultiIndex> half_lattice(std::size_t m, int h) {
  std::vector<MultiIndex> out;
  MultiIndex k(m, -h);
  while (true) {
    bool positive = false;
    for (int v : k) {
      if (v != 0) {
        positive = v > 0;
        break;
      }
    }
    if (positive) out.push_back(k);
    std::size_t j = 0;
    while (j < m && k[j] == h) k[j++] = -h;
    if (j == m) break;
    ++k[j];
  }
  return out;
}

double phase_angle(const MultiIndex& k, const TorusPhase& th) {
  double s = 0.0;
  for (std::size_t j = 0; j < k.size(); ++j) s += k[j] * th[j];
  return 2.0 * std::numbers::pi * s;
}

}  // namespace

QPSignal default_threshold() {
  QPSignal a = QPSignal::constant(default_basis(), 0.25);
  a.add_trig({1, 0}, 0.0, 0.1);
  a.add_trig({0, 1}, 0.0, 0.05);
  return a;
}

QPSignal default_growth() {
  QPSignal b = QPSignal::constant(default_basis(), 1.0);
  b.add_trig({1, 0}, 0.0, 0.3);
  b.add_trig({0, 1}, 0.0, 0.2);
  return b;
}

ReactionTerm default_bistable() {
  HypothesisParams p;
  p.eps0 = 0.02;
  p.mu = 0.04;
  return ReactionTerm(BistableForm{default_threshold()}, p);
}

ReactionTerm default_radial() {
  HypothesisParams p;
  p.eps0 = 0.3;
  p.R0 = 6.0;
  p.alpha = 1.0;
  return ReactionTerm(RadialLogisticForm{default_growth(), 1.0, 1.0, 6.0}, p);
}

double stationary_pulse(double a, double x) {
  if (!(a > 0.0) || !(a < 0.5)) {
    throw LabError(ErrorKind::InvalidArgument, "stationary pulse needs 0 < a < 1/2");
  }
  const double c = std::sqrt((1.0 + a) * (1.0 + a) - 4.5 * a);
  return 3.0 * a / ((1.0 + a) + c * std::cosh(std::sqrt(a) * x));
}

FrontTrack track_front(const Stepper& stepper, SkewState& state, double duration,
                       double sample_every, double level) {
  const long n = stepper.steps_for(duration);
  const long every = stepper.steps_for(sample_every);
  FrontTrack out;
  auto record = [&](const SkewState& s) {
    out.times.push_back(s.time);
    out.positions.push_back(level_crossing(s.profile, level));
    out.phases.push_back(s.phase);
  };
  record(state);
  stepper.advance(state, n, [&](const SkewState& s, long k) {
    if (k % every == 0) record(s);
  });
  return out;
}

FrameFit fit_frame_speed(const ReactionTerm& reaction, const Grid& grid,
                         const IntegratorConfig& config, QPSignal initial_speed, SkewState& state,
                         const FrameFitOptions& options) {
  const auto& basis = reaction.basis();
  const auto modes = half_lattice(basis.size(), options.harmonics);
  FrameFit fit{std::move(initial_speed), {}, 0.0};

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    const Stepper stepper(make_wave_problem(grid, reaction, fit.speed), config);
    stepper.advance(state, stepper.steps_for(options.relax));
    const auto track = track_front(stepper, state, options.window, options.sample_every, options.level);

    const auto rows = static_cast<Eigen::Index>(track.times.size());
    const auto cols = static_cast<Eigen::Index>(2 + 2 * modes.size());
    Eigen::MatrixXd A(rows, cols);
    Eigen::VectorXd b(rows);
    const double t0 = track.times.front();
    for (Eigen::Index r = 0; r < rows; ++r) {
      const auto i = static_cast<std::size_t>(r);
      A(r, 0) = 1.0;
      A(r, 1) = track.times[i] - t0;
      for (std::size_t q = 0; q < modes.size(); ++q) {
        const double phi = phase_angle(modes[q], track.phases[i]);
        A(r, static_cast<Eigen::Index>(2 + 2 * q)) = std::cos(phi);
        A(r, static_cast<Eigen::Index>(3 + 2 * q)) = std::sin(phi);
      }
      b(r) = track.positions[i];
    }
    const Eigen::VectorXd x = A.colPivHouseholderQr().solve(b);

    const double drift = x(1);
    fit.drift_history.push_back(drift);
    fit.front_position = track.positions.back();
    // d/dt of A cos(phi) + B sin(phi) is <k,omega> (B cos(phi) - A sin(phi)).
    fit.speed.add_constant(drift);
    for (std::size_t q = 0; q < modes.size(); ++q) {
      double rate = 0.0;
      for (std::size_t j = 0; j < basis.size(); ++j) rate += modes[q][j] * basis[j];
      const double Ak = x(static_cast<Eigen::Index>(2 + 2 * q));
      const double Bk = x(static_cast<Eigen::Index>(3 + 2 * q));
      fit.speed.add_trig(modes[q], rate * Bk, -rate * Ak);
    }
    if (std::abs(drift) < options.drift_tol) break;
    const double span = grid.axis(0).max - grid.axis(0).min;
    const double centre = 0.5 * (grid.axis(0).max + grid.axis(0).min);
    if (std::abs(fit.front_position - centre) > 0.1 * span) {
      state.profile = apply(Translation{centre - fit.front_position}, state.profile);
    }
  }
  return fit;
}

}  // namespace monolab
