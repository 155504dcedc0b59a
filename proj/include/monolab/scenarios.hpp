#pragma once

#include <vector>

#include "monolab/semiflow.hpp"

namespace monolab {

/// a(t) = 0.25 + 0.1 sin t + 0.05 sin(sqrt2 t) on the basis (1, sqrt2).
QPSignal default_threshold();
/// b(t) = 1 + 0.3 sin t + 0.2 sin(sqrt2 t) on the basis (1, sqrt2).
QPSignal default_growth();

/// u(1-u)(u-a(t)) with the (F) constants eps0 = 0.02, mu = 0.04.
ReactionTerm default_bistable();
/// Radial logistic reaction with r_inner = 1, r_outer = R0 = 6, alpha = 1, eps0 = 0.3.
ReactionTerm default_radial();

/// Even standing pulse of u_xx + u(1-u)(u-a) = 0 for constant 0 < a < 1/2:
/// 3a / ((1+a) + sqrt((1+a)^2 - 9a/2) cosh(sqrt(a) x)).
double stationary_pulse(double a, double x);

struct FrameFitOptions {
  /// Multi-indices with max |k_j| <= harmonics enter the oscillatory part of the fit.
  int harmonics = 2;
  /// Relaxation time after each speed update before measuring.
  double relax = 100.0;
  /// Measurement window and sampling interval of the front position.
  double window = 300.0;
  double sample_every = 0.5;
  double level = 0.5;
  /// Stop once the fitted mean drift is below this.
  double drift_tol = 1e-9;
  int max_iterations = 8;
};

struct FrameFit {
  QPSignal speed;
  /// Mean drift of the front in the frame, one entry per measurement.
  std::vector<double> drift_history;
  /// Position of the level crossing at the end of the fit.
  double front_position = 0.0;
};

/// Finds a frame speed d(t) in which the front is stationary on average: measures the
/// level crossing, fits position ~ p + s t + sum over k of A_k cos + B_k sin of
/// 2 pi <k, theta(t)>, and adds the derivative of the fit to d. `state` is advanced
/// through all measurement runs and ends on (near) the wave.
FrameFit fit_frame_speed(const ReactionTerm& reaction, const Grid& grid,
                         const IntegratorConfig& config, QPSignal initial_speed, SkewState& state,
                         const FrameFitOptions& options = {});

/// Front position series of a run in a fixed frame.
struct FrontTrack {
  std::vector<double> times;
  std::vector<double> positions;
  std::vector<TorusPhase> phases;
};
FrontTrack track_front(const Stepper& stepper, SkewState& state, double duration,
                       double sample_every, double level);

}  // namespace monolab
