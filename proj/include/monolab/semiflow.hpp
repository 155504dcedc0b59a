#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "monolab/profiles.hpp"
#include "monolab/quasi_periodic.hpp"
#include "monolab/reaction.hpp"
#include "monolab/tridiagonal.hpp"

namespace monolab {

/// A point (u, omega) of X x Omega plus the elapsed time since the orbit started.
struct SkewState {
  Profile profile;
  TorusPhase phase;
  double time = 0.0;
};

enum class Boundary {
  /// Edge nodes follow the spatially homogeneous solutions through their own values.
  dirichlet_limits,
  /// Edge nodes are held at 0.
  dirichlet_zero,
  /// Edge nodes keep whatever value they start with.
  dirichlet_frozen,
};

struct IntegratorConfig {
  double dt = 0.01;
  Boundary boundary = Boundary::dirichlet_zero;
  /// Declared bound L for -df/du over the working state range.
  double lipschitz = 1.0;
};

enum class ProblemKind { wave, radial, generic };

/// Everything the stepper needs: grid, reaction, optional moving-frame speed
/// d(t) (1-D only) and optional pinned nodes that are never updated.
struct Problem {
  ProblemKind kind = ProblemKind::generic;
  Grid grid;
  ReactionTerm reaction;
  std::optional<QPSignal> speed;
  std::vector<unsigned char> pinned;
};

/// u_t = u_xx + d(t) u_x + g(t,u) on a 1-D interval; g must be x-independent.
Problem make_wave_problem(Grid grid, ReactionTerm reaction, QPSignal speed);
/// u_t = Laplace(u) + f(t,x,u) on a 2-D box; f must satisfy (f1)-(f3) by sampling.
Problem make_radial_problem(Grid grid, ReactionTerm reaction);
Problem make_generic_problem(Grid grid, ReactionTerm reaction,
                             std::optional<QPSignal> speed = std::nullopt);

/// Throws CFLViolation unless dt*L < 1 and dt*max|d|/h <= 1.
void check_config(const Problem& problem, const IntegratorConfig& config);

/// One Lie-split IMEX step: upwind advection, explicit reaction, backward-Euler
/// diffusion (tridiagonal in 1-D, one implicit sweep per axis in 2-D). Each stage is
/// monotone, so ordered inputs give ordered outputs exactly in floating point.
class Stepper {
 public:
  Stepper(Problem problem, IntegratorConfig config);

  void step(SkewState& state) const;
  using Observer = std::function<void(const SkewState&, long step_index)>;
  /// Performs n steps, calling observer after each one (if set).
  void advance(SkewState& state, long n, const Observer& observer = {}) const;

  const Problem& problem() const noexcept { return problem_; }
  const IntegratorConfig& config() const noexcept { return config_; }
  /// Number of steps that reach time t; throws InvalidArgument if t is not a multiple of dt.
  long steps_for(double t) const;

 private:
  void advect(std::vector<double>& u, double speed) const;
  void react(std::vector<double>& u, const TorusPhase& phase) const;
  void diffuse_1d(std::vector<double>& u) const;
  void diffuse_2d(std::vector<double>& u) const;
  bool updates_boundary_by_reaction() const noexcept;

  Problem problem_;
  IntegratorConfig config_;
  std::vector<double> weights_;
  MonotoneTridiagonal line_solver_;
  std::vector<MonotoneTridiagonal> row_solvers_;  // masked 2-D only
  std::vector<MonotoneTridiagonal> col_solvers_;
  std::vector<double> col_pivot_;
  std::vector<double> col_lower_;
  std::vector<double> col_gamma_;
  bool masked_ = false;
};

SkewState step(const SkewState& state, const Problem& problem, const IntegratorConfig& config);

/// Samples at the requested times (each a multiple of dt in [0, T]); the state at
/// time 0 is the initial state.
std::vector<SkewState> integrate(const SkewState& state, double T, const Problem& problem,
                                 const IntegratorConfig& config,
                                 std::span<const double> sample_times);

struct ScalarTrajectory {
  std::vector<double> times;
  std::vector<double> values;
};

/// u' = g(t,u) stepped explicitly with the integrator's reaction stage.
ScalarTrajectory homogeneous_solution(const ReactionTerm& reaction, const TorusPhase& phase,
                                      double u0, double T, double dt);

/// Sub-grid position of the first crossing of level (linear interpolation).
/// Throws NoCrossing when the profile never attains the level.
double level_crossing(const Profile& u, double level);

/// Least-squares slope of the level-crossing position against time.
double wave_speed_estimate(std::span<const SkewState> trajectory, double level);

}  // namespace monolab
