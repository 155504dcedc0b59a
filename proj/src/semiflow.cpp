#include "monolab/semiflow.hpp"

#include <algorithm>
#include <cmath>

#include "monolab/error.hpp"

namespace monolab {

Problem make_wave_problem(Grid grid, ReactionTerm reaction, QPSignal speed) {
  if (grid.dimension() != 1) {
    throw LabError(ErrorKind::DimensionMismatch, "wave problems live on a 1-D grid");
  }
  if (!reaction.x_independent()) {
    throw LabError(ErrorKind::InvalidArgument, "wave problems need an x-independent reaction");
  }
  if (!(speed.basis() == reaction.basis())) {
    throw LabError(ErrorKind::InvalidArgument,
                   "speed signal and reaction must share the frequency basis");
  }
  return Problem{ProblemKind::wave, std::move(grid), std::move(reaction), std::move(speed), {}};
}

Problem make_radial_problem(Grid grid, ReactionTerm reaction) {
  if (grid.dimension() != 2) {
    throw LabError(ErrorKind::DimensionMismatch, "radial problems live on a 2-D grid");
  }
  if (!reaction.g_symmetric() || !reaction.zero_at_zero()) {
    throw LabError(ErrorKind::HypothesisViolated, "radial problems need declared (f1) and (f2)");
  }
  const double rmax = std::hypot(grid.axis(0).max, grid.axis(1).max);
  if (auto w = find_zero_violation(reaction, rmax)) {
    throw LabError(ErrorKind::HypothesisViolated, w->describe());
  }
  const auto& p = reaction.params();
  if (!(p.eps0 > 0.0) || !(p.R0 > 0.0) || !(p.alpha > 0.0)) {
    throw LabError(ErrorKind::HypothesisViolated, "(f3) requires positive eps0, R0 and alpha");
  }
  if (auto w = find_dissipativity_violation(reaction, rmax)) {
    throw LabError(ErrorKind::HypothesisViolated, w->describe());
  }
  return Problem{ProblemKind::radial, std::move(grid), std::move(reaction), std::nullopt, {}};
}

Problem make_generic_problem(Grid grid, ReactionTerm reaction, std::optional<QPSignal> speed) {
  if (speed && grid.dimension() != 1) {
    throw LabError(ErrorKind::DimensionMismatch, "advection is only supported in 1-D");
  }
  return Problem{ProblemKind::generic, std::move(grid), std::move(reaction), std::move(speed), {}};
}

void check_config(const Problem& problem, const IntegratorConfig& config) {
  if (!(config.dt > 0.0) || !std::isfinite(config.dt)) {
    throw LabError(ErrorKind::CFLViolation, "dt must be positive");
  }
  if (!(config.lipschitz >= 0.0) || !(config.dt * config.lipschitz < 1.0)) {
    throw LabError(ErrorKind::CFLViolation,
                   "explicit reaction needs dt*L < 1 (got " +
                       std::to_string(config.dt * config.lipschitz) + ")");
  }
  if (problem.speed) {
    const double courant = config.dt * problem.speed->amplitude_bound() / problem.grid.h();
    if (courant > 1.0) {
      throw LabError(ErrorKind::CFLViolation,
                     "upwind advection needs dt*|d|/h <= 1 (got " + std::to_string(courant) + ")");
    }
  }
  if (!problem.pinned.empty() && problem.pinned.size() != problem.grid.size()) {
    throw LabError(ErrorKind::GridMismatch, "pinned mask size differs from grid size");
  }
}

Stepper::Stepper(Problem problem, IntegratorConfig config)
    : problem_(std::move(problem)), config_(config) {
  check_config(problem_, config_);
  const Grid& g = problem_.grid;
  weights_.resize(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    weights_[k] = problem_.reaction.weight(g.radius(k));
  }
  masked_ = std::any_of(problem_.pinned.begin(), problem_.pinned.end(),
                        [](unsigned char c) { return c != 0; });
  const double rx = config_.dt / (g.h() * g.h());
  if (g.dimension() == 1) {
    line_solver_ = masked_ ? MonotoneTridiagonal::backward_euler_masked(g.nx(), rx, problem_.pinned)
                           : MonotoneTridiagonal::backward_euler(g.nx(), rx);
    return;
  }
  const double hy = g.axis(1).spacing();
  const double ry = config_.dt / (hy * hy);
  if (!masked_) {
    line_solver_ = MonotoneTridiagonal::backward_euler(g.nx(), rx);
    // Column factorization shared by all columns, applied row-by-row for locality.
    const std::size_t ny = g.ny();
    col_pivot_.assign(ny, 1.0);
    col_lower_.assign(ny, 0.0);
    col_gamma_.assign(ny, 0.0);
    for (std::size_t j = 1; j + 1 < ny; ++j) {
      col_lower_[j] = ry;
      col_pivot_[j] = 1.0 + 2.0 * ry - ry * col_gamma_[j - 1];
      col_gamma_[j] = ry / col_pivot_[j];
    }
    return;
  }
  std::vector<unsigned char> mask(std::max(g.nx(), g.ny()));
  for (std::size_t j = 0; j < g.ny(); ++j) {
    for (std::size_t i = 0; i < g.nx(); ++i) mask[i] = problem_.pinned[g.index(i, j)];
    row_solvers_.push_back(MonotoneTridiagonal::backward_euler_masked(
        g.nx(), rx, std::span<const unsigned char>(mask.data(), g.nx())));
  }
  for (std::size_t i = 0; i < g.nx(); ++i) {
    for (std::size_t j = 0; j < g.ny(); ++j) mask[j] = problem_.pinned[g.index(i, j)];
    col_solvers_.push_back(MonotoneTridiagonal::backward_euler_masked(
        g.ny(), ry, std::span<const unsigned char>(mask.data(), g.ny())));
  }
}

bool Stepper::updates_boundary_by_reaction() const noexcept {
  return config_.boundary == Boundary::dirichlet_limits;
}

void Stepper::advect(std::vector<double>& u, double speed) const {
  const std::size_t n = u.size();
  const double r = config_.dt * std::abs(speed) / problem_.grid.h();
  if (r == 0.0) return;
  const double keep = 1.0 - r;
  const bool pinned = masked_;
  if (speed > 0.0) {
    // d u_x with d > 0: information arrives from the right.
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (pinned && problem_.pinned[i]) continue;
      u[i] = keep * u[i] + r * u[i + 1];
    }
  } else {
    for (std::size_t i = n - 2; i >= 1; --i) {
      if (!(pinned && problem_.pinned[i])) u[i] = keep * u[i] + r * u[i - 1];
    }
  }
}

void Stepper::react(std::vector<double>& u, const TorusPhase& phase) const {
  const auto snap = problem_.reaction.snapshot(phase);
  const Grid& g = problem_.grid;
  const double dt = config_.dt;
  const bool edge_reacts = updates_boundary_by_reaction();
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (masked_ && problem_.pinned[k]) continue;
    if (g.on_boundary(k)) {
      if (config_.boundary == Boundary::dirichlet_zero) {
        u[k] = 0.0;
        continue;
      }
      if (!edge_reacts) continue;
    }
    u[k] = u[k] + dt * problem_.reaction.value(snap, weights_[k], u[k]);
  }
}

void Stepper::diffuse_1d(std::vector<double>& u) const { line_solver_.solve(u.data()); }

void Stepper::diffuse_2d(std::vector<double>& u) const {
  const Grid& g = problem_.grid;
  const std::size_t nx = g.nx();
  const std::size_t ny = g.ny();
  if (masked_) {
    for (std::size_t j = 1; j + 1 < ny; ++j) row_solvers_[j].solve(u.data() + j * nx);
    for (std::size_t i = 1; i + 1 < nx; ++i) col_solvers_[i].solve(u.data() + i, nx);
    return;
  }
  for (std::size_t j = 1; j + 1 < ny; ++j) line_solver_.solve(u.data() + j * nx);
  // Column solves done across all interior columns at once; rows 0 and ny-1 are identity.
  for (std::size_t j = 1; j + 1 < ny; ++j) {
    double* row = u.data() + j * nx;
    const double* prev = u.data() + (j - 1) * nx;
    const double lower = col_lower_[j];
    const double piv = col_pivot_[j];
    for (std::size_t i = 1; i + 1 < nx; ++i) row[i] = (row[i] + lower * prev[i]) / piv;
  }
  for (std::size_t j = ny - 1; j-- > 1;) {
    double* row = u.data() + j * nx;
    const double* next = u.data() + (j + 1) * nx;
    const double gam = col_gamma_[j];
    for (std::size_t i = 1; i + 1 < nx; ++i) row[i] += gam * next[i];
  }
}

void Stepper::step(SkewState& state) const {
  if (!(state.profile.grid() == problem_.grid)) {
    throw LabError(ErrorKind::GridMismatch, "state profile does not match the problem grid");
  }
  std::vector<double> u(state.profile.values().begin(), state.profile.values().end());
  if (problem_.speed) {
    advect(u, evaluate(*problem_.speed, state.phase, 0.0));
  }
  react(u, state.phase);
  if (problem_.grid.dimension() == 1) {
    diffuse_1d(u);
  } else {
    diffuse_2d(u);
  }
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (!std::isfinite(u[k])) {
      throw LabError(ErrorKind::NonFiniteState,
                     "value at node " + std::to_string(k) + " became non-finite at t=" +
                         std::to_string(state.time));
    }
  }
  std::copy(u.begin(), u.end(), state.profile.values().begin());
  state.phase = advance_phase(state.phase, problem_.reaction.basis(), config_.dt);
  state.time += config_.dt;
}

void Stepper::advance(SkewState& state, long n, const Observer& observer) const {
  const double t0 = state.time;
  for (long k = 1; k <= n; ++k) {
    step(state);
    // Recompute from the origin so long runs do not accumulate time roundoff.
    state.time = t0 + static_cast<double>(k) * config_.dt;
    if (observer) observer(state, k);
  }
}

long Stepper::steps_for(double t) const {
  const double q = t / config_.dt;
  const double r = std::round(q);
  if (t < 0.0 || std::abs(q - r) > 1e-6) {
    throw LabError(ErrorKind::InvalidArgument,
                   "time " + std::to_string(t) + " is not a nonnegative multiple of dt");
  }
  return static_cast<long>(r);
}

SkewState step(const SkewState& state, const Problem& problem, const IntegratorConfig& config) {
  SkewState out = state;
  Stepper(problem, config).step(out);
  return out;
}

std::vector<SkewState> integrate(const SkewState& state, double T, const Problem& problem,
                                 const IntegratorConfig& config,
                                 std::span<const double> sample_times) {
  Stepper stepper(problem, config);
  const long total = stepper.steps_for(T);
  std::vector<long> wanted;
  wanted.reserve(sample_times.size());
  for (double t : sample_times) {
    const long k = stepper.steps_for(t);
    if (k > total) {
      throw LabError(ErrorKind::InvalidArgument, "sample time beyond T");
    }
    wanted.push_back(k);
  }
  std::vector<SkewState> out;
  out.reserve(wanted.size());
  auto emit = [&](const SkewState& s, long k) {
    for (long w : wanted) {
      if (w == k) out.push_back(s);
    }
  };
  SkewState cur = state;
  emit(cur, 0);
  stepper.advance(cur, total, emit);
  return out;
}

ScalarTrajectory homogeneous_solution(const ReactionTerm& reaction, const TorusPhase& phase,
                                      double u0, double T, double dt) {
  if (!reaction.x_independent()) {
    throw LabError(ErrorKind::InvalidArgument, "homogeneous solutions need an x-independent reaction");
  }
  const long n = static_cast<long>(std::llround(T / dt));
  ScalarTrajectory out;
  out.times.reserve(static_cast<std::size_t>(n) + 1);
  out.values.reserve(static_cast<std::size_t>(n) + 1);
  TorusPhase th = phase;
  double u = u0;
  out.times.push_back(0.0);
  out.values.push_back(u);
  for (long k = 1; k <= n; ++k) {
    u = u + dt * reaction.value(reaction.snapshot(th), 1.0, u);
    if (!std::isfinite(u)) {
      throw LabError(ErrorKind::NonFiniteState, "homogeneous solution blew up");
    }
    th = advance_phase(th, reaction.basis(), dt);
    out.times.push_back(static_cast<double>(k) * dt);
    out.values.push_back(u);
  }
  return out;
}

double level_crossing(const Profile& u, double level) {
  const Grid& g = u.grid();
  if (g.dimension() != 1) {
    throw LabError(ErrorKind::DimensionMismatch, "level crossings are defined on 1-D profiles");
  }
  for (std::size_t i = 0; i + 1 < g.nx(); ++i) {
    const double a = u[i] - level;
    const double b = u[i + 1] - level;
    if (a == 0.0) return g.x(i);
    if ((a < 0.0) != (b < 0.0)) {
      return g.x(i) + g.h() * a / (a - b);
    }
  }
  if (u[g.nx() - 1] == level) return g.x(g.nx() - 1);
  throw LabError(ErrorKind::NoCrossing, "profile never attains level " + std::to_string(level));
}

double wave_speed_estimate(std::span<const SkewState> trajectory, double level) {
  if (trajectory.size() < 2) {
    throw LabError(ErrorKind::InvalidArgument, "speed estimate needs at least two samples");
  }
  double st = 0, sx = 0, stt = 0, stx = 0;
  const double n = static_cast<double>(trajectory.size());
  for (const auto& s : trajectory) {
    const double x = level_crossing(s.profile, level);
    st += s.time;
    sx += x;
    stt += s.time * s.time;
    stx += s.time * x;
  }
  return (n * stx - st * sx) / (n * stt - st * st);
}

}  // namespace monolab
