#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "monolab/error.hpp"
#include "monolab/semiflow.hpp"

using namespace monolab;

namespace {

const FrequencyBasis kBasis({1.0, std::numbers::sqrt2});

QPSignal threshold() {
  QPSignal a = QPSignal::constant(kBasis, 0.25);
  a.add_trig({1, 0}, 0.0, 0.1);
  a.add_trig({0, 1}, 0.0, 0.05);
  return a;
}

// Plain Gaussian elimination with partial pivoting on the dense matrix.
std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    std::swap(a[c], a[p]);
    std::swap(b[c], b[p]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return x;
}

Profile front(const Grid& g, double center, double width) {
  return Profile::from_function_1d(g, [&](double x) { return 1.0 / (1.0 + std::exp((x - center) / width)); });
}

}  // namespace

TEST_CASE("monotone tridiagonal solve agrees with dense elimination") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + trial;
    std::vector<double> lo(n), di(n), up(n), rhs(n);
    std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      lo[i] = i == 0 ? 0.0 : d(rng);
      up[i] = i + 1 == n ? 0.0 : d(rng);
      di[i] = lo[i] + up[i] + d(rng) + 0.01;
      rhs[i] = 2 * d(rng) - 1;
      dense[i][i] = di[i];
      if (i > 0) dense[i][i - 1] = -lo[i];
      if (i + 1 < n) dense[i][i + 1] = -up[i];
    }
    const MonotoneTridiagonal m(lo, di, up);
    std::vector<double> x = rhs;
    m.solve(x.data());
    const auto oracle = dense_solve(dense, rhs);
    for (std::size_t i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(oracle[i]).epsilon(1e-12));
  }
  const std::vector<double> bad_lo{0.0, -1.0}, di{1.0, 1.0}, up{0.0, 0.0};
  CHECK_THROWS_AS(MonotoneTridiagonal(bad_lo, di, up), LabError);
}

TEST_CASE("strided solve matches contiguous solve") {
  const auto m = MonotoneTridiagonal::backward_euler(6, 0.7);
  std::vector<double> a{1, 2, 3, 4, 5, 6};
  std::vector<double> b(18, -9.0);
  for (std::size_t i = 0; i < 6; ++i) b[3 * i] = a[i];
  m.solve(a.data());
  m.solve(b.data(), 3);
  for (std::size_t i = 0; i < 6; ++i) CHECK(b[3 * i] == a[i]);
  CHECK(b[1] == -9.0);
}

TEST_CASE("configuration checks enforce the step restrictions") {
  const Grid g = Grid::line(-10, 10, 201);
  const ReactionTerm f(BistableForm{threshold()});
  const Problem p = make_wave_problem(g, f, QPSignal::constant(kBasis, 2.0));
  CHECK_NOTHROW(check_config(p, {0.05, Boundary::dirichlet_limits, 1.0}));
  CHECK_THROWS_AS(check_config(p, {0.06, Boundary::dirichlet_limits, 1.0}), LabError);
  CHECK_THROWS_AS(check_config(p, {0.05, Boundary::dirichlet_limits, 20.0}), LabError);
  try {
    check_config(p, {0.0, Boundary::dirichlet_limits, 1.0});
    FAIL("expected CFLViolation");
  } catch (const LabError& e) {
    CHECK(e.kind() == ErrorKind::CFLViolation);
  }
  CHECK_THROWS_AS(make_wave_problem(Grid::square(1, 5), f, QPSignal(kBasis)), LabError);
  CHECK_THROWS_AS(make_wave_problem(g, f, QPSignal(FrequencyBasis({1.0}))), LabError);
}

TEST_CASE("radial problems enforce declared hypotheses") {
  QPSignal b = QPSignal::constant(kBasis, 1.0);
  b.add_trig({1, 0}, 0.0, 0.3);
  const Grid g = Grid::square(10.0, 21);
  const HypothesisParams good{0.3, 6.0, 1.0, 0.0};
  CHECK_NOTHROW(make_radial_problem(g, ReactionTerm(RadialLogisticForm{b, 1.0, 1.0, 6.0}, good)));
  const HypothesisParams no_alpha{0.3, 6.0, 0.0, 0.0};
  CHECK_THROWS_AS(make_radial_problem(g, ReactionTerm(RadialLogisticForm{b, 1.0, 1.0, 6.0}, no_alpha)),
                  LabError);
  const ReactionTerm shifted(PolynomialForm{{QPSignal::constant(kBasis, 0.1), QPSignal::constant(kBasis, -1.0)}},
                             good, true, true);
  try {
    make_radial_problem(g, shifted);
    FAIL("expected HypothesisViolated");
  } catch (const LabError& e) {
    CHECK(e.kind() == ErrorKind::HypothesisViolated);
  }
  CHECK_THROWS_AS(make_radial_problem(g, ReactionTerm(RadialLogisticForm{b, 1.0, 1.0, 6.0}, good, false)),
                  LabError);
}

TEST_CASE("the step preserves order, including across stages") {
  const Grid g = Grid::line(-20, 20, 201);
  const ReactionTerm f(BistableForm{threshold()});
  QPSignal d = QPSignal::constant(kBasis, 0.3);
  d.add_trig({1, 0}, 0.2, 0.0);
  const Stepper stepper(make_wave_problem(g, f, d), {0.1, Boundary::dirichlet_limits, 1.0});
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(g.size()), b(g.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = 1.2 * u01(rng) - 0.1;
      b[i] = a[i] + (trial % 2 ? 0.0 : 0.1 * u01(rng));
    }
    const TorusPhase th({u01(rng), u01(rng)});
    SkewState sa{Profile(g, a), th, 0.0};
    SkewState sb{Profile(g, b), th, 0.0};
    stepper.advance(sa, 20);
    stepper.advance(sb, 20);
    CHECK(leq(sa.profile, sb.profile));
  }
}

TEST_CASE("constant limits follow the homogeneous solution exactly") {
  const Grid g = Grid::line(-5, 5, 51);
  const ReactionTerm f(BistableForm{threshold()});
  const Stepper stepper(make_wave_problem(g, f, QPSignal(kBasis)), {0.05, Boundary::dirichlet_limits, 1.0});
  const TorusPhase th({0.2, 0.4});
  for (double u0 : {0.0, 1.0, 0.6}) {
    SkewState s{Profile::constant(g, u0), th, 0.0};
    stepper.advance(s, 100);
    const auto traj = homogeneous_solution(f, th, u0, 5.0, 0.05);
    for (std::size_t k = 0; k < g.size(); ++k)
      CHECK(s.profile[k] == doctest::Approx(traj.values.back()).epsilon(1e-13));
    CHECK(s.profile[0] == traj.values.back());
  }
  SkewState zero{Profile::constant(g, 0.0), th, 0.0};
  stepper.advance(zero, 10);
  CHECK(sup_norm(zero.profile) == 0.0);
}

TEST_CASE("skew-product bookkeeping: time, phase and the cocycle property") {
  const Grid g = Grid::line(-10, 10, 101);
  const ReactionTerm f(BistableForm{threshold()});
  const Problem p = make_wave_problem(g, f, QPSignal(kBasis));
  const IntegratorConfig cfg{0.02, Boundary::dirichlet_limits, 1.0};
  const Stepper stepper(p, cfg);
  const TorusPhase th({0.6, 0.1});
  SkewState whole{front(g, 0.0, 1.0), th, 0.0};
  stepper.advance(whole, 150);
  SkewState split{front(g, 0.0, 1.0), th, 0.0};
  stepper.advance(split, 50);
  SkewState second{split.profile, split.phase, 0.0};
  stepper.advance(second, 100);
  CHECK(second.profile == whole.profile);
  CHECK(whole.time == doctest::Approx(3.0));
  CHECK(torus_distance(whole.phase, advance_phase(th, kBasis, 3.0)) < 1e-12);

  CHECK(stepper.steps_for(1.0) == 50);
  CHECK_THROWS_AS(stepper.steps_for(0.011), LabError);

  const std::vector<double> samples{0.0, 1.0, 3.0};
  const auto out = integrate(SkewState{front(g, 0.0, 1.0), th, 0.0}, 3.0, p, cfg, samples);
  REQUIRE(out.size() == 3);
  CHECK(out[0].profile == front(g, 0.0, 1.0));
  CHECK(out[2].profile == whole.profile);
  const double late[] = {4.0};
  CHECK_THROWS_AS(integrate(out[0], 3.0, p, cfg, late), LabError);

  SkewState wrong{Profile::constant(Grid::line(0, 1, 5), 0.0), th, 0.0};
  CHECK_THROWS_AS(stepper.step(wrong), LabError);
}

TEST_CASE("autonomous bistable front moves at the closed-form speed") {
  const double a = 0.25;
  const FrequencyBasis one({1.0});
  const ReactionTerm f(BistableForm{QPSignal::constant(one, a)});
  const Grid g = Grid::line(-40, 40, 1601);
  const IntegratorConfig cfg{0.005, Boundary::dirichlet_limits, 1.0};
  const Problem p = make_wave_problem(g, f, QPSignal(one));
  std::vector<double> times;
  for (int k = 0; k <= 10; ++k) times.push_back(10.0 + 2.0 * k);
  const auto traj = integrate(SkewState{front(g, -10.0, std::numbers::sqrt2), TorusPhase::zero(1), 0.0},
                              30.0, p, cfg, times);
  const double c = wave_speed_estimate(traj, 0.5);
  CHECK(c == doctest::Approx((1.0 - 2.0 * a) / std::numbers::sqrt2).epsilon(0.01));
}

TEST_CASE("level crossings interpolate between nodes") {
  const Grid g = Grid::line(0, 4, 5);
  CHECK(level_crossing(Profile(g, {1, 1, 0.75, 0.25, 0}), 0.5) == doctest::Approx(2.5));
  CHECK(level_crossing(Profile(g, {1, 0.5, 0, 0, 0}), 0.5) == doctest::Approx(1.0));
  CHECK_THROWS_AS(level_crossing(Profile(g, {1, 1, 1, 1, 1}), 0.5), LabError);
}

TEST_CASE("two-dimensional diffusion sweeps preserve order and symmetry") {
  const Grid g = Grid::square(5.0, 41);
  const ReactionTerm decay = ReactionTerm::linear_decay(kBasis, 0.5);
  const Stepper stepper(make_generic_problem(g, decay), {0.05, Boundary::dirichlet_zero, 1.0});
  const auto bump = [&](double amp) {
    return Profile::from_function_2d(g, [amp](double x, double y) { return amp * std::exp(-(x * x + y * y)); });
  };
  SkewState lo{bump(0.5), TorusPhase::zero(2), 0.0};
  SkewState hi{bump(0.6), TorusPhase::zero(2), 0.0};
  stepper.advance(lo, 40);
  stepper.advance(hi, 40);
  CHECK(leq(lo.profile, hi.profile));
  const std::size_t n = g.nx();
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(lo.profile[g.index(i, j)] == doctest::Approx(lo.profile[g.index(j, i)]).epsilon(1e-12));
      CHECK(lo.profile[g.index(i, j)] == doctest::Approx(lo.profile[g.index(n - 1 - i, j)]).epsilon(1e-12));
    }

  // Pinned nodes keep their value; the masked and unmasked sweeps agree without pins.
  Problem pinned = make_generic_problem(g, decay);
  pinned.pinned.assign(g.size(), 0);
  const Stepper plain(pinned, {0.05, Boundary::dirichlet_zero, 1.0});
  SkewState again{bump(0.5), TorusPhase::zero(2), 0.0};
  plain.advance(again, 40);
  CHECK(sup_distance(again.profile, lo.profile) < 1e-14);

  pinned.pinned[g.index(20, 20)] = 1;
  const Stepper held(pinned, {0.05, Boundary::dirichlet_frozen, 1.0});
  SkewState s{bump(0.5), TorusPhase::zero(2), 0.0};
  held.advance(s, 40);
  CHECK(s.profile[g.index(20, 20)] == 0.5);
}

TEST_CASE("explicit decay reproduces the product formula") {
  const FrequencyBasis one({1.0});
  const ReactionTerm decay = ReactionTerm::linear_decay(one, 1.0);
  const Grid g = Grid::line(-1, 1, 11);
  const IntegratorConfig cfg{1e-3, Boundary::dirichlet_limits, 1.0};
  const Stepper stepper(make_generic_problem(g, decay), cfg);
  SkewState s{Profile::constant(g, 1.0), TorusPhase::zero(1), 0.0};
  stepper.step(s);
  CHECK(s.profile[0] == 1.0 - 1e-3);
  stepper.advance(s, 999);
  const double product = std::pow(1.0 - 1e-3, 1000);
  CHECK(s.profile[5] == doctest::Approx(product).epsilon(1e-12));
  CHECK(std::abs(s.profile[5] - std::exp(-1.0)) < 2e-4);

  const auto traj = homogeneous_solution(decay, TorusPhase::zero(1), 1.0, 1.0, 1e-3);
  CHECK(traj.values.size() == 1001);
  CHECK(std::abs(traj.values.back() - std::exp(-1.0)) < 2e-4);
  const auto flat = homogeneous_solution(ReactionTerm::zero(one), TorusPhase::zero(1), 0.3, 1.0, 0.1);
  for (double v : flat.values) CHECK(v == 0.3);

  const Stepper inert(make_generic_problem(g, ReactionTerm::zero(one)), cfg);
  SkewState c{Profile::constant(g, 0.7), TorusPhase::zero(1), 0.0};
  inert.advance(c, 10);
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(c.profile[k] == doctest::Approx(0.7).epsilon(1e-15));
  const auto t0 = integrate(c, 0.0, make_generic_problem(g, ReactionTerm::zero(one)), cfg, std::vector<double>{0.0});
  REQUIRE(t0.size() == 1);
  CHECK(t0[0].profile == c.profile);
}

TEST_CASE("zero is preserved under dirichlet_zero") {
  const ReactionTerm f(BistableForm{threshold()});
  const Grid g = Grid::square(4.0, 21);
  const Stepper stepper(make_generic_problem(g, f), {0.05, Boundary::dirichlet_zero, 1.0});
  SkewState s{Profile::constant(g, 0.0), TorusPhase({0.3, 0.3}), 0.0};
  stepper.advance(s, 50);
  CHECK(sup_norm(s.profile) == 0.0);
}

TEST_CASE("speed estimates: constructed translation and the balanced bistable") {
  const Grid g = Grid::line(-20, 20, 401);
  std::vector<SkewState> moving;
  for (int k = 0; k <= 10; ++k) {
    const double t = 0.5 * k;
    moving.push_back({front(g, -3.0 + 0.3 * t, 1.0), TorusPhase::zero(1), t});
  }
  CHECK(wave_speed_estimate(moving, 0.5) == doctest::Approx(0.3).epsilon(1e-6));
  CHECK_THROWS_AS(wave_speed_estimate(std::span<const SkewState>(moving.data(), 1), 0.5), LabError);

  const FrequencyBasis one({1.0});
  const ReactionTerm balanced(BistableForm{QPSignal::constant(one, 0.5)});
  std::vector<double> times;
  for (int k = 0; k <= 10; ++k) times.push_back(5.0 + k);
  const auto traj = integrate(SkewState{front(g, 0.0, std::numbers::sqrt2), TorusPhase::zero(1), 0.0}, 15.0,
                              make_wave_problem(g, balanced, QPSignal(one)),
                              {0.01, Boundary::dirichlet_limits, 1.0}, times);
  CHECK(std::abs(wave_speed_estimate(traj, 0.5)) < 1e-3);
}

TEST_CASE("closed-form bistable front satisfies the travelling-wave equation") {
  // phi = 1/(1+E), E = exp(x/sqrt2); derivatives written in terms of E.
  const double a = 0.25;
  const double c = (1.0 - 2.0 * a) / std::numbers::sqrt2;
  double worst = 0.0;
  for (double x = -20.0; x <= 20.0; x += 0.01) {
    const double E = std::exp(x / std::numbers::sqrt2);
    const double phi = 1.0 / (1.0 + E);
    const double d1 = -E / (std::numbers::sqrt2 * (1 + E) * (1 + E));
    const double d2 = E * (E - 1.0) / (2.0 * (1 + E) * (1 + E) * (1 + E));
    worst = std::max(worst, std::abs(d2 + c * d1 + phi * (1 - phi) * (phi - a)));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("refinement of a smooth benchmark converges at first order in dt") {
  const FrequencyBasis one({1.0});
  const ReactionTerm decay = ReactionTerm::linear_decay(one, 1.0);
  const auto run = [&](int level) {
    const std::size_t n = 101 * (1u << level) - ((1u << level) - 1);
    const Grid g = Grid::line(-10, 10, n);
    const double dt = 0.02 / (1 << level);
    const Stepper s(make_generic_problem(g, decay), {dt, Boundary::dirichlet_zero, 1.0});
    SkewState st{Profile::from_function_1d(g, [](double x) { return std::exp(-x * x); }), TorusPhase::zero(1), 0.0};
    s.advance(st, s.steps_for(1.0));
    std::vector<double> coarse(101);
    for (std::size_t i = 0; i < 101; ++i) coarse[i] = st.profile[i << level];
    return coarse;
  };
  const auto u0 = run(0), u1 = run(1), u2 = run(2);
  double d01 = 0, d12 = 0;
  for (std::size_t i = 0; i < 101; ++i) {
    d01 = std::max(d01, std::abs(u0[i] - u1[i]));
    d12 = std::max(d12, std::abs(u1[i] - u2[i]));
  }
  const double ratio = d01 / d12;
  CHECK(ratio >= 1.7);
  CHECK(ratio <= 4.3);
}
