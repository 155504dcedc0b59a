#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "monolab/error.hpp"
#include "monolab/group_actions.hpp"

using namespace monolab;

namespace {

const double kPi = std::numbers::pi;

}  // namespace

TEST_CASE("translation by grid multiples is an exact shift") {
  const Grid g = Grid::line(-10.0, 10.0, 201);
  const Profile u = Profile::from_function_1d(g, [](double x) { return std::tanh(x); });
  const Profile s = apply(Translation{0.3}, u);
  for (std::size_t i = 3; i < g.nx(); ++i) CHECK(s[i] == u[i - 3]);
  CHECK(s[0] == u[0]);
  CHECK(apply(Translation{0.0}, u) == u);
}

TEST_CASE("translation interpolates linearly in between") {
  const Grid g = Grid::line(0.0, 10.0, 101);
  const Profile u = Profile::from_function_1d(g, [](double x) { return 2.0 * x + 1.0; });
  const Profile s = apply(Translation{0.537}, u);
  for (std::size_t i = 10; i < 100; ++i)
    CHECK(s[i] == doctest::Approx(2.0 * (g.x(i) - 0.537) + 1.0).epsilon(1e-12));
  const Profile back = apply(Translation{-0.537}, u);
  for (std::size_t i = 0; i < 90; ++i)
    CHECK(back[i] == doctest::Approx(2.0 * (g.x(i) + 0.537) + 1.0).epsilon(1e-12));
}

TEST_CASE("translations preserve order") {
  const Grid g = Grid::line(-5.0, 5.0, 51);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(g.size()), b(g.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = d(rng);
      b[i] = a[i] + std::abs(d(rng));
    }
    const Translation t{3.0 * d(rng)};
    CHECK(leq(apply(t, Profile(g, a)), apply(t, Profile(g, b))));
  }
}

TEST_CASE("quarter-turn rotation is an exact permutation") {
  const Grid g = Grid::square(2.0, 9);
  const Profile u = Profile::from_function_2d(g, [](double x, double y) { return x + 10.0 * y * y; });
  const Profile r = apply(Rotation2D(kPi / 2), u);
  // u(R_{-pi/2}(x, y)) = u(y, -x).
  const Profile oracle = Profile::from_function_2d(g, [](double x, double y) { return y + 10.0 * x * x; });
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(r[k] == doctest::Approx(oracle[k]).epsilon(1e-15));
  Profile four = u;
  for (int i = 0; i < 4; ++i) four = apply(Rotation2D(kPi / 2), four);
  CHECK(four == u);
  CHECK(apply(Rotation2D(0.0), u) == u);
}

TEST_CASE("generic rotation of a radial profile stays radial") {
  const Grid g = Grid::square(8.0, 161);
  const Profile u = Profile::from_function_2d(
      g, [](double x, double y) { return std::exp(-(x * x + y * y) / 4.0); });
  const Profile r = apply(Rotation2D(kPi / 7), u);
  CHECK(sup_distance(r, u) < 2e-3);
}

TEST_CASE("group composition and inverses") {
  CHECK(compose(Translation{1.5}, Translation{-0.25}).sigma == 1.25);
  CHECK(inverse(Translation{2.0}).sigma == -2.0);
  CHECK(compose(Rotation2D(kPi), Rotation2D(1.5 * kPi)).angle() == doctest::Approx(0.5 * kPi));
  CHECK(inverse(Rotation2D(0.5)).angle() == doctest::Approx(2 * kPi - 0.5));
  CHECK(inverse(Rotation2D(0.0)).angle() == 0.0);
  const GroupElement a = Translation{1.0};
  const GroupElement b = Rotation2D(1.0);
  CHECK_THROWS_AS(compose(a, b), LabError);
  CHECK(std::get<Translation>(compose(a, inverse(a))).sigma == 0.0);
  CHECK_THROWS_AS(monolab::apply(b, Profile::constant(Grid::line(0, 1, 5), 0.0)), LabError);
  CHECK_THROWS_AS(monolab::apply(a, Profile::constant(Grid::square(1, 5), 0.0)), LabError);
}
