#include "monolab/group_actions.hpp"

#include <cmath>
#include <numbers>

#include "monolab/error.hpp"

namespace monolab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double normalize_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r >= kTwoPi ? 0.0 : r;
}

bool centered_square(const Grid& g) {
  if (g.dimension() != 2 || g.nx() != g.ny()) return false;
  const auto& ax = g.axis(0);
  const auto& ay = g.axis(1);
  return ax.min == -ax.max && ay.min == -ay.max && ax.max == ay.max;
}

// Exact quarter-turn count if the angle is a multiple of pi/2, else -1.
int quarter_turns(double angle) {
  const double q = angle / (0.5 * std::numbers::pi);
  const double r = std::round(q);
  if (std::abs(q - r) < 1e-14) {
    return static_cast<int>(r) % 4;
  }
  return -1;
}

}  // namespace

Rotation2D::Rotation2D(double angle) : angle_(normalize_angle(angle)) {}

Profile apply(const Translation& g, const Profile& u) {
  const Grid& grid = u.grid();
  if (grid.dimension() != 1) {
    throw LabError(ErrorKind::DimensionMismatch, "translations act on 1-D profiles");
  }
  if (g.sigma == 0.0) {
    return u;
  }
  const std::size_t n = grid.nx();
  const double q = g.sigma / grid.h();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double pos = static_cast<double>(i) - q;
    if (pos <= 0.0) {
      out[i] = u[0];
    } else if (pos >= static_cast<double>(n - 1)) {
      out[i] = u[n - 1];
    } else {
      const double fl = std::floor(pos);
      const auto k = static_cast<std::size_t>(fl);
      const double w = pos - fl;
      out[i] = w == 0.0 ? u[k] : (1.0 - w) * u[k] + w * u[k + 1];
    }
  }
  return Profile(grid, std::move(out));
}

Profile apply(const Rotation2D& g, const Profile& u) {
  const Grid& grid = u.grid();
  if (grid.dimension() != 2) {
    throw LabError(ErrorKind::DimensionMismatch, "rotations act on 2-D profiles");
  }
  if (g.angle() == 0.0) {
    return u;
  }
  const std::size_t nx = grid.nx();
  const std::size_t ny = grid.ny();
  std::vector<double> out(grid.size(), 0.0);

  const int turns = quarter_turns(g.angle());
  if (turns >= 0 && centered_square(grid)) {
    // (Ru)(x) = u(R_{-theta} x); one quarter turn maps node (i,j) to source (j, n-1-i).
    const std::size_t n = nx;
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t si = i, sj = j;
        for (int t = 0; t < turns; ++t) {
          const std::size_t ti = sj;
          const std::size_t tj = n - 1 - si;
          si = ti;
          sj = tj;
        }
        out[grid.index(i, j)] = u[grid.index(si, sj)];
      }
    }
    return Profile(grid, std::move(out));
  }

  const double c = std::cos(g.angle());
  const double s = std::sin(g.angle());
  const auto& ax = grid.axis(0);
  const auto& ay = grid.axis(1);
  const double hx = ax.spacing();
  const double hy = ay.spacing();
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const double x = grid.x(i);
      const double y = grid.y(j);
      const double px = c * x + s * y;
      const double py = -s * x + c * y;
      const double fx = (px - ax.min) / hx;
      const double fy = (py - ay.min) / hy;
      if (fx < 0.0 || fy < 0.0 || fx > static_cast<double>(nx - 1) ||
          fy > static_cast<double>(ny - 1)) {
        continue;
      }
      auto ix = std::min(static_cast<std::size_t>(fx), nx - 2);
      auto iy = std::min(static_cast<std::size_t>(fy), ny - 2);
      const double wx = fx - static_cast<double>(ix);
      const double wy = fy - static_cast<double>(iy);
      out[grid.index(i, j)] =
          (1.0 - wy) * ((1.0 - wx) * u[grid.index(ix, iy)] + wx * u[grid.index(ix + 1, iy)]) +
          wy * ((1.0 - wx) * u[grid.index(ix, iy + 1)] + wx * u[grid.index(ix + 1, iy + 1)]);
    }
  }
  return Profile(grid, std::move(out));
}

Profile apply(const GroupElement& g, const Profile& u) {
  return std::visit([&](const auto& e) { return apply(e, u); }, g);
}

Translation compose(const Translation& a, const Translation& b) {
  return Translation{a.sigma + b.sigma};
}

Rotation2D compose(const Rotation2D& a, const Rotation2D& b) {
  return Rotation2D(a.angle() + b.angle());
}

Translation inverse(const Translation& g) { return Translation{-g.sigma}; }

Rotation2D inverse(const Rotation2D& g) {
  return g.angle() == 0.0 ? Rotation2D(0.0) : Rotation2D(kTwoPi - g.angle());
}

GroupElement compose(const GroupElement& g1, const GroupElement& g2) {
  if (g1.index() != g2.index()) {
    throw LabError(ErrorKind::GroupMismatch, "cannot compose a translation with a rotation");
  }
  if (const auto* t = std::get_if<Translation>(&g1)) {
    return compose(*t, std::get<Translation>(g2));
  }
  return compose(std::get<Rotation2D>(g1), std::get<Rotation2D>(g2));
}

GroupElement inverse(const GroupElement& g) {
  return std::visit([](const auto& e) -> GroupElement { return inverse(e); }, g);
}

}  // namespace monolab
