#pragma once

#include <variant>

#include "monolab/profiles.hpp"

namespace monolab {

/// a_sigma: u(.) -> u(. - sigma) on 1-D profiles.
struct Translation {
  double sigma = 0.0;
  friend bool operator==(const Translation&, const Translation&) = default;
};

/// Planar rotation u(x) -> u(R_{-angle} x); angle kept in [0, 2 pi).
class Rotation2D {
 public:
  Rotation2D() = default;
  explicit Rotation2D(double angle);
  double angle() const noexcept { return angle_; }
  friend bool operator==(const Rotation2D&, const Rotation2D&) = default;

 private:
  double angle_ = 0.0;
};

using GroupElement = std::variant<Translation, Rotation2D>;

/// Linear interpolation with constant extension by edge values.
Profile apply(const Translation& g, const Profile& u);
/// Bilinear interpolation; queries outside the box read 0. Multiples of pi/2 on a
/// square grid centered at the origin are exact index permutations.
Profile apply(const Rotation2D& g, const Profile& u);
Profile apply(const GroupElement& g, const Profile& u);

GroupElement compose(const GroupElement& g1, const GroupElement& g2);
GroupElement inverse(const GroupElement& g);
Translation compose(const Translation& a, const Translation& b);
Rotation2D compose(const Rotation2D& a, const Rotation2D& b);
Translation inverse(const Translation& g);
Rotation2D inverse(const Rotation2D& g);

}  // namespace monolab
