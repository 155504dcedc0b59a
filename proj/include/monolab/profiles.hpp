#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace monolab {

struct Axis {
  double min = 0.0;
  double max = 1.0;
  std::size_t n = 3;

  double spacing() const noexcept { return (max - min) / static_cast<double>(n - 1); }
  double coord(std::size_t i) const noexcept {
    return min + static_cast<double>(i) * spacing();
  }
  friend bool operator==(const Axis&, const Axis&) = default;
};

/// Uniform 1-D or 2-D tensor grid. Storage is row-major with x fastest:
/// index = j * nx + i.
class Grid {
 public:
  static Grid line(double xmin, double xmax, std::size_t n);
  static Grid box(double xmin, double xmax, std::size_t nx, double ymin, double ymax,
                  std::size_t ny);
  /// Square box [-half, half]^2 with n nodes per axis.
  static Grid square(double half, std::size_t n) { return box(-half, half, n, -half, half, n); }

  int dimension() const noexcept { return static_cast<int>(axes_.size()); }
  const Axis& axis(int d) const { return axes_.at(static_cast<std::size_t>(d)); }
  std::size_t nx() const noexcept { return axes_[0].n; }
  std::size_t ny() const noexcept { return axes_.size() > 1 ? axes_[1].n : 1; }
  std::size_t size() const noexcept { return nx() * ny(); }
  double h() const noexcept { return axes_[0].spacing(); }

  double x(std::size_t i) const noexcept { return axes_[0].coord(i); }
  double y(std::size_t j) const noexcept { return axes_[1].coord(j); }
  std::size_t index(std::size_t i, std::size_t j) const noexcept { return j * nx() + i; }
  /// Euclidean distance of node k from the origin.
  double radius(std::size_t k) const noexcept;
  bool on_boundary(std::size_t k) const noexcept;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  explicit Grid(std::vector<Axis> axes);
  std::vector<Axis> axes_;
};

/// A grid function: a point of the ordered state space.
class Profile {
 public:
  Profile(Grid grid, std::vector<double> values);
  static Profile constant(const Grid& grid, double value);
  template <class F>
  static Profile from_function_1d(const Grid& grid, F&& f) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.nx(); ++i) v[i] = f(grid.x(i));
    return Profile(grid, std::move(v));
  }
  template <class F>
  static Profile from_function_2d(const Grid& grid, F&& f) {
    std::vector<double> v(grid.size());
    for (std::size_t j = 0; j < grid.ny(); ++j)
      for (std::size_t i = 0; i < grid.nx(); ++i) v[grid.index(i, j)] = f(grid.x(i), grid.y(j));
    return Profile(grid, std::move(v));
  }

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }
  double& operator[](std::size_t k) { return values_[k]; }

  /// Throws NonFiniteState if any value is NaN or infinite.
  void require_finite() const;

  friend bool operator==(const Profile&, const Profile&) = default;

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// Nonempty finite family of profiles on one grid.
class ProfileSet {
 public:
  explicit ProfileSet(std::vector<Profile> members);
  const std::vector<Profile>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  const Grid& grid() const { return members_.front().grid(); }

 private:
  std::vector<Profile> members_;
};

bool leq(const Profile& u, const Profile& v, double tol = 0.0);
Profile wedge(const Profile& u, const Profile& v);
double sup_distance(const Profile& u, const Profile& v);
double sup_norm(const Profile& u);
/// Pointwise u + v and u - v.
Profile add(const Profile& u, const Profile& v);
Profile subtract(const Profile& u, const Profile& v);
/// max{sup_a d(a,B), sup_b d(b,A)} with d = sup_distance.
double hausdorff(const ProfileSet& a, const ProfileSet& b);

/// CSV with one node per row: coordinates then value.
void write_csv(std::ostream& os, const Profile& u);
Profile read_csv(std::istream& is);

/// Binary layout, little-endian: "MLPF", u32 version, u32 dims, per axis
/// (f64 min, f64 max, u64 n), then size() f64 values.
void write_binary(std::ostream& os, const Profile& u);
Profile read_binary(std::istream& is);
void save_binary(const std::filesystem::path& path, const Profile& u);
Profile load_binary(const std::filesystem::path& path);

}  // namespace monolab
