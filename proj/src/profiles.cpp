#include "monolab/profiles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "monolab/error.hpp"

namespace monolab {

namespace {

void require_same_grid(const Profile& u, const Profile& v) {
  if (!(u.grid() == v.grid())) {
    throw LabError(ErrorKind::GridMismatch, "profiles live on different grids");
  }
}

template <class T>
void put_le(std::ostream& os, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(std::begin(bytes), std::end(bytes));
  }
  os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  unsigned char bytes[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw LabError(ErrorKind::IoError, "truncated binary profile");
  }
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(std::begin(bytes), std::end(bytes));
  }
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

constexpr char kMagic[4] = {'M', 'L', 'P', 'F'};

}  // namespace

Grid::Grid(std::vector<Axis> axes) : axes_(std::move(axes)) {
  for (const auto& a : axes_) {
    if (a.n < 3) {
      throw LabError(ErrorKind::InvalidArgument, "grid axes need at least 3 nodes");
    }
    if (!(a.max > a.min) || !std::isfinite(a.min) || !std::isfinite(a.max)) {
      throw LabError(ErrorKind::InvalidArgument, "grid extent must be finite and nonempty");
    }
  }
}

Grid Grid::line(double xmin, double xmax, std::size_t n) { return Grid({Axis{xmin, xmax, n}}); }

Grid Grid::box(double xmin, double xmax, std::size_t nx, double ymin, double ymax,
               std::size_t ny) {
  return Grid({Axis{xmin, xmax, nx}, Axis{ymin, ymax, ny}});
}

double Grid::radius(std::size_t k) const noexcept {
  if (dimension() == 1) {
    return std::abs(x(k));
  }
  return std::hypot(x(k % nx()), y(k / nx()));
}

bool Grid::on_boundary(std::size_t k) const noexcept {
  const std::size_t i = k % nx();
  if (i == 0 || i + 1 == nx()) {
    return true;
  }
  if (dimension() == 2) {
    const std::size_t j = k / nx();
    return j == 0 || j + 1 == ny();
  }
  return false;
}

Profile::Profile(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw LabError(ErrorKind::GridMismatch, "value count does not match grid size");
  }
  require_finite();
}

Profile Profile::constant(const Grid& grid, double value) {
  return Profile(grid, std::vector<double>(grid.size(), value));
}

void Profile::require_finite() const {
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) {
      throw LabError(ErrorKind::NonFiniteState, "non-finite value at node " + std::to_string(k));
    }
  }
}

ProfileSet::ProfileSet(std::vector<Profile> members) : members_(std::move(members)) {
  if (members_.empty()) {
    throw LabError(ErrorKind::InvalidArgument, "profile set must be nonempty");
  }
  for (const auto& m : members_) {
    require_same_grid(members_.front(), m);
  }
}

bool leq(const Profile& u, const Profile& v, double tol) {
  require_same_grid(u, v);
  const auto a = u.values();
  const auto b = v.values();
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!(a[k] <= b[k] + tol)) {
      return false;
    }
  }
  return true;
}

Profile wedge(const Profile& u, const Profile& v) {
  require_same_grid(u, v);
  std::vector<double> out(u.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = std::min(u[k], v[k]);
  }
  return Profile(u.grid(), std::move(out));
}

double sup_distance(const Profile& u, const Profile& v) {
  require_same_grid(u, v);
  double d = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    d = std::max(d, std::abs(u[k] - v[k]));
  }
  return d;
}

double sup_norm(const Profile& u) {
  double d = 0.0;
  for (double x : u.values()) {
    d = std::max(d, std::abs(x));
  }
  return d;
}

Profile add(const Profile& u, const Profile& v) {
  require_same_grid(u, v);
  std::vector<double> out(u.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = u[k] + v[k];
  return Profile(u.grid(), std::move(out));
}

Profile subtract(const Profile& u, const Profile& v) {
  require_same_grid(u, v);
  std::vector<double> out(u.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = u[k] - v[k];
  return Profile(u.grid(), std::move(out));
}

double hausdorff(const ProfileSet& a, const ProfileSet& b) {
  require_same_grid(a.members().front(), b.members().front());
  auto directed = [](const ProfileSet& from, const ProfileSet& to) {
    double worst = 0.0;
    for (const auto& p : from.members()) {
      double nearest = std::numeric_limits<double>::infinity();
      for (const auto& q : to.members()) {
        nearest = std::min(nearest, sup_distance(p, q));
      }
      worst = std::max(worst, nearest);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

void write_csv(std::ostream& os, const Profile& u) {
  const auto& g = u.grid();
  os << std::setprecision(17);
  if (g.dimension() == 1) {
    os << "x,value\n";
    for (std::size_t i = 0; i < g.nx(); ++i) {
      os << g.x(i) << ',' << u[i] << '\n';
    }
    return;
  }
  os << "x,y,value\n";
  for (std::size_t j = 0; j < g.ny(); ++j) {
    for (std::size_t i = 0; i < g.nx(); ++i) {
      os << g.x(i) << ',' << g.y(j) << ',' << u[g.index(i, j)] << '\n';
    }
  }
}

Profile read_csv(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) {
    throw LabError(ErrorKind::IoError, "empty profile CSV");
  }
  const bool two_d = header.rfind("x,y,", 0) == 0;
  std::vector<double> xs, ys, vals;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    double x = 0, y = 0, v = 0;
    char comma = 0;
    ls >> x >> comma;
    if (two_d) ls >> y >> comma;
    ls >> v;
    if (!ls) throw LabError(ErrorKind::IoError, "malformed CSV row: " + line);
    xs.push_back(x);
    ys.push_back(y);
    vals.push_back(v);
  }
  if (vals.size() < 3) throw LabError(ErrorKind::IoError, "too few CSV rows");
  if (!two_d) {
    return Profile(Grid::line(xs.front(), xs.back(), xs.size()), std::move(vals));
  }
  std::size_t nx = 1;
  while (nx < ys.size() && ys[nx] == ys[0]) ++nx;
  const std::size_t ny = vals.size() / nx;
  return Profile(Grid::box(xs.front(), xs[nx - 1], nx, ys.front(), ys.back(), ny),
                 std::move(vals));
}

void write_binary(std::ostream& os, const Profile& u) {
  const auto& g = u.grid();
  os.write(kMagic, 4);
  put_le<std::uint32_t>(os, 1);
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(g.dimension()));
  for (int d = 0; d < g.dimension(); ++d) {
    put_le<double>(os, g.axis(d).min);
    put_le<double>(os, g.axis(d).max);
    put_le<std::uint64_t>(os, g.axis(d).n);
  }
  for (double v : u.values()) {
    put_le<double>(os, v);
  }
}

Profile read_binary(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || !std::equal(magic, magic + 4, kMagic)) {
    throw LabError(ErrorKind::IoError, "not a binary profile (bad magic)");
  }
  if (get_le<std::uint32_t>(is) != 1) {
    throw LabError(ErrorKind::IoError, "unsupported binary profile version");
  }
  const auto dims = get_le<std::uint32_t>(is);
  if (dims != 1 && dims != 2) {
    throw LabError(ErrorKind::IoError, "binary profile dimension must be 1 or 2");
  }
  std::vector<Axis> axes(dims);
  for (auto& a : axes) {
    a.min = get_le<double>(is);
    a.max = get_le<double>(is);
    a.n = static_cast<std::size_t>(get_le<std::uint64_t>(is));
  }
  Grid g = dims == 1 ? Grid::line(axes[0].min, axes[0].max, axes[0].n)
                     : Grid::box(axes[0].min, axes[0].max, axes[0].n, axes[1].min, axes[1].max,
                                 axes[1].n);
  std::vector<double> vals(g.size());
  for (double& v : vals) {
    v = get_le<double>(is);
  }
  return Profile(std::move(g), std::move(vals));
}

void save_binary(const std::filesystem::path& path, const Profile& u) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw LabError(ErrorKind::IoError, "cannot open " + path.string());
  write_binary(os, u);
}

Profile load_binary(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw LabError(ErrorKind::IoError, "cannot open " + path.string());
  return read_binary(is);
}

}  // namespace monolab
