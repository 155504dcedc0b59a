#include "monolab/tridiagonal.hpp"

#include "monolab/error.hpp"

namespace monolab {

MonotoneTridiagonal::MonotoneTridiagonal(std::span<const double> lower,
                                         std::span<const double> diag,
                                         std::span<const double> upper)
    : lower_(lower.begin(), lower.end()), pivot_(diag.size()), gamma_(diag.size()) {
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n || n == 0) {
    throw LabError(ErrorKind::InvalidArgument, "tridiagonal bands must have equal nonzero size");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (lower[i] < 0.0 || upper[i] < 0.0 || diag[i] < lower[i] + upper[i] || !(diag[i] > 0.0)) {
      throw LabError(ErrorKind::InvalidArgument, "tridiagonal system is not a diagonally dominant M-matrix");
    }
    const double m = i == 0 ? diag[0] : diag[i] - lower[i] * gamma_[i - 1];
    pivot_[i] = m;
    gamma_[i] = upper[i] / m;
  }
}

MonotoneTridiagonal MonotoneTridiagonal::backward_euler(std::size_t n, double r) {
  std::vector<double> lo(n, r), di(n, 1.0 + 2.0 * r), up(n, r);
  lo[0] = up[0] = 0.0;
  lo[n - 1] = up[n - 1] = 0.0;
  di[0] = di[n - 1] = 1.0;
  return MonotoneTridiagonal(lo, di, up);
}

MonotoneTridiagonal MonotoneTridiagonal::backward_euler_masked(
    std::size_t n, double r, std::span<const unsigned char> pinned) {
  std::vector<double> lo(n, r), di(n, 1.0 + 2.0 * r), up(n, r);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0 || i + 1 == n || pinned[i]) {
      lo[i] = up[i] = 0.0;
      di[i] = 1.0;
    }
  }
  return MonotoneTridiagonal(lo, di, up);
}

void MonotoneTridiagonal::solve(double* x, std::size_t stride) const {
  const std::size_t n = pivot_.size();
  x[0] = x[0] / pivot_[0];
  for (std::size_t i = 1; i < n; ++i) {
    double& xi = x[i * stride];
    xi = (xi + lower_[i] * x[(i - 1) * stride]) / pivot_[i];
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    x[i * stride] += gamma_[i] * x[(i + 1) * stride];
  }
}

}  // namespace monolab
