#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace monolab {

/// Factored M-matrix with rows  diag_i x_i - lower_i x_{i-1} - upper_i x_{i+1} = rhs_i,
/// lower_i, upper_i >= 0 and diag_i >= lower_i + upper_i. Elimination is written with
/// nonnegative multipliers only, so the floating-point solve is monotone in rhs.
class MonotoneTridiagonal {
 public:
  MonotoneTridiagonal() = default;
  MonotoneTridiagonal(std::span<const double> lower, std::span<const double> diag,
                      std::span<const double> upper);

  /// Dirichlet rows at both ends, (1 + 2r) x_i - r x_{i-1} - r x_{i+1} inside.
  static MonotoneTridiagonal backward_euler(std::size_t n, double r);
  /// Same as backward_euler but rows flagged in pinned become identity rows.
  static MonotoneTridiagonal backward_euler_masked(std::size_t n, double r,
                                                   std::span<const unsigned char> pinned);

  std::size_t size() const noexcept { return pivot_.size(); }

  /// In-place solve; x holds rhs on entry. Strided access for column sweeps.
  void solve(double* x, std::size_t stride = 1) const;

 private:
  std::vector<double> lower_;
  std::vector<double> pivot_;
  std::vector<double> gamma_;  // upper_i / pivot_i
};

}  // namespace monolab
