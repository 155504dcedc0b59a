#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace monolab {

/// Angular frequencies (rad / unit time) generating the base torus rotation.
class FrequencyBasis {
 public:
  static constexpr std::int64_t kIndependenceBound = 1'000'000;
  static constexpr double kIndependenceTolerance = 1e-9;

  explicit FrequencyBasis(std::vector<double> omegas);

  std::size_t size() const noexcept { return omegas_.size(); }
  const std::vector<double>& omegas() const noexcept { return omegas_; }
  double operator[](std::size_t j) const { return omegas_[j]; }

  /// True when no nonzero integer vector |n_j| <= kIndependenceBound has
  /// |sum n_j omega_j| < kIndependenceTolerance. For m >= 3 the per-axis
  /// bound is shrunk so the enumeration stays below ~2e7 candidates.
  bool rationally_independent() const noexcept { return independent_; }

  friend bool operator==(const FrequencyBasis& a, const FrequencyBasis& b) {
    return a.omegas_ == b.omegas_;
  }

 private:
  std::vector<double> omegas_;
  bool independent_ = false;
};

/// A point of the hull, parameterized as a phase on the m-torus [0,1)^m.
class TorusPhase {
 public:
  TorusPhase() = default;
  explicit TorusPhase(std::vector<double> theta);
  static TorusPhase zero(std::size_t m) { return TorusPhase(std::vector<double>(m, 0.0)); }

  std::size_t size() const noexcept { return theta_.size(); }
  const std::vector<double>& theta() const noexcept { return theta_; }
  double operator[](std::size_t j) const { return theta_[j]; }

  friend bool operator==(const TorusPhase&, const TorusPhase&) = default;

 private:
  std::vector<double> theta_;
};

/// Wraps x into [0,1).
double wrap_unit(double x) noexcept;

/// theta + t * omega / (2 pi), componentwise mod 1.
TorusPhase advance_phase(const TorusPhase& phase, const FrequencyBasis& basis, double t);

/// Max over components of the circular distance on [0,1).
double torus_distance(const TorusPhase& a, const TorusPhase& b);

using MultiIndex = std::vector<std::int32_t>;

/// Finite real Fourier sum s(t) = sum_k a_k exp(i <k, omega> t).
/// Stored modes obey a_{-k} = conj(a_k).
class QPSignal {
 public:
  explicit QPSignal(FrequencyBasis basis);
  QPSignal(FrequencyBasis basis, std::map<MultiIndex, std::complex<double>> modes);

  static QPSignal constant(FrequencyBasis basis, double value);
  /// Adds c * cos(<k,omega> t) + s * sin(<k,omega> t); k must be nonzero.
  QPSignal& add_trig(const MultiIndex& k, double cos_amp, double sin_amp);
  QPSignal& add_constant(double value);

  const FrequencyBasis& basis() const noexcept { return basis_; }
  const std::map<MultiIndex, std::complex<double>>& modes() const noexcept { return modes_; }

  /// Full complex sum at hull phase theta and time t; the imaginary part is roundoff.
  std::complex<double> evaluate_complex(const TorusPhase& phase, double t) const;

  /// Sum of |a_k|, an upper bound for |s|.
  double amplitude_bound() const noexcept;

  /// Frequencies <k, omega> of the nonzero modes.
  std::vector<double> spectrum() const;

 private:
  void check_reality() const;

  FrequencyBasis basis_;
  std::map<MultiIndex, std::complex<double>> modes_;
};

/// Re sum_k a_k exp(i(<k,omega> t + 2 pi <k,theta>)).
double evaluate(const QPSignal& signal, const TorusPhase& phase, double t);

struct ModuleContainment {
  bool contained = false;
  /// Nearest combination lies in [1e-9, 1e-6): the search bound is probably too small.
  bool bound_inconclusive = false;
  /// Worst residual over the candidates.
  double residual = 0.0;
};

/// Decides M(candidate) subset of M(container) by bounded integer search.
ModuleContainment module_contains(const FrequencyBasis& container,
                                  std::span<const double> candidate,
                                  std::int64_t search_bound);

/// Times k*dt in (0, horizon] where the advanced phase is within eps of the start.
/// Throws EmptyReturnSet if none.
std::vector<double> return_times(const TorusPhase& phase, const FrequencyBasis& basis,
                                 double eps, double horizon, double dt);

void to_json(nlohmann::json& j, const QPSignal& s);
/// Accepts the serialized mode list or the hand-written form
/// {"omegas": [...], "constant": c, "terms": [{"k": [...], "cos": ..., "sin": ...}]}.
QPSignal qp_signal_from_json(const nlohmann::json& j);

}  // namespace monolab
