#include "monolab/quasi_periodic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <nlohmann/json.hpp>

#include "monolab/error.hpp"

namespace monolab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Smallest |target - sum n_j omega_j| over |n_j| <= bound. The last coordinate is
// chosen by rounding, the others are enumerated.
double nearest_combination(const std::vector<double>& omegas, double target,
                           std::int64_t bound, bool forbid_zero) {
  const std::size_t m = omegas.size();
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::int64_t> n(m, -bound);

  auto last_coord = [&](double rest, std::int64_t& chosen) {
    const double raw = std::round(rest / omegas[m - 1]);
    chosen = static_cast<std::int64_t>(std::clamp(raw, static_cast<double>(-bound),
                                                  static_cast<double>(bound)));
    return std::abs(rest - static_cast<double>(chosen) * omegas[m - 1]);
  };

  if (m == 1) {
    std::int64_t k = 0;
    double r = last_coord(target, k);
    if (forbid_zero && k == 0) {
      r = std::abs(target - omegas[0]);
    }
    return r;
  }

  while (true) {
    double partial = 0.0;
    bool all_zero = true;
    for (std::size_t j = 0; j + 1 < m; ++j) {
      partial += static_cast<double>(n[j]) * omegas[j];
      all_zero = all_zero && n[j] == 0;
    }
    std::int64_t k = 0;
    double r = last_coord(target - partial, k);
    if (forbid_zero && all_zero && k == 0) {
      // Exclude the trivial relation; try the nearest nonzero multiple instead.
      r = std::abs(target - omegas[m - 1]);
    }
    best = std::min(best, r);

    std::size_t j = 0;
    while (j + 1 < m) {
      if (++n[j] <= bound) {
        break;
      }
      n[j] = -bound;
      ++j;
    }
    if (j + 1 == m) {
      break;
    }
  }
  return best;
}

std::int64_t enumeration_bound(std::size_t m, std::int64_t requested) {
  if (m <= 2) {
    return requested;
  }
  // Keep (2B+1)^(m-1) under ~2e7.
  const double cap = std::pow(2e7, 1.0 / static_cast<double>(m - 1));
  return std::min<std::int64_t>(requested, static_cast<std::int64_t>((cap - 1.0) / 2.0));
}

}  // namespace

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::GroupMismatch: return "GroupMismatch";
    case ErrorKind::CFLViolation: return "CFLViolation";
    case ErrorKind::NonFiniteState: return "NonFiniteState";
    case ErrorKind::EmptyReturnSet: return "EmptyReturnSet";
    case ErrorKind::NoCrossing: return "NoCrossing";
    case ErrorKind::NotStable: return "NotStable";
    case ErrorKind::Undecided: return "Undecided";
    case ErrorKind::SymmetryFlagMissing: return "SymmetryFlagMissing";
    case ErrorKind::BracketFailure: return "BracketFailure";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::TrappingViolated: return "TrappingViolated";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

FrequencyBasis::FrequencyBasis(std::vector<double> omegas) : omegas_(std::move(omegas)) {
  if (omegas_.empty()) {
    throw LabError(ErrorKind::InvalidArgument, "frequency basis needs at least one frequency");
  }
  for (std::size_t i = 0; i < omegas_.size(); ++i) {
    if (!(omegas_[i] > 0.0) || !std::isfinite(omegas_[i])) {
      throw LabError(ErrorKind::InvalidArgument, "frequencies must be finite and positive");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (omegas_[i] == omegas_[j]) {
        throw LabError(ErrorKind::InvalidArgument, "frequencies must be pairwise distinct");
      }
    }
  }
  if (omegas_.size() == 1) {
    independent_ = true;
  } else {
    const auto bound = enumeration_bound(omegas_.size(), kIndependenceBound);
    // A relation sum n_j w_j = 0 with n != 0 is the same as w_last being nearly an
    // integer combination of the others with n_last != 0. Searching target 0 with the
    // zero vector excluded covers every case.
    independent_ = nearest_combination(omegas_, 0.0, bound, true) >= kIndependenceTolerance;
  }
}

TorusPhase::TorusPhase(std::vector<double> theta) : theta_(std::move(theta)) {
  for (double& x : theta_) {
    if (!std::isfinite(x)) {
      throw LabError(ErrorKind::InvalidArgument, "torus phase must be finite");
    }
    x = wrap_unit(x);
  }
}

double wrap_unit(double x) noexcept {
  double r = x - std::floor(x);
  // floor can leave r == 1 for tiny negative x.
  return r >= 1.0 ? 0.0 : r;
}

TorusPhase advance_phase(const TorusPhase& phase, const FrequencyBasis& basis, double t) {
  if (phase.size() != basis.size()) {
    throw LabError(ErrorKind::DimensionMismatch, "phase and basis sizes differ");
  }
  std::vector<double> out(phase.size());
  for (std::size_t j = 0; j < phase.size(); ++j) {
    const double shift = t * basis[j] / kTwoPi;
    out[j] = wrap_unit(phase[j] + (shift - std::floor(shift)));
  }
  return TorusPhase(std::move(out));
}

double torus_distance(const TorusPhase& a, const TorusPhase& b) {
  if (a.size() != b.size()) {
    throw LabError(ErrorKind::DimensionMismatch, "torus phases of different dimension");
  }
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double diff = std::abs(a[j] - b[j]);
    d = std::max(d, std::min(diff, 1.0 - diff));
  }
  return d;
}

QPSignal::QPSignal(FrequencyBasis basis) : basis_(std::move(basis)) {}

QPSignal::QPSignal(FrequencyBasis basis, std::map<MultiIndex, std::complex<double>> modes)
    : basis_(std::move(basis)), modes_(std::move(modes)) {
  for (const auto& [k, a] : modes_) {
    if (k.size() != basis_.size()) {
      throw LabError(ErrorKind::InvalidArgument, "mode index length differs from basis size");
    }
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw LabError(ErrorKind::InvalidArgument, "mode amplitude not finite");
    }
  }
  check_reality();
}

QPSignal QPSignal::constant(FrequencyBasis basis, double value) {
  QPSignal s(std::move(basis));
  s.add_constant(value);
  return s;
}

QPSignal& QPSignal::add_constant(double value) {
  modes_[MultiIndex(basis_.size(), 0)] += value;
  return *this;
}

QPSignal& QPSignal::add_trig(const MultiIndex& k, double cos_amp, double sin_amp) {
  if (k.size() != basis_.size()) {
    throw LabError(ErrorKind::InvalidArgument, "mode index length differs from basis size");
  }
  if (std::all_of(k.begin(), k.end(), [](auto v) { return v == 0; })) {
    throw LabError(ErrorKind::InvalidArgument, "trig term needs a nonzero index");
  }
  // c cos(x) + s sin(x) = (c - i s)/2 e^{ix} + (c + i s)/2 e^{-ix}
  MultiIndex neg(k.size());
  std::transform(k.begin(), k.end(), neg.begin(), [](auto v) { return -v; });
  modes_[k] += std::complex<double>(cos_amp / 2.0, -sin_amp / 2.0);
  modes_[neg] += std::complex<double>(cos_amp / 2.0, sin_amp / 2.0);
  return *this;
}

void QPSignal::check_reality() const {
  for (const auto& [k, a] : modes_) {
    MultiIndex neg(k.size());
    std::transform(k.begin(), k.end(), neg.begin(), [](auto v) { return -v; });
    const auto it = modes_.find(neg);
    const std::complex<double> partner = it == modes_.end() ? 0.0 : it->second;
    if (std::abs(partner - std::conj(a)) > 1e-14 * (1.0 + std::abs(a))) {
      throw LabError(ErrorKind::InvalidArgument,
                     "signal is not real: a_{-k} must equal conj(a_k)");
    }
  }
}

std::complex<double> QPSignal::evaluate_complex(const TorusPhase& phase, double t) const {
  if (phase.size() != basis_.size()) {
    throw LabError(ErrorKind::DimensionMismatch, "phase and signal basis sizes differ");
  }
  std::complex<double> sum = 0.0;
  for (const auto& [k, a] : modes_) {
    double arg = 0.0;
    for (std::size_t j = 0; j < k.size(); ++j) {
      arg += k[j] * (basis_[j] * t + kTwoPi * phase[j]);
    }
    sum += a * std::complex<double>(std::cos(arg), std::sin(arg));
  }
  return sum;
}

double QPSignal::amplitude_bound() const noexcept {
  double s = 0.0;
  for (const auto& [k, a] : modes_) {
    s += std::abs(a);
  }
  return s;
}

std::vector<double> QPSignal::spectrum() const {
  std::vector<double> out;
  for (const auto& [k, a] : modes_) {
    if (a == std::complex<double>(0.0)) {
      continue;
    }
    double f = 0.0;
    for (std::size_t j = 0; j < k.size(); ++j) {
      f += k[j] * basis_[j];
    }
    out.push_back(f);
  }
  return out;
}

double evaluate(const QPSignal& signal, const TorusPhase& phase, double t) {
  return signal.evaluate_complex(phase, t).real();
}

ModuleContainment module_contains(const FrequencyBasis& container,
                                  std::span<const double> candidate,
                                  std::int64_t search_bound) {
  if (search_bound < 1) {
    throw LabError(ErrorKind::InvalidArgument, "search bound must be >= 1");
  }
  const auto bound = enumeration_bound(container.size(), search_bound);
  ModuleContainment result;
  result.contained = true;
  for (double c : candidate) {
    const double r = nearest_combination(container.omegas(), c, bound, false);
    result.residual = std::max(result.residual, r);
  }
  result.contained = result.residual < 1e-9;
  result.bound_inconclusive = !result.contained && result.residual < 1e-6;
  return result;
}

std::vector<double> return_times(const TorusPhase& phase, const FrequencyBasis& basis,
                                 double eps, double horizon, double dt) {
  if (!(eps > 0.0) || !(dt > 0.0) || !(horizon >= 0.0)) {
    throw LabError(ErrorKind::InvalidArgument, "return_times needs eps > 0, dt > 0, horizon >= 0");
  }
  std::vector<double> out;
  const auto steps = static_cast<std::int64_t>(std::floor(horizon / dt + 1e-9));
  for (std::int64_t k = 1; k <= steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    if (torus_distance(advance_phase(phase, basis, t), phase) < eps) {
      out.push_back(t);
    }
  }
  if (out.empty()) {
    throw LabError(ErrorKind::EmptyReturnSet,
                   "no return within horizon; increase horizon or eps");
  }
  return out;
}

void to_json(nlohmann::json& j, const QPSignal& s) {
  j = nlohmann::json::object();
  j["omegas"] = s.basis().omegas();
  auto modes = nlohmann::json::array();
  for (const auto& [k, a] : s.modes()) {
    modes.push_back({{"k", k}, {"re", a.real()}, {"im", a.imag()}});
  }
  j["modes"] = modes;
}

QPSignal qp_signal_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("omegas") || !(j.contains("modes") || j.contains("terms"))) {
    throw LabError(ErrorKind::ConfigInvalid, "signal needs \"omegas\" and \"modes\" or \"terms\"");
  }
  FrequencyBasis basis(j.at("omegas").get<std::vector<double>>());
  if (!j.contains("modes")) {
    QPSignal s = QPSignal::constant(basis, j.value("constant", 0.0));
    for (const auto& t : j.at("terms")) {
      s.add_trig(t.at("k").get<MultiIndex>(), t.value("cos", 0.0), t.value("sin", 0.0));
    }
    return s;
  }
  std::map<MultiIndex, std::complex<double>> modes;
  for (const auto& m : j.at("modes")) {
    auto k = m.at("k").get<MultiIndex>();
    const double re = m.value("re", 0.0);
    const double im = m.value("im", 0.0);
    modes[k] += std::complex<double>(re, im);
  }
  return QPSignal(std::move(basis), std::move(modes));
}

}  // namespace monolab
