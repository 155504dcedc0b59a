#include "monolab/reaction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "monolab/error.hpp"

namespace monolab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

FrequencyBasis basis_of(const ReactionForm& form) {
  return std::visit(Overloaded{
                        [](const BistableForm& f) { return f.a.basis(); },
                        [](const RadialLogisticForm& f) { return f.b.basis(); },
                        [](const PolynomialForm& f) {
                          if (f.coeffs.empty()) {
                            throw LabError(ErrorKind::InvalidArgument,
                                           "polynomial reaction needs at least one coefficient");
                          }
                          return f.coeffs.front().basis();
                        },
                    },
                    form);
}

double require_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw LabError(ErrorKind::ConfigInvalid, std::string("missing numeric field \"") + key + "\"");
  }
  return j.at(key).get<double>();
}

}  // namespace

ReactionTerm::ReactionTerm(ReactionForm form, HypothesisParams params,
                           std::optional<bool> g_symmetric, std::optional<bool> zero_at_zero)
    : form_(std::move(form)), params_(params), basis_(basis_of(form_)) {
  std::visit(Overloaded{
                 [&](const BistableForm&) {},
                 [&](const RadialLogisticForm& f) {
                   if (!(f.r_inner >= 0.0) || !(f.r_outer > f.r_inner)) {
                     throw LabError(ErrorKind::InvalidArgument,
                                    "radial reaction needs 0 <= r_inner < r_outer");
                   }
                 },
                 [&](const PolynomialForm& f) {
                   for (const auto& c : f.coeffs) {
                     if (!(c.basis() == basis_)) {
                       throw LabError(ErrorKind::InvalidArgument,
                                      "polynomial coefficients must share one frequency basis");
                     }
                   }
                 },
             },
             form_);

  g_symmetric_ = g_symmetric.value_or(true);
  bool structural_zero = std::visit(
      Overloaded{
          [](const BistableForm&) { return true; },
          [](const RadialLogisticForm&) { return true; },
          [](const PolynomialForm& f) { return f.coeffs.front().modes().empty(); },
      },
      form_);
  zero_at_zero_ = zero_at_zero.value_or(structural_zero);
}

ReactionTerm ReactionTerm::zero(const FrequencyBasis& basis) {
  return ReactionTerm(PolynomialForm{{QPSignal(basis)}});
}

ReactionTerm ReactionTerm::linear_decay(const FrequencyBasis& basis, double rate) {
  HypothesisParams p;
  p.alpha = rate;
  p.mu = rate;
  return ReactionTerm(PolynomialForm{{QPSignal(basis), QPSignal::constant(basis, -rate)}}, p);
}

std::string ReactionTerm::form_name() const {
  return std::visit(Overloaded{
                        [](const BistableForm&) { return std::string("bistable"); },
                        [](const RadialLogisticForm&) { return std::string("radial_logistic"); },
                        [](const PolynomialForm&) { return std::string("polynomial"); },
                    },
                    form_);
}

bool ReactionTerm::x_independent() const noexcept {
  return !std::holds_alternative<RadialLogisticForm>(form_);
}

double ReactionTerm::weight(double radius) const {
  if (const auto* f = std::get_if<RadialLogisticForm>(&form_)) {
    if (radius <= f->r_inner) {
      return 1.0;
    }
    if (radius >= f->r_outer) {
      return 0.0;
    }
    const double s = (radius - f->r_inner) / (f->r_outer - f->r_inner);
    const double c = std::cos(0.5 * std::numbers::pi * s);
    return c * c;
  }
  return 1.0;
}

ReactionSnapshot ReactionTerm::snapshot(const TorusPhase& phase) const {
  ReactionSnapshot s;
  std::visit(Overloaded{
                 [&](const BistableForm& f) { s.factors = {evaluate(f.a, phase, 0.0)}; },
                 [&](const RadialLogisticForm& f) { s.factors = {evaluate(f.b, phase, 0.0)}; },
                 [&](const PolynomialForm& f) {
                   s.factors.reserve(f.coeffs.size());
                   for (const auto& c : f.coeffs) {
                     s.factors.push_back(evaluate(c, phase, 0.0));
                   }
                 },
             },
             form_);
  return s;
}

double ReactionTerm::value(const ReactionSnapshot& s, double weight, double u) const {
  return std::visit(Overloaded{
                        [&](const BistableForm&) { return u * (1.0 - u) * (u - s.factors[0]); },
                        [&](const RadialLogisticForm& f) {
                          return u * (s.factors[0] * weight - f.alpha * (1.0 - weight) - u * u);
                        },
                        [&](const PolynomialForm&) {
                          double acc = 0.0;
                          for (auto it = s.factors.rbegin(); it != s.factors.rend(); ++it) {
                            acc = acc * u + *it;
                          }
                          return acc;
                        },
                    },
                    form_);
}

double ReactionTerm::du(const ReactionSnapshot& s, double weight, double u) const {
  return std::visit(Overloaded{
                        [&](const BistableForm&) {
                          const double a = s.factors[0];
                          return -3.0 * u * u + 2.0 * (1.0 + a) * u - a;
                        },
                        [&](const RadialLogisticForm& f) {
                          return s.factors[0] * weight - f.alpha * (1.0 - weight) - 3.0 * u * u;
                        },
                        [&](const PolynomialForm&) {
                          double acc = 0.0;
                          for (std::size_t j = s.factors.size(); j-- > 1;) {
                            acc = acc * u + static_cast<double>(j) * s.factors[j];
                          }
                          return acc;
                        },
                    },
                    form_);
}

double ReactionTerm::sampled_lipschitz(double lo, double hi, double max_radius) const {
  double worst = 0.0;
  const auto phases = sample_phases(basis_.size(), 64);
  const int nu = 201;
  const int nr = x_independent() ? 1 : 64;
  for (const auto& ph : phases) {
    const auto snap = snapshot(ph);
    for (int ir = 0; ir < nr; ++ir) {
      const double r = nr == 1 ? 0.0 : max_radius * ir / (nr - 1);
      const double w = weight(r);
      for (int iu = 0; iu < nu; ++iu) {
        const double u = lo + (hi - lo) * iu / (nu - 1);
        worst = std::max(worst, -du(snap, w, u));
      }
    }
  }
  return worst;
}

std::vector<TorusPhase> sample_phases(std::size_t m, int count) {
  // Additive recurrence with square roots of primes as increments.
  static constexpr double kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
  std::vector<TorusPhase> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    std::vector<double> th(m);
    for (std::size_t j = 0; j < m; ++j) {
      th[j] = wrap_unit(i * std::sqrt(kPrimes[j % 10]));
    }
    out.emplace_back(std::move(th));
  }
  return out;
}

std::string HypothesisWitness::describe() const {
  std::ostringstream os;
  os << hypothesis << " violated at phase (";
  for (std::size_t j = 0; j < phase.size(); ++j) {
    os << (j ? ", " : "") << phase[j];
  }
  os << "), |x|=" << radius << ", u=" << u << ": value " << value;
  return os.str();
}

std::optional<HypothesisWitness> find_zero_violation(const ReactionTerm& r, double max_radius,
                                                     int samples) {
  const int nr = r.x_independent() ? 1 : 32;
  for (const auto& ph : sample_phases(r.basis().size(), samples)) {
    for (int ir = 0; ir < nr; ++ir) {
      const double rad = nr == 1 ? 0.0 : max_radius * ir / (nr - 1);
      const double v = r.value(ph, rad, 0.0);
      if (v != 0.0) {
        return HypothesisWitness{"(f2) f(t,x,0)=0", ph, rad, 0.0, v};
      }
    }
  }
  return std::nullopt;
}

std::optional<HypothesisWitness> find_dissipativity_violation(const ReactionTerm& r,
                                                              double max_radius, int samples) {
  const auto& p = r.params();
  const int nr = r.x_independent() ? 1 : 16;
  const int nu = 21;
  for (const auto& ph : sample_phases(r.basis().size(), samples)) {
    const auto snap = r.snapshot(ph);
    for (int ir = 0; ir < nr; ++ir) {
      const double rad = nr == 1 ? p.R0 : p.R0 + (max_radius - p.R0) * ir / (nr - 1);
      const double w = r.weight(rad);
      for (int iu = 0; iu < nu; ++iu) {
        const double u = -p.eps0 + 2.0 * p.eps0 * iu / (nu - 1);
        const double d = r.du(snap, w, u);
        if (d > -p.alpha) {
          return HypothesisWitness{"(f3) df/du <= -alpha", ph, rad, u, d};
        }
      }
    }
  }
  return std::nullopt;
}

std::optional<HypothesisWitness> find_wave_condition_violation(const ReactionTerm& r,
                                                               const std::vector<double>& limits,
                                                               int samples) {
  const auto& p = r.params();
  const int nu = 21;
  for (const auto& ph : sample_phases(r.basis().size(), samples)) {
    const auto snap = r.snapshot(ph);
    for (double lim : limits) {
      for (int iu = 0; iu < nu; ++iu) {
        // Open interval |u - lim| < eps0.
        const double u = lim + p.eps0 * (-1.0 + 2.0 * (iu + 0.5) / nu);
        const double d = r.du(snap, 1.0, u);
        if (d > -p.mu) {
          return HypothesisWitness{"(F) df/du <= -mu", ph, 0.0, u, d};
        }
      }
    }
  }
  return std::nullopt;
}

void to_json(nlohmann::json& j, const ReactionTerm& r) {
  j = nlohmann::json::object();
  j["form"] = r.form_name();
  std::visit(Overloaded{
                 [&](const BistableForm& f) { j["a"] = f.a; },
                 [&](const RadialLogisticForm& f) {
                   j["b"] = f.b;
                   j["decay"] = f.alpha;
                   j["r_inner"] = f.r_inner;
                   j["r_outer"] = f.r_outer;
                 },
                 [&](const PolynomialForm& f) { j["coeffs"] = f.coeffs; },
             },
             r.form());
  const auto& p = r.params();
  j["eps0"] = p.eps0;
  j["R0"] = p.R0;
  j["alpha"] = p.alpha;
  j["mu"] = p.mu;
  j["g_symmetric"] = r.g_symmetric();
  j["zero_at_zero"] = r.zero_at_zero();
}

ReactionTerm reaction_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("form") || !j.at("form").is_string()) {
    throw LabError(ErrorKind::ConfigInvalid, "reaction needs a string \"form\" tag");
  }
  const auto tag = j.at("form").get<std::string>();
  HypothesisParams p;
  p.eps0 = j.value("eps0", 0.0);
  p.R0 = j.value("R0", 0.0);
  p.alpha = j.value("alpha", 0.0);
  p.mu = j.value("mu", 0.0);
  std::optional<bool> sym;
  std::optional<bool> zero;
  if (j.contains("g_symmetric")) sym = j.at("g_symmetric").get<bool>();
  if (j.contains("zero_at_zero")) zero = j.at("zero_at_zero").get<bool>();

  if (tag == "bistable") {
    return ReactionTerm(BistableForm{qp_signal_from_json(j.at("a"))}, p, sym, zero);
  }
  if (tag == "radial_logistic") {
    RadialLogisticForm f{qp_signal_from_json(j.at("b")), require_number(j, "decay"),
                         require_number(j, "r_inner"), require_number(j, "r_outer")};
    return ReactionTerm(std::move(f), p, sym, zero);
  }
  if (tag == "polynomial") {
    PolynomialForm f;
    for (const auto& c : j.at("coeffs")) {
      f.coeffs.push_back(qp_signal_from_json(c));
    }
    return ReactionTerm(std::move(f), p, sym, zero);
  }
  throw LabError(ErrorKind::ConfigInvalid, "unknown reaction form \"" + tag + "\"");
}

}  // namespace monolab
