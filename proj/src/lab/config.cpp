#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

#include "monolab/error.hpp"
#include "monolab/lab.hpp"

namespace monolab {

namespace {

using nlohmann::json;

enum class Rule { positive, nonnegative, real, count, index, list, positive_list, choice };

struct Opt {
  std::string key;
  json def;
  Rule rule;
  std::vector<std::string> choices = {};
};
using Spec = std::vector<Opt>;

constexpr double kPi = std::numbers::pi;

Spec monotone_spec(Scenario s) {
  return {{"pairs", 100, Rule::count},
          {"T", 50.0, Rule::positive},
          {"dt_L", 0.5, Rule::positive},
          {"coarsen", s == Scenario::wave_1d ? 5 : 1, Rule::count}};
}

Spec stability_spec(Scenario s) {
  switch (s) {
    case Scenario::wave_1d:
      return {{"eps", {0.1, 0.05}, Rule::positive_list}, {"T", 100.0, Rule::positive},
              {"members", 32, Rule::count}, {"ladder_depth", 8, Rule::count}};
    case Scenario::radial_2d:
      return {{"eps", {0.05}, Rule::positive_list}, {"T", 20.0, Rule::positive},
              {"members", 8, Rule::count}, {"ladder_depth", 6, Rule::count}};
    case Scenario::custom: break;
  }
  return {{"eps", {0.1}, Rule::positive_list}, {"T", 50.0, Rule::positive},
          {"members", 16, Rule::count}, {"ladder_depth", 6, Rule::count}};
}

Spec one_cover_spec() { return {{"tol", 1e-3, Rule::positive}, {"hausdorff_tol", 1e-4, Rule::positive}}; }

std::map<std::string, Spec> verifier_specs(Scenario s) {
  std::map<std::string, Spec> m;
  m["monotone"] = monotone_spec(s);
  m["stability"] = stability_spec(s);
  switch (s) {
    case Scenario::wave_1d:
      m["equivariance"] = {{"shifts_h", {1, -3}, Rule::list}, {"T", 10.0, Rule::positive},
                           {"states", 4, Rule::count}, {"tol", 1e-12, Rule::positive}};
      m["spatial_monotonicity"] = {{"tol", 1e-8, Rule::nonnegative}};
      m["total_order"] = {{"shifts", {-1.0, -0.5, 0.0, 0.5, 1.0}, Rule::list}, {"tol", 1e-8, Rule::nonnegative}};
      m["asymptotic_phase"] = {{"amplitude", 0.05, Rule::positive}, {"member", 0, Rule::index},
                               {"T", 200.0, Rule::positive}, {"sample_every", 1.0, Rule::positive},
                               {"cauchy_start", 100.0, Rule::nonnegative}, {"cauchy_tol", 1e-3, Rule::positive},
                               {"residual_tol", 1e-3, Rule::positive}, {"bracket", {-5.0, 5.0}, Rule::list}};
      m["wedge_order"] = {{"sigma", 0.2, Rule::real}, {"T", 50.0, Rule::positive}};
      m["one_cover"] = one_cover_spec();
      break;
    case Scenario::radial_2d:
      m["equivariance"] = {{"angle", 1.0, Rule::real}, {"h", {0.05, 0.025}, Rule::positive_list},
                           {"half", 25.0, Rule::positive}, {"width", 5.0, Rule::positive},
                           {"amplitude", 0.25, Rule::positive}, {"centre", {1.0, 0.5}, Rule::list},
                           {"T", 0.01, Rule::positive}, {"dt", 0.001, Rule::positive},
                           {"tol", 1e-5, Rule::positive}, {"min_ratio", 3.5, Rule::positive}};
      m["symmetry"] = {{"angles", {kPi / 7, 1.0, kPi / 2}, Rule::list},
                       {"tol_generic", 1e-3, Rule::positive}, {"tol_lattice", 1e-8, Rule::positive}};
      m["decay_bound"] = {{"R", 7.0, Rule::positive}, {"T", 50.0, Rule::positive},
                          {"amplitude", 0.05, Rule::positive}, {"member", 0, Rule::index},
                          {"slack_tol", 1e-10, Rule::nonnegative}};
      m["supersolution"] = {{"R", 7.0, Rule::positive}, {"T", 50.0, Rule::positive},
                            {"amplitude", 0.05, Rule::positive}, {"member", 1, Rule::index},
                            {"tol", 1e-12, Rule::nonnegative}};
      break;
    case Scenario::custom:
      m["one_cover"] = one_cover_spec();
      break;
  }
  return m;
}

std::map<std::string, Spec> run_specs(Scenario s, int dim) {
  std::map<std::string, Spec> m;
  const json origin = dim == 1 ? json{0.0} : json{0.0, 0.0};
  switch (s) {
    case Scenario::wave_1d:
      m["initial"] = {{"width", 2.0 * std::numbers::sqrt2, Rule::positive},
                      {"bump", 0.3, Rule::nonnegative},
                      {"member", 0, Rule::index}};
      m["frame"] = {{"initial_speed", nullptr, Rule::real},
                    {"harmonics", 2, Rule::count},
                    {"relax", 100.0, Rule::positive},
                    {"window", 300.0, Rule::positive},
                    {"sample_every", 0.5, Rule::positive},
                    {"level", 0.5, Rule::positive},
                    {"drift_tol", 1e-9, Rule::positive},
                    {"max_iterations", 8, Rule::count}};
      m["omega_limit"] = {{"eps_return", 0.02, Rule::positive}, {"horizon", 1500.0, Rule::positive},
                          {"burn_in", 0.0, Rule::nonnegative}, {"tol", 1e-4, Rule::positive}};
      m["trajectory"] = {{"T", 100.0, Rule::positive}, {"sample_every", 5.0, Rule::positive}};
      break;
    case Scenario::radial_2d:
      m["initial"] = {{"amplitude", 0.5, Rule::positive}, {"centre", {2.0, 1.0}, Rule::list},
                      {"width", 2.0, Rule::positive}};
      m["transient"] = {{"T", 50.0, Rule::positive}, {"sample_every", 5.0, Rule::positive}};
      m["omega_limit"] = {{"eps_return", 0.05, Rule::positive}, {"horizon", 600.0, Rule::positive},
                          {"burn_in", 0.0, Rule::nonnegative}, {"tol", 0.02, Rule::positive}};
      break;
    case Scenario::custom:
      m["initial"] = {{"kind", "gaussian", Rule::choice, {"gaussian", "constant"}},
                      {"amplitude", 0.5, Rule::real},
                      {"centre", origin, Rule::list},
                      {"width", 1.0, Rule::positive}};
      m["transient"] = {{"T", 20.0, Rule::positive}, {"sample_every", 5.0, Rule::positive}};
      m["omega_limit"] = {{"eps_return", 0.05, Rule::positive}, {"horizon", 200.0, Rule::positive},
                          {"burn_in", 0.0, Rule::nonnegative}, {"tol", 0.02, Rule::positive}};
      break;
  }
  return m;
}

class Diagnostics {
 public:
  void add(const std::string& pointer, const std::string& msg) { items_.push_back(pointer + ": " + msg); }
  bool empty() const { return items_.empty(); }
  std::size_t size() const { return items_.size(); }
  [[noreturn]] void raise() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < items_.size(); ++i) os << (i ? "\n" : "") << items_[i];
    throw LabError(ErrorKind::ConfigInvalid, os.str());
  }

 private:
  std::vector<std::string> items_;
};

bool finite_number(const json& v) { return v.is_number() && std::isfinite(v.get<double>()); }

json fill(const json& given, const Spec& spec, const std::string& path, Diagnostics& diag) {
  json out = json::object();
  if (!given.is_null() && !given.is_object()) {
    diag.add(path, "expected an object");
    return out;
  }
  std::set<std::string> known;
  for (const auto& o : spec) {
    known.insert(o.key);
    const std::string p = path + "/" + o.key;
    const bool has = given.is_object() && given.contains(o.key);
    const json v = has ? given.at(o.key) : o.def;
    out[o.key] = v;
    if (!has) continue;
    switch (o.rule) {
      case Rule::positive:
        if (!finite_number(v) || !(v.get<double>() > 0.0)) diag.add(p, "must be a positive number");
        break;
      case Rule::nonnegative:
        if (!finite_number(v) || v.get<double>() < 0.0) diag.add(p, "must be a nonnegative number");
        break;
      case Rule::real:
        if (!finite_number(v)) diag.add(p, "must be a finite number");
        break;
      case Rule::count:
        if (!v.is_number_integer() || v.get<long long>() < 1) diag.add(p, "must be a positive integer");
        break;
      case Rule::index:
        if (!v.is_number_integer() || v.get<long long>() < 0) diag.add(p, "must be a nonnegative integer");
        break;
      case Rule::list:
      case Rule::positive_list: {
        bool ok = v.is_array() && !v.empty();
        if (ok) {
          for (const auto& e : v) {
            if (!finite_number(e) || (o.rule == Rule::positive_list && !(e.get<double>() > 0.0))) ok = false;
          }
        }
        if (!ok) {
          diag.add(p, o.rule == Rule::list ? "must be a nonempty array of numbers"
                                           : "must be a nonempty array of positive numbers");
        }
        break;
      }
      case Rule::choice: {
        const bool ok = v.is_string() &&
                        std::find(o.choices.begin(), o.choices.end(), v.get<std::string>()) != o.choices.end();
        if (!ok) {
          std::string all;
          for (const auto& c : o.choices) all += (all.empty() ? "" : ", ") + c;
          diag.add(p, "must be one of: " + all);
        }
        break;
      }
    }
  }
  if (given.is_object()) {
    for (const auto& [k, _] : given.items()) {
      if (!known.contains(k)) diag.add(path + "/" + k, "unknown key");
    }
  }
  return out;
}

std::optional<Scenario> scenario_from(const json& j) {
  if (!j.is_string()) return std::nullopt;
  const auto s = j.get<std::string>();
  if (s == "wave_1d") return Scenario::wave_1d;
  if (s == "radial_2d") return Scenario::radial_2d;
  if (s == "custom") return Scenario::custom;
  return std::nullopt;
}

std::optional<Axis> parse_axis(const json& j, const std::string& path, Diagnostics& diag) {
  if (!j.is_array() || j.size() != 3 || !finite_number(j[0]) || !finite_number(j[1]) || !j[2].is_number_integer()) {
    diag.add(path, "expected [min, max, nodes]");
    return std::nullopt;
  }
  const double lo = j[0].get<double>(), hi = j[1].get<double>();
  const long long n = j[2].get<long long>();
  bool ok = true;
  if (!(hi > lo)) {
    diag.add(path, "min must be below max");
    ok = false;
  }
  if (n < 3) {
    diag.add(path + "/2", "needs at least 3 nodes");
    ok = false;
  }
  if (!ok) return std::nullopt;
  return Axis{lo, hi, static_cast<std::size_t>(n)};
}

std::optional<Grid> parse_grid(const json& j, Diagnostics& diag) {
  if (!j.is_object() || !j.contains("x")) {
    diag.add("/grid", "expected an object with \"x\" (and \"y\" for 2-D)");
    return std::nullopt;
  }
  for (const auto& [k, _] : j.items()) {
    if (k != "x" && k != "y") diag.add("/grid/" + k, "unknown key");
  }
  const auto x = parse_axis(j.at("x"), "/grid/x", diag);
  if (!j.contains("y")) {
    if (!x) return std::nullopt;
    return Grid::line(x->min, x->max, x->n);
  }
  const auto y = parse_axis(j.at("y"), "/grid/y", diag);
  if (!x || !y) return std::nullopt;
  return Grid::box(x->min, x->max, x->n, y->min, y->max, y->n);
}

std::optional<IntegratorConfig> parse_integrator(const json& j, Diagnostics& diag) {
  const Spec spec{{"dt", 0.01, Rule::positive},
                  {"boundary", "dirichlet_zero", Rule::choice, {"dirichlet_limits", "dirichlet_zero", "dirichlet_frozen"}},
                  {"lipschitz", 1.0, Rule::positive}};
  if (!j.is_object() || !j.contains("dt") || !j.contains("lipschitz")) {
    diag.add("/integrator", "expected an object with \"dt\" and \"lipschitz\"");
    return std::nullopt;
  }
  const std::size_t before = diag.size();
  const json v = fill(j, spec, "/integrator", diag);
  if (diag.size() != before) return std::nullopt;
  IntegratorConfig cfg;
  cfg.dt = v.at("dt").get<double>();
  cfg.lipschitz = v.at("lipschitz").get<double>();
  const auto b = v.at("boundary").get<std::string>();
  cfg.boundary = b == "dirichlet_limits" ? Boundary::dirichlet_limits
                 : b == "dirichlet_frozen" ? Boundary::dirichlet_frozen
                                           : Boundary::dirichlet_zero;
  if (!(cfg.dt * cfg.lipschitz < 1.0)) {
    diag.add("/integrator/dt", "dt * lipschitz must be below 1 for an order-preserving step");
  }
  return cfg;
}

double corner_radius(const Grid& g) {
  double r = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) r = std::max(r, g.radius(k));
  return r;
}

void check_hypotheses(Scenario s, const ReactionTerm& r, const Grid& g, const IntegratorConfig& cfg,
                      const json& run, Diagnostics& diag) {
  const auto& p = r.params();
  if (s == Scenario::wave_1d) {
    if (g.dimension() != 1) diag.add("/grid", "wave_1d needs a 1-D grid");
    if (!r.x_independent()) diag.add("/reaction/form", "wave_1d needs an x-independent reaction");
    if (!(p.eps0 > 0.0)) diag.add("/reaction/eps0", "(F) requires positive eps0");
    if (!(p.mu > 0.0)) diag.add("/reaction/mu", "(F) requires positive mu");
    if (p.eps0 > 0.0 && p.mu > 0.0) {
      if (auto w = find_wave_condition_violation(r, {0.0, 1.0})) diag.add("/reaction", w->describe());
    }
    const double L = r.sampled_lipschitz(0.0, 1.0, 0.0);
    if (L > cfg.lipschitz) {
      diag.add("/integrator/lipschitz", "declared bound " + std::to_string(cfg.lipschitz) +
                                            " is below the sampled -df/du = " + std::to_string(L) + " on [0,1]");
    }
    const auto& sp = run.at("frame").at("initial_speed");
    if (sp.is_number() && g.dimension() == 1 && cfg.dt * std::abs(sp.get<double>()) / g.h() > 1.0) {
      diag.add("/run/frame/initial_speed", "dt * |speed| / h exceeds 1");
    }
  } else if (s == Scenario::radial_2d) {
    if (g.dimension() != 2) {
      diag.add("/grid", "radial_2d needs a 2-D grid");
      return;
    }
    const Axis& ax = g.axis(0);
    if (!(g.axis(0) == g.axis(1)) || ax.min != -ax.max) {
      diag.add("/grid", "rotations need a square grid centred at the origin");
    }
    if (!r.g_symmetric()) diag.add("/reaction/g_symmetric", "(f1) requires a radially symmetric reaction");
    if (!(p.alpha > 0.0)) diag.add("/reaction/alpha", "(f3) requires positive α");
    if (!(p.eps0 > 0.0)) diag.add("/reaction/eps0", "(f3) requires positive eps0");
    if (!(p.R0 > 0.0)) diag.add("/reaction/R0", "(f3) requires positive R0");
    const double rmax = corner_radius(g);
    if (auto w = find_zero_violation(r, rmax)) diag.add("/reaction", w->describe());
    if (p.alpha > 0.0 && p.eps0 > 0.0 && p.R0 > 0.0) {
      if (auto w = find_dissipativity_violation(r, rmax)) diag.add("/reaction", w->describe());
    }
    const double L = r.sampled_lipschitz(-0.5, 1.5, rmax);
    if (L > cfg.lipschitz) {
      diag.add("/integrator/lipschitz", "declared bound " + std::to_string(cfg.lipschitz) +
                                            " is below the sampled -df/du = " + std::to_string(L) +
                                            " on [-0.5,1.5]");
    }
  } else {
    const auto& c = run.at("initial").at("centre");
    if (c.is_array() && static_cast<int>(c.size()) != g.dimension()) {
      diag.add("/run/initial/centre", "needs one coordinate per grid dimension");
    }
  }
}

void check_verifier_extras(Scenario s, const ExperimentConfig& cfg, const VerifierSelection& v,
                           Diagnostics& diag) {
  const std::string base = "/verifiers/" + v.name;
  const auto& o = v.options;
  if (v.name == "monotone" && o.at("dt_L").is_number() && !(o.at("dt_L").get<double>() < 1.0)) {
    diag.add(base + "/dt_L", "must be below 1");
  }
  if (v.name == "monotone" && o.at("coarsen").is_number_integer()) {
    const auto k = o.at("coarsen").get<std::size_t>();
    if (k > 0 && (cfg.grid.nx() - 1) % k != 0) diag.add(base + "/coarsen", "must divide the number of grid intervals");
  }
  if ((v.name == "decay_bound" || v.name == "supersolution") && o.at("R").is_number() &&
      !(o.at("R").get<double>() > cfg.reaction.params().R0)) {
    diag.add(base + "/R", "must exceed R0");
  }
  if (v.name == "supersolution" && o.at("amplitude").is_number() &&
      !(o.at("amplitude").get<double>() < cfg.reaction.params().eps0 / 4.0)) {
    diag.add(base + "/amplitude", "must be below eps0/4");
  }
  if (v.name == "asymptotic_phase" && o.at("bracket").is_array() && o.at("bracket").size() == 2 &&
      finite_number(o.at("bracket")[0]) && finite_number(o.at("bracket")[1]) &&
      !(o.at("bracket")[0].get<double>() < o.at("bracket")[1].get<double>())) {
    diag.add(base + "/bracket", "expected [lo, hi] with lo < hi");
  } else if (v.name == "asymptotic_phase" && o.at("bracket").size() != 2) {
    diag.add(base + "/bracket", "expected [lo, hi]");
  }
  if (v.name == "equivariance" && s == Scenario::radial_2d && o.at("centre").size() != 2) {
    diag.add(base + "/centre", "expected [x, y]");
  }
  if (v.name == "equivariance" && s == Scenario::radial_2d && o.at("T").is_number() && o.at("dt").is_number() &&
      !(o.at("dt").get<double>() * cfg.integrator.lipschitz < 1.0)) {
    diag.add(base + "/dt", "dt * lipschitz must be below 1");
  }
  if (v.name == "equivariance" && s == Scenario::wave_1d && o.at("shifts_h").is_array()) {
    for (const auto& e : o.at("shifts_h")) {
      if (!e.is_number_integer()) {
        diag.add(base + "/shifts_h", "shifts are whole multiples of the grid step");
        break;
      }
    }
  }
}

void check_time_grid(const json& options, const std::string& base, double dt, Diagnostics& diag) {
  static const std::set<std::string> timed{"T", "sample_every", "horizon", "relax", "window"};
  for (const auto& [k, v] : options.items()) {
    if (!timed.contains(k) || !finite_number(v)) continue;
    const double q = v.get<double>() / dt;
    if (std::abs(q - std::round(q)) > 1e-6) diag.add(base + "/" + k, "must be a whole multiple of dt");
  }
}

}  // namespace

std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::wave_1d: return "wave_1d";
    case Scenario::radial_2d: return "radial_2d";
    case Scenario::custom: return "custom";
  }
  return "custom";
}

std::vector<std::string> known_verifiers(Scenario s) {
  std::vector<std::string> out;
  for (const auto& [name, _] : verifier_specs(s)) out.push_back(name);
  return out;
}

ExperimentConfig parse_config(const json& j) {
  Diagnostics diag;
  if (!j.is_object()) {
    diag.add("", "config must be a JSON object");
    diag.raise();
  }
  static const std::set<std::string> top{"scenario", "seed", "output_dir", "reaction", "grid",
                                         "integrator", "run", "verifiers"};
  for (const auto& [k, _] : j.items()) {
    if (!top.contains(k)) diag.add("/" + k, "unknown key");
  }

  const auto scenario = j.contains("scenario") ? scenario_from(j.at("scenario")) : std::nullopt;
  if (!scenario) diag.add("/scenario", "must be one of: wave_1d, radial_2d, custom");

  std::uint64_t seed = 0;
  if (j.contains("seed")) {
    const auto& v = j.at("seed");
    if (v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0)) seed = v.get<std::uint64_t>();
    else diag.add("/seed", "must be a nonnegative integer");
  }
  std::filesystem::path out;
  if (j.contains("output_dir")) {
    if (j.at("output_dir").is_string() && !j.at("output_dir").get<std::string>().empty()) {
      out = j.at("output_dir").get<std::string>();
    } else {
      diag.add("/output_dir", "must be a nonempty string");
    }
  }

  std::optional<ReactionTerm> reaction;
  if (!j.contains("reaction")) {
    diag.add("/reaction", "required");
  } else {
    try {
      reaction = reaction_from_json(j.at("reaction"));
    } catch (const LabError& e) {
      const std::string msg = e.what();
      diag.add("/reaction", msg.substr(msg.find(": ") + 2));
    } catch (const json::exception& e) {
      diag.add("/reaction", e.what());
    }
  }

  std::optional<Grid> grid;
  if (j.contains("grid")) grid = parse_grid(j.at("grid"), diag);
  else diag.add("/grid", "required");

  std::optional<IntegratorConfig> integrator;
  if (j.contains("integrator")) integrator = parse_integrator(j.at("integrator"), diag);
  else diag.add("/integrator", "required");

  if (!scenario) diag.raise();
  const Scenario sc = *scenario;
  if (out.empty()) out = std::filesystem::path("out") / std::string(to_string(sc));

  const int dim = grid ? grid->dimension() : 1;
  json run = json::object();
  {
    const json given = j.value("run", json::object());
    const auto specs = run_specs(sc, dim);
    if (!given.is_object()) {
      diag.add("/run", "expected an object");
    } else {
      for (const auto& [k, _] : given.items()) {
        if (!specs.contains(k)) diag.add("/run/" + k, "unknown stage for " + std::string(to_string(sc)));
      }
      for (const auto& [name, spec] : specs) {
        run[name] = fill(given.value(name, json(nullptr)), spec, "/run/" + name, diag);
      }
    }
  }
  if (sc == Scenario::wave_1d && reaction && run.contains("frame") &&
      run["frame"].at("initial_speed").is_null()) {
    // Closed-form speed of the frozen-coefficient front at the mean threshold.
    double mean_a = 0.5;
    if (const auto* f = std::get_if<BistableForm>(&reaction->form())) {
      const MultiIndex zero(f->a.basis().size(), 0);
      const auto it = f->a.modes().find(zero);
      mean_a = it == f->a.modes().end() ? 0.0 : it->second.real();
    }
    run["frame"]["initial_speed"] = (1.0 - 2.0 * mean_a) / std::numbers::sqrt2;
  }

  std::vector<VerifierSelection> verifiers;
  {
    const json given = j.value("verifiers", json::object());
    const auto specs = verifier_specs(sc);
    if (!given.is_object()) {
      diag.add("/verifiers", "expected an object keyed by verifier name");
    } else {
      for (const auto& [name, opts] : given.items()) {
        const auto it = specs.find(name);
        if (it == specs.end()) {
          diag.add("/verifiers/" + name, "unknown verifier for " + std::string(to_string(sc)));
          continue;
        }
        verifiers.push_back({name, fill(opts, it->second, "/verifiers/" + name, diag)});
      }
    }
  }

  if (reaction && grid && integrator) check_hypotheses(sc, *reaction, *grid, *integrator, run, diag);
  if (!diag.empty() || !reaction || !grid || !integrator) diag.raise();

  ExperimentConfig cfg{sc, *reaction, *grid, *integrator, seed, out, run, verifiers, j};
  for (const auto& [name, opts] : cfg.run.items()) check_time_grid(opts, "/run/" + name, cfg.integrator.dt, diag);
  for (const auto& v : cfg.verifiers) {
    check_verifier_extras(sc, cfg, v, diag);
    if (v.name == "monotone") continue;
    const bool own_dt = v.name == "equivariance" && sc == Scenario::radial_2d;
    check_time_grid(v.options, "/verifiers/" + v.name, own_dt ? v.options.at("dt").get<double>() : cfg.integrator.dt,
                    diag);
  }
  if (!diag.empty()) diag.raise();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LabError(ErrorKind::ConfigInvalid, "cannot read " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw LabError(ErrorKind::ConfigInvalid, path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

}  // namespace monolab
