#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "monolab/semiflow.hpp"
#include "monolab/theorem_verifiers.hpp"

namespace monolab {

enum class Scenario { wave_1d, radial_2d, custom };

std::string_view to_string(Scenario s);

struct VerifierSelection {
  std::string name;
  /// Options with every default filled in.
  nlohmann::json options;
};

/// A validated experiment. `run` holds the scenario stage options and each selection its
/// verifier options, both completed with defaults, so running never meets a schema error.
struct ExperimentConfig {
  Scenario scenario;
  ReactionTerm reaction;
  Grid grid;
  IntegratorConfig integrator;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir;
  nlohmann::json run;
  std::vector<VerifierSelection> verifiers;
  /// The document as written, echoed into the report.
  nlohmann::json source;
};

/// Schema and hypothesis checks. Throws ConfigInvalid whose message lists every
/// problem as "<json pointer>: <reason>", one per line.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Verifier names accepted for a scenario, in report order.
std::vector<std::string> known_verifiers(Scenario s);

struct RunReport {
  nlohmann::json json;
  std::vector<VerifierReport> verifiers;
};

/// Runs the scenario, writes report.json, summary.txt, trajectory.csv, profiles/ and plots/
/// into the output directory and returns the report. Holds a lock file in the output
/// directory for the duration; a second concurrent run on the same directory fails with
/// IoError.
RunReport run_experiment(const ExperimentConfig& config, unsigned workers);

/// 0 all pass, 1 any fail or error, 3 only hypothesis-unmet besides passes.
int exit_code(std::span<const VerifierReport> reports);

/// Human-readable table of a report document.
std::string render_summary(const nlohmann::json& report);

/// Re-reads <dir>/report.json, rewrites <dir>/summary.txt and returns the parsed report.
nlohmann::json rerender_report(const std::filesystem::path& dir);

/// MLAB_WORKERS if set to a positive integer, otherwise the hardware concurrency.
unsigned workers_from_env();

inline constexpr int kReportSchema = 1;

}  // namespace monolab
