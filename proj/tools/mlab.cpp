#include <iostream>

#include <CLI11.hpp>

#include "monolab/error.hpp"
#include "monolab/lab.hpp"

namespace {

int report_exit(const nlohmann::json& report) {
  std::vector<monolab::VerifierReport> reports;
  for (const auto& r : report.value("verifiers", nlohmann::json::array())) reports.push_back(monolab::report_from_json(r));
  return monolab::exit_code(reports);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical lab for monotone skew-product semiflows"};
  app.require_subcommand(1);

  std::string config_path, out_dir, report_dir;
  unsigned workers = 0;
  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--out", out_dir, "Override the config's output directory");
  run->add_option("--workers", workers, "Worker threads (default: MLAB_WORKERS or all cores)");

  auto* validate = app.add_subcommand("validate", "Check a config without running it");
  validate->add_option("config", config_path, "Experiment config (JSON)")->required();

  auto* report = app.add_subcommand("report", "Re-render the summary of a finished run");
  report->add_option("dir", report_dir, "Output directory of a run")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) {
      const auto cfg = monolab::load_config(config_path);
      std::cout << config_path << ": valid " << monolab::to_string(cfg.scenario) << " config with "
                << cfg.verifiers.size() << " verifier(s)\n";
      return 0;
    }
    if (*report) {
      const auto j = monolab::rerender_report(report_dir);
      std::cout << monolab::render_summary(j);
      return report_exit(j);
    }
    auto cfg = monolab::load_config(config_path);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    const auto result = monolab::run_experiment(cfg, workers > 0 ? workers : monolab::workers_from_env());
    std::cout << monolab::render_summary(result.json);
    std::cout << "report written to " << (cfg.output_dir / "report.json").string() << '\n';
    return monolab::exit_code(result.verifiers);
  } catch (const monolab::LabError& e) {
    std::cerr << e.what() << '\n';
    switch (e.kind()) {
      case monolab::ErrorKind::ConfigInvalid:
      case monolab::ErrorKind::IoError:
        return 2;
      default:
        return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
