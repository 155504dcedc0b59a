#include <fstream>
#include <iomanip>
#include <sstream>

#include "monolab/error.hpp"
#include "monolab/lab.hpp"

namespace monolab {

namespace {

std::string number(const nlohmann::json& v) {
  if (!v.is_number()) return "-";
  std::ostringstream os;
  os << std::setprecision(4) << std::scientific << v.get<double>();
  return os.str();
}

}  // namespace

std::string render_summary(const nlohmann::json& report) {
  std::ostringstream os;
  os << "scenario " << report.value("scenario", "?") << "  seed " << report.value("seed", 0ULL) << "  schema "
     << report.value("schema", 0) << "  version " << report.value("version", "?") << '\n';
  os << std::left << std::setw(22) << "verifier" << std::setw(18) << "status" << std::setw(13) << "measured"
     << std::setw(13) << "tolerance" << "seconds\n";
  for (const auto& r : report.value("verifiers", nlohmann::json::array())) {
    os << std::left << std::setw(22) << r.value("name", "?") << std::setw(18) << r.value("status", "?")
       << std::setw(13) << number(r.value("measured", nlohmann::json())) << std::setw(13)
       << number(r.value("tolerance", nlohmann::json())) << std::fixed << std::setprecision(2)
       << r.value("runtime_seconds", 0.0) << '\n';
    os.unsetf(std::ios::floatfield);
    if (r.contains("details") && r.at("details").contains("message")) {
      os << "    " << r.at("details").at("message").get<std::string>() << '\n';
    }
  }
  if (report.contains("summary")) {
    const auto& s = report.at("summary");
    os << "pass " << s.value("pass", 0) << ", fail " << s.value("fail", 0) << ", hypothesis unmet "
       << s.value("hypothesis_unmet", 0) << ", error " << s.value("error", 0) << "; exit code "
       << s.value("exit_code", 0) << '\n';
  }
  os << "wall clock " << std::fixed << std::setprecision(1) << report.value("wall_clock_seconds", 0.0) << " s\n";
  return os.str();
}

nlohmann::json rerender_report(const std::filesystem::path& dir) {
  const auto path = dir / "report.json";
  std::ifstream in(path);
  if (!in) throw LabError(ErrorKind::IoError, "cannot read " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw LabError(ErrorKind::IoError, path.string() + " is not valid JSON: " + e.what());
  }
  if (j.value("schema", 0) != kReportSchema) {
    throw LabError(ErrorKind::IoError, path.string() + " has an unsupported schema version");
  }
  std::ofstream out(dir / "summary.txt");
  if (!out) throw LabError(ErrorKind::IoError, "cannot write " + (dir / "summary.txt").string());
  out << render_summary(j);
  return j;
}

}  // namespace monolab
