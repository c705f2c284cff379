#include "aniso/cli/output.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <unistd.h>

namespace aniso::cli {

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string g17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : width_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i > 0) text_ += ',';
    text_ += header[i];
  }
  text_ += '\n';
}

void CsvTable::add_row(const std::vector<double>& values) {
  if (values.size() != width_) throw std::logic_error("CSV row width does not match header");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) text_ += ',';
    text_ += g17(values[i]);
  }
  text_ += '\n';
}

nlohmann::json report_document(const std::string& command, const RunConfig& config,
                               const VerificationReport& report) {
  nlohmann::json doc = report.to_json();
  doc["schema"] = "report/1";
  doc["tool_version"] = kToolVersion;
  doc["command"] = command;
  doc["config"] = config.to_json();
  return doc;
}

std::filesystem::path write_report(const std::string& command, const RunConfig& config,
                                   const VerificationReport& report, double wall_seconds) {
  const std::filesystem::path dir(config.out);
  const auto path = dir / (command + ".json");
  write_atomic(path, report_document(command, config, report).dump(2) + "\n");
  const nlohmann::json timing{{"command", command}, {"wall_seconds", wall_seconds}};
  write_atomic(dir / (command + ".timing.json"), timing.dump(2) + "\n");
  return path;
}

}  // namespace aniso::cli
