#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "aniso/cli/config.hpp"
#include "aniso/report.hpp"

namespace aniso::cli {

/// Writes `content` to a temporary file next to `path` and renames it over
/// `path`, creating parent directories as needed.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Shortest text that round-trips is not guaranteed by printf; 17 significant
/// digits always is.
std::string g17(double x);

/// Comma-separated rows with '\n' line endings.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(const std::vector<double>& values);
  std::string str() const { return text_; }

 private:
  std::size_t width_;
  std::string text_;
};

/// Report document: schema tag, tool version, command, config echo, checks,
/// summary and overall pass flag. Contains nothing that varies between runs
/// with the same config.
nlohmann::json report_document(const std::string& command, const RunConfig& config,
                               const VerificationReport& report);

/// Writes <out>/<command>.json and the wall-clock sidecar
/// <out>/<command>.timing.json. Returns the report path.
std::filesystem::path write_report(const std::string& command, const RunConfig& config,
                                   const VerificationReport& report, double wall_seconds);

}  // namespace aniso::cli
