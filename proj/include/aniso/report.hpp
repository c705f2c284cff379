#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace aniso {

/// One compared quantity: value RELATION threshold.
struct CheckRecord {
  std::string name;
  nlohmann::json inputs;
  double value;
  std::string relation;  // one of "<", "<=", ">", ">="
  double threshold;
  bool pass;
};

/// True iff `value relation threshold` holds; NaN never passes.
bool compare(double value, const std::string& relation, double threshold);

/// Machine-readable outcome of one certification run.
class VerificationReport {
 public:
  explicit VerificationReport(std::string kind) : kind_(std::move(kind)) {}

  const CheckRecord& add_check(std::string name, nlohmann::json inputs, double value,
                               std::string relation, double threshold);
  void add_record(CheckRecord record) { checks_.push_back(std::move(record)); }

  /// Appends every check of `other`, prefixing names with `prefix`.
  void merge(const VerificationReport& other, const std::string& prefix = {});

  const std::string& kind() const noexcept { return kind_; }
  const std::vector<CheckRecord>& checks() const noexcept { return checks_; }
  nlohmann::json& summary() noexcept { return summary_; }
  const nlohmann::json& summary() const noexcept { return summary_; }

  /// Conjunction of all check outcomes; an empty report passes.
  bool pass() const;
  std::size_t failures() const;

  nlohmann::json to_json() const;

 private:
  std::string kind_;
  std::vector<CheckRecord> checks_;
  nlohmann::json summary_ = nlohmann::json::object();
};

nlohmann::json to_json(const CheckRecord& record);

}  // namespace aniso
