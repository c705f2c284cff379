#include "aniso/report.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aniso {

bool compare(double value, const std::string& relation, double threshold) {
  if (std::isnan(value) || std::isnan(threshold)) return false;
  if (relation == "<") return value < threshold;
  if (relation == "<=") return value <= threshold;
  if (relation == ">") return value > threshold;
  if (relation == ">=") return value >= threshold;
  throw std::invalid_argument("unknown relation '" + relation + "'");
}

const CheckRecord& VerificationReport::add_check(std::string name, nlohmann::json inputs, double value,
                                                 std::string relation, double threshold) {
  const bool ok = compare(value, relation, threshold);
  checks_.push_back({std::move(name), std::move(inputs), value, std::move(relation), threshold, ok});
  return checks_.back();
}

void VerificationReport::merge(const VerificationReport& other, const std::string& prefix) {
  for (CheckRecord record : other.checks_) {
    if (!prefix.empty()) record.name = prefix + record.name;
    checks_.push_back(std::move(record));
  }
}

bool VerificationReport::pass() const {
  return std::all_of(checks_.begin(), checks_.end(), [](const CheckRecord& c) { return c.pass; });
}

std::size_t VerificationReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(checks_.begin(), checks_.end(), [](const CheckRecord& c) { return !c.pass; }));
}

nlohmann::json to_json(const CheckRecord& record) {
  return {{"name", record.name},         {"inputs", record.inputs},
          {"value", record.value},       {"relation", record.relation},
          {"threshold", record.threshold}, {"pass", record.pass}};
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : checks_) checks.push_back(aniso::to_json(c));
  return {{"kind", kind_}, {"checks", checks}, {"summary", summary_}, {"pass", pass()}};
}

}  // namespace aniso
