#include "aniso/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "aniso/errors.hpp"
#include "aniso/spectral.hpp"

namespace aniso::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty() || !std::isfinite(value)) {
    throw ConfigError(key + ": expected a finite number, got '" + text + "'");
  }
  return value;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + text + "'");
  }
  return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto at = text.find(sep, start);
    parts.push_back(trim(text.substr(start, at - start)));
    if (at == std::string::npos) break;
    start = at + 1;
  }
  return parts;
}

// "lo,hi,count"
Range parse_range(const std::string& key, const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 3) throw ConfigError(key + ": expected lo,hi,count");
  Range r{parse_double(key, parts[0]), parse_double(key, parts[1]),
          static_cast<std::size_t>(parse_unsigned(key, parts[2]))};
  if (!(r.hi >= r.lo) || r.count == 0) throw ConfigError(key + ": need lo <= hi and count >= 1");
  return r;
}

std::size_t positive_count(const std::string& key, const std::string& text) {
  const auto n = parse_unsigned(key, text);
  if (n == 0) throw ConfigError(key + ": must be positive");
  return static_cast<std::size_t>(n);
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table{
      {"model.hurst", [](RunConfig& c, const std::string&, const std::string& v) { c.hurst = parse_hurst(v); }},
      {"model.theta", [](RunConfig& c, const std::string&, const std::string& v) { c.theta = ThetaSetting::parse(v); }},
      {"run.seed", [](RunConfig& c, const std::string& k, const std::string& v) { c.seed = parse_unsigned(k, v); }},
      {"run.out",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (trim(v).empty()) throw ConfigError(k + ": must not be empty");
         c.out = trim(v);
       }},
      {"run.tol",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.tol = parse_double(k, v);
         if (!(c.tol > 0.0)) throw ConfigError(k + ": must be positive");
       }},
      {"run.paths", [](RunConfig& c, const std::string& k, const std::string& v) { c.paths = positive_count(k, v); }},
      {"kernel_eval.lag_grid",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.lag_grid = parse_range(k, v); }},
      {"spectral.frequency_grid",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.frequency_grid = parse_range(k, v);
         if (!(c.frequency_grid.lo > 0.0)) throw ConfigError(k + ": log grid needs lo > 0");
       }},
      {"verify.fourier_grid",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.fourier_grid = parse_range(k, v);
         if (!(c.fourier_grid.lo > 0.0)) throw ConfigError(k + ": log grid needs lo > 0");
       }},
      {"verify.identity_samples",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.identity_samples = positive_count(k, v); }},
      {"verify.gram_sets",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.gram_sets = positive_count(k, v); }},
      {"verify.gram_points",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.gram_points = positive_count(k, v);
         if (c.gram_points < 2 || c.gram_points > kMaxGramPoints) throw ConfigError(k + ": out of range");
       }},
      {"verify.gram_extent",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.gram_extent = parse_double(k, v);
         if (!(c.gram_extent > 0.0)) throw ConfigError(k + ": must be positive");
       }},
      {"verify.jitter_tol",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.jitter_tol = parse_double(k, v);
         if (!(c.jitter_tol >= 0.0)) throw ConfigError(k + ": must be non-negative");
       }},
      {"simulate.time_grid",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.time_grid = parse_range(k, v);
         if (!(c.time_grid.lo > 0.0)) throw ConfigError(k + ": times must be positive");
       }},
      {"simulate.include_axes",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.include_axes = parse_bool(k, v); }},
      {"simulate.write_paths",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.write_paths = static_cast<std::size_t>(parse_unsigned(k, v));
       }},
      {"test.significance",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.significance = parse_double(k, v);
         if (!(c.significance > 0.0 && c.significance < 1.0)) throw ConfigError(k + ": must lie in (0, 1)");
       }},
      {"test.witness_paths",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (trim(v) == "auto") {
           c.witness_paths.reset();
         } else {
           c.witness_paths = positive_count(k, v);
         }
       }},
  };
  return table;
}

nlohmann::json range_json(const Range& r) { return {{"lo", r.lo}, {"hi", r.hi}, {"count", r.count}}; }

}  // namespace

ThetaSetting ThetaSetting::parse(const std::string& text) {
  const std::string t = trim(text);
  if (t == "auto") return {};
  return {false, parse_double("theta", t)};
}

std::string ThetaSetting::to_string() const {
  if (automatic) return "auto";
  return nlohmann::json(value).dump();
}

HurstPair parse_hurst(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw ConfigError("hurst: expected H1,H2");
  try {
    return HurstPair(parse_double("hurst", parts[0]), parse_double("hurst", parts[1]));
  } catch (const DomainError& e) {
    throw ConfigError(std::string("hurst: ") + e.what());
  }
}

double RunConfig::resolved_theta() const {
  if (!theta.automatic) return theta.value;
  return 0.9 * aniso::theta_bound(hurst).theta_bound;
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j{{"hurst", {hurst.h1(), hurst.h2()}},
                   {"theta", theta.automatic ? nlohmann::json("auto") : nlohmann::json(theta.value)},
                   {"theta_resolved", resolved_theta()},
                   {"seed", seed},
                   {"out", out},
                   {"tol", tol},
                   {"paths", paths},
                   {"lag_grid", range_json(lag_grid)},
                   {"frequency_grid", range_json(frequency_grid)},
                   {"fourier_grid", range_json(fourier_grid)},
                   {"identity_samples", identity_samples},
                   {"gram_sets", gram_sets},
                   {"gram_points", gram_points},
                   {"gram_extent", gram_extent},
                   {"jitter_tol", jitter_tol},
                   {"time_grid", range_json(time_grid)},
                   {"include_axes", include_axes},
                   {"write_paths", write_paths},
                   {"significance", significance}};
  j["witness_paths"] = witness_paths ? nlohmann::json(*witness_paths) : nlohmann::json("auto");
  return j;
}

void apply_setting(RunConfig& config, const std::string& key, const std::string& value) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError("unknown configuration key '" + key + "'");
  it->second(config, key, value);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  RunConfig config;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigError("key '" + section + "' must live inside a [section]");
    }
    for (const auto& [key, value] : body) {
      if (!value.empty()) throw ConfigError("nested sections are not supported under [" + section + "]");
      apply_setting(config, section + "." + key, value.data());
    }
  }
  return config;
}

}  // namespace aniso::cli
