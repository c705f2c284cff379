#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "aniso/kernels.hpp"

namespace aniso::cli {

inline constexpr const char* kToolVersion = "aniso 0.1.0";

// Malformed configuration or flags; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// theta as given: a number, or "auto" for 0.9 x the analytic bound.
struct ThetaSetting {
  bool automatic = true;
  double value = 0.0;

  static ThetaSetting parse(const std::string& text);
  std::string to_string() const;
};

struct Range {
  double lo;
  double hi;
  std::size_t count;
};

struct RunConfig {
  HurstPair hurst{0.5, 0.5};
  ThetaSetting theta;
  std::uint64_t seed = 20240601;
  std::string out = "out";
  double tol = 1e-12;
  std::size_t paths = 10'000;

  Range lag_grid{-3.0, 3.0, 7};             // kernel-eval, per axis, linear
  Range frequency_grid{1e-3, 1e3, 200};     // spectral and verify, log-spaced
  Range fourier_grid{1e-3, 1e3, 60};        // verify, per axis
  std::size_t identity_samples = 1000;      // verify
  std::size_t gram_sets = 5;                // verify
  std::size_t gram_points = 200;            // verify
  double gram_extent = 4.0;                 // verify, lags drawn in [-extent, extent]^2
  double jitter_tol = 1e-8;
  Range time_grid{1.0, 10.0, 10};           // simulate, per axis, linear
  bool include_axes = true;                 // simulate
  std::size_t write_paths = 5;              // simulate
  double significance = 0.01;               // test
  std::optional<std::size_t> witness_paths;  // test; empty selects the 5-SE requirement

  /// Theta after resolving "auto" against the analytic bound.
  double resolved_theta() const;
  nlohmann::json to_json() const;
};

/// Reads a key = value file with [sections]. Unknown keys are errors.
RunConfig load_config(const std::string& path);

/// Applies one "section.key" = value setting; used by the loader and tests.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

HurstPair parse_hurst(const std::string& text);

}  // namespace aniso::cli
