#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "aniso/lamperti.hpp"
#include "aniso/sampler.hpp"
#include "aniso/spectral.hpp"

namespace aniso {

enum class Correction { bonferroni };

struct RectanglePair {
  RectIncrement base;
  RectIncrement shifted;
};

struct IncrementTestConfig {
  std::size_t n_paths = 10'000;
  std::vector<RectanglePair> rectangles;
  double significance = 0.01;
  Correction correction = Correction::bonferroni;

  /// Throws DomainError unless every pair is congruent, n_paths >= 1000 and
  /// 0 < significance < 1.
  void validate() const;
};

struct TestOutcome {
  std::string description;
  double statistic;
  double p_value;
  double threshold;  // significance level p_value is compared against
  bool pass;
};

nlohmann::json to_json(const TestOutcome& outcome);

/// Per rectangle pair: a paired equal-variance test of the base and shifted
/// increments (Pitman-Morgan, since both come from the same paths) and a
/// chi-square test with n_paths degrees of freedom of each increment variance
/// against (dt1)^{2H1} (dt2)^{2H2}. Thresholds are Bonferroni-corrected over
/// all 3 * pairs tests; a conformance test passes iff p >= threshold.
std::vector<TestOutcome> test_increment_stationarity(const FieldCovariance& fc, const ThetaCertificate& certificate,
                                                     const IncrementTestConfig& config, std::uint64_t seed);

/// Witness points of the not-fBs test, t = (e, 1) and s = (1, e).
std::pair<Point, Point> witness_points();

struct WitnessGap {
  double field;      // E X(t) X(s)
  double fbs;        // fractional Brownian sheet value
  double rho0;       // fbs correlation at the witness
  double gap;        // correlation difference
  double variance;   // per-path variance of the estimator under the fBs hypothesis
  double required_paths;  // paths needed for |gap| >= 5 SE
};

WitnessGap witness_gap(const FieldCovariance& fc);

/// Monte Carlo estimate of the correlation of X(t) and X(s) at the witness,
/// z-tested against the fBs value. With x, y the standardized values the
/// estimator averages xy - beta (x^2 - 1) - beta (y^2 - 1) with
/// beta = rho0 / (1 + rho0^2), which is unbiased and has per-path variance
/// (1 - rho0^2)^2 / (1 + rho0^2) under the fBs hypothesis. pass iff the fBs
/// hypothesis is rejected at config.significance.
///
/// Throws DegenerateWitness when the analytic gap is nonzero but below 5
/// standard errors at config.n_paths.
TestOutcome test_not_fbs(const FieldCovariance& fc, const ThetaCertificate& certificate,
                         const IncrementTestConfig& config, std::uint64_t seed);

struct GridIndex {
  std::size_t row;
  std::size_t col;
};

struct CovarianceEstimate {
  Eigen::MatrixXd value;
  Eigen::MatrixXd standard_error;
};

/// Mean of X_a X_b over paths (the mean is known to be 0) for each pair, with
/// delete-one jackknife standard errors. Returns 1 x pairs matrices.
CovarianceEstimate empirical_covariance(std::span<const GridSample> samples,
                                        std::span<const std::pair<GridIndex, GridIndex>> pairs);

/// Same over all off-axis grid points, in GridSpec::interior_points order.
CovarianceEstimate empirical_covariance(std::span<const GridSample> samples);

}  // namespace aniso
