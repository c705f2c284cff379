#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "aniso/errors.hpp"
#include "aniso/stats.hpp"
#include "support.hpp"

using namespace aniso;
using aniso::testing::relative_error;

namespace {

IncrementTestConfig three_pairs(std::size_t n_paths) {
  IncrementTestConfig config;
  config.n_paths = n_paths;
  config.rectangles = {{RectIncrement({1.0, 1.0}, {2.0, 2.0}), RectIncrement({3.0, 2.0}, {4.0, 3.0})},
                       {RectIncrement({0.5, 2.0}, {1.0, 3.0}), RectIncrement({2.5, 0.5}, {3.0, 1.5})},
                       {RectIncrement({0.0, 0.0}, {1.0, 1.0}), RectIncrement({4.0, 4.0}, {5.0, 5.0})}};
  return config;
}

bool all_pass(const std::vector<TestOutcome>& outcomes) {
  return std::all_of(outcomes.begin(), outcomes.end(), [](const TestOutcome& o) { return o.pass; });
}

std::vector<Lag> corner_lags(const IncrementTestConfig& config) {
  std::vector<Lag> lags;
  for (const RectanglePair& pair : config.rectangles) {
    for (const RectIncrement& r : {pair.base, pair.shifted}) {
      for (Point p : {r.u, r.v, Point{r.u.t1, r.v.t2}, Point{r.v.t1, r.u.t2}}) {
        if (p.t1 > 0.0 && p.t2 > 0.0) lags.push_back({std::log(p.t1), std::log(p.t2)});
      }
    }
  }
  return lags;
}

}  // namespace

TEST_SUITE("stats") {
  TEST_CASE("config validation") {
    IncrementTestConfig config = three_pairs(10000);
    CHECK_NOTHROW(config.validate());
    config.n_paths = 999;
    CHECK_THROWS_AS(config.validate(), DomainError);
    config = three_pairs(10000);
    config.rectangles.push_back({RectIncrement({1.0, 1.0}, {2.0, 2.0}), RectIncrement({1.0, 1.0}, {2.0, 2.5})});
    CHECK_THROWS_AS(config.validate(), DomainError);
    config = three_pairs(10000);
    config.significance = 1.0;
    CHECK_THROWS_AS(config.validate(), DomainError);
  }

  TEST_CASE("stationarity tests pass for the fBs and for R_theta") {
    const HurstPair hp(0.5, 0.5);
    for (double theta : {0.0, 0.9 * theta_bound(hp).theta_bound}) {
      const FieldCovariance fc(StationaryKernel(hp, theta));
      const auto outcomes = test_increment_stationarity(fc, theta_bound(hp), three_pairs(10000), 2024);
      CHECK(outcomes.size() == 9);
      CHECK(all_pass(outcomes));
      for (const TestOutcome& o : outcomes) {
        CHECK(o.p_value >= 0.0);
        CHECK(o.p_value <= 1.0);
        CHECK(o.threshold == doctest::Approx(0.01 / 9.0));
      }
    }
  }

  TEST_CASE("outcomes are deterministic") {
    const HurstPair hp(0.3, 0.7);
    const FieldCovariance fc(StationaryKernel(hp, 0.001));
    const auto a = test_increment_stationarity(fc, theta_bound(hp), three_pairs(2000), 5);
    const auto b = test_increment_stationarity(fc, theta_bound(hp), three_pairs(2000), 5);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].p_value == b[i].p_value);
      CHECK(a[i].statistic == b[i].statistic);
    }
  }

  TEST_CASE("modulated control fails stationarity") {
    const HurstPair hp(0.5, 0.5);
    const FieldCovariance control = aniso::testing::modulated_control(hp);
    const IncrementTestConfig config = three_pairs(10000);
    const auto cert = certify_by_gram(control, corner_lags(config));
    REQUIRE(cert.has_value());
    // Analytic variance mismatch on the first base rectangle.
    const RectIncrement r = config.rectangles[0].base;
    CHECK(increment_covariance(control, r, r) > 1.5);
    const auto outcomes = test_increment_stationarity(control, *cert, config, 2024);
    CHECK_FALSE(all_pass(outcomes));
  }

  TEST_CASE("calibration over 50 seeds") {
    const HurstPair hp(0.5, 0.5);
    const FieldCovariance fc{StationaryKernel(hp)};
    int passes = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      if (all_pass(test_increment_stationarity(fc, theta_bound(hp), three_pairs(10000), seed))) ++passes;
    }
    CHECK(passes >= 49 - 1);  // frequency >= 1 - 0.01 - 0.02 over 50 runs
  }

  TEST_CASE("witness gap") {
    const HurstPair hp(0.5, 0.5);
    CHECK(witness_gap(FieldCovariance{StationaryKernel(hp)}).gap == 0.0);
    const double theta = 0.9 * theta_bound(hp).theta_bound;
    const FieldCovariance fc(StationaryKernel(hp, theta));
    const WitnessGap w = witness_gap(fc);
    CHECK(relative_error(w.rho0, std::exp(-1.0)) < 1e-15);
    // theta R0(1,-1) e^{-1} sinh(1/2) (-sinh(1/2)).
    const double want = -theta * std::exp(-2.0) * std::sinh(0.5) * std::sinh(0.5);
    CHECK(relative_error(w.gap, want) < 1e-10);
    // Same gap from the field covariances, divided by the standard deviations.
    CHECK(relative_error((w.field - w.fbs) / std::exp(1.0), want) < 1e-9);
    CHECK(w.required_paths == doctest::Approx(25.0 * w.variance / (want * want)).epsilon(1e-6));
    CHECK(w.required_paths > 5e8);
  }

  TEST_CASE("not-fBs test") {
    const HurstPair hp(0.5, 0.5);
    IncrementTestConfig config = three_pairs(100000);

    const TestOutcome null = test_not_fbs(FieldCovariance{StationaryKernel(hp)}, theta_bound(hp), config, 8);
    CHECK_FALSE(null.pass);
    CHECK(null.p_value >= 0.01);

    const FieldCovariance near_bound(StationaryKernel(hp, 0.9 * theta_bound(hp).theta_bound));
    try {
      test_not_fbs(near_bound, theta_bound(hp), config, 8);
      FAIL("expected DegenerateWitness");
    } catch (const DegenerateWitness& e) {
      CHECK(e.required_paths() > 5e8);
    }

    // A larger theta certified on the two witness points resolves quickly.
    const FieldCovariance strong(StationaryKernel(hp, 0.5));
    const std::vector<Lag> lags{{1.0, 0.0}, {0.0, 1.0}};
    const auto cert = certify_by_gram(strong, lags);
    REQUIRE(cert.has_value());
    const WitnessGap w = witness_gap(strong);
    config.n_paths = static_cast<std::size_t>(w.required_paths);
    const TestOutcome reject = test_not_fbs(strong, *cert, config, 8);
    CHECK(reject.pass);
    CHECK(reject.p_value < 0.01);
  }

  TEST_CASE("empirical covariance") {
    const GridSpec g({1.0, 2.0}, {1.0});
    std::vector<GridSample> zeros(3, GridSample{g, Eigen::MatrixXd::Zero(2, 1), 0, 0, "zero"});
    const CovarianceEstimate z = empirical_covariance(zeros);
    CHECK(z.value.isZero(0.0));
    CHECK(z.standard_error.isZero(0.0));
    CHECK_THROWS_AS(empirical_covariance(std::span<const GridSample>(zeros.data(), 1)), DomainError);

    const HurstPair hp(0.5, 0.5);
    const FieldCovariance fc{StationaryKernel(hp)};
    const GridFactor f = factorize_covariance(fc, GridSpec({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}), theta_bound(hp));
    const auto samples = sample(f, 31, 20000);
    const std::span<const GridSample> all(samples);
    const CovarianceEstimate half = empirical_covariance(all.first(10000));
    const CovarianceEstimate full = empirical_covariance(all);

    std::vector<double> ratios;
    for (Eigen::Index i = 0; i < half.value.size(); ++i) {
      ratios.push_back(full.standard_error.data()[i] / half.standard_error.data()[i]);
    }
    std::nth_element(ratios.begin(), ratios.begin() + ratios.size() / 2, ratios.end());
    const double median = ratios[ratios.size() / 2];
    CHECK(median >= 0.65);
    CHECK(median <= 0.76);

    // Pairwise form agrees with the matrix form.
    const std::vector<std::pair<GridIndex, GridIndex>> pairs{{{0, 0}, {2, 1}}, {{1, 1}, {1, 1}}};
    const CovarianceEstimate some = empirical_covariance(all, pairs);
    CHECK(some.value(0, 0) == doctest::Approx(full.value(7, 0)).epsilon(1e-12));
    CHECK(some.standard_error(0, 1) == doctest::Approx(full.standard_error(4, 4)).epsilon(1e-9));
  }
}
