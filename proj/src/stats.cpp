#include "aniso/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "aniso/errors.hpp"

namespace aniso {

namespace {

std::string g6(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string describe(const RectIncrement& r) {
  return "[" + g6(r.u.t1) + "," + g6(r.v.t1) + "]x[" + g6(r.u.t2) + "," + g6(r.v.t2) + "]";
}

bool same_length(double a, double b) { return std::fabs(a - b) <= 1e-12 * std::max(std::fabs(a), std::fabs(b)); }

// Distinct off-axis corners of all rectangles, and for every rectangle the
// weights of its increment on those corners.
struct IncrementLayout {
  std::vector<Point> points;
  Eigen::MatrixXd weights;  // one row per rectangle
};

IncrementLayout layout_increments(std::span<const RectIncrement> rects) {
  std::map<std::pair<double, double>, std::size_t> index;
  std::vector<Point> points;
  std::vector<std::vector<std::pair<std::size_t, double>>> terms(rects.size());
  for (std::size_t k = 0; k < rects.size(); ++k) {
    const RectIncrement& r = rects[k];
    const std::array<std::pair<Point, double>, 4> corners{{{{r.v.t1, r.v.t2}, 1.0},
                                                           {{r.u.t1, r.v.t2}, -1.0},
                                                           {{r.v.t1, r.u.t2}, -1.0},
                                                           {{r.u.t1, r.u.t2}, 1.0}}};
    for (const auto& [p, sign] : corners) {
      if (p.t1 == 0.0 || p.t2 == 0.0) continue;  // the field vanishes on the axes
      const auto [it, inserted] = index.try_emplace({p.t1, p.t2}, points.size());
      if (inserted) points.push_back(p);
      terms[k].push_back({it->second, sign});
    }
  }
  Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rects.size()),
                                                  static_cast<Eigen::Index>(points.size()));
  for (std::size_t k = 0; k < rects.size(); ++k) {
    for (const auto& [i, sign] : terms[k]) weights(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) += sign;
  }
  return {std::move(points), std::move(weights)};
}

double two_sided(double lower_tail) { return std::min(1.0, 2.0 * std::min(lower_tail, 1.0 - lower_tail)); }

double chi_square_p(double statistic, double dof) {
  const boost::math::chi_squared_distribution<double> dist(dof);
  const double lower = boost::math::cdf(dist, statistic);
  const double upper = boost::math::cdf(boost::math::complement(dist, statistic));
  return std::min(1.0, 2.0 * std::min(lower, upper));
}

}  // namespace

void IncrementTestConfig::validate() const {
  if (n_paths < 1000) throw DomainError("n_paths must be at least 1000");
  if (!(significance > 0.0 && significance < 1.0)) throw DomainError("significance must lie in (0, 1)");
  if (rectangles.empty()) throw DomainError("at least one rectangle pair is required");
  for (const RectanglePair& pair : rectangles) {
    if (!same_length(pair.base.width(), pair.shifted.width()) ||
        !same_length(pair.base.height(), pair.shifted.height())) {
      throw DomainError("rectangle pair " + describe(pair.base) + " / " + describe(pair.shifted) +
                        " is not congruent");
    }
  }
}

nlohmann::json to_json(const TestOutcome& outcome) {
  return {{"description", outcome.description},
          {"statistic", outcome.statistic},
          {"p_value", outcome.p_value},
          {"threshold", outcome.threshold},
          {"pass", outcome.pass}};
}

std::vector<TestOutcome> test_increment_stationarity(const FieldCovariance& fc, const ThetaCertificate& certificate,
                                                     const IncrementTestConfig& config, std::uint64_t seed) {
  config.validate();
  std::vector<RectIncrement> rects;
  for (const RectanglePair& pair : config.rectangles) {
    rects.push_back(pair.base);
    rects.push_back(pair.shifted);
  }
  const IncrementLayout layout = layout_increments(rects);
  const CovarianceFactor factor = factorize_points(fc, layout.points, certificate);

  const std::size_t pairs = config.rectangles.size();
  std::vector<double> sum_a(pairs, 0.0), sum_b(pairs, 0.0), sum_uv(pairs, 0.0), sum_uu(pairs, 0.0),
      sum_vv(pairs, 0.0);
  for_each_block(factor, seed, config.n_paths, [&](std::uint64_t, const Eigen::MatrixXd& block) {
    const Eigen::MatrixXd increments = layout.weights * block;
    for (std::size_t k = 0; k < pairs; ++k) {
      const auto a = increments.row(static_cast<Eigen::Index>(2 * k)).array();
      const auto b = increments.row(static_cast<Eigen::Index>(2 * k + 1)).array();
      sum_a[k] += a.square().sum();
      sum_b[k] += b.square().sum();
      sum_uv[k] += ((a + b) * (a - b)).sum();
      sum_uu[k] += (a + b).square().sum();
      sum_vv[k] += (a - b).square().sum();
    }
  });

  const double n = static_cast<double>(config.n_paths);
  const double threshold = config.significance / static_cast<double>(3 * pairs);
  const double h1 = fc.hurst().h1();
  const double h2 = fc.hurst().h2();
  const boost::math::students_t_distribution<double> t_dist(n - 1.0);

  std::vector<TestOutcome> outcomes;
  for (std::size_t k = 0; k < pairs; ++k) {
    const RectanglePair& pair = config.rectangles[k];
    const std::string label = describe(pair.base) + " vs " + describe(pair.shifted);

    // Var(A) = Var(B) iff A + B and A - B are uncorrelated.
    const double r = sum_uv[k] / std::sqrt(sum_uu[k] * sum_vv[k]);
    const double t = r * std::sqrt((n - 1.0) / std::max(1.0 - r * r, 1e-300));
    const double p_equal = two_sided(boost::math::cdf(t_dist, t));
    outcomes.push_back({"equal increment variance " + label + " (Pitman-Morgan t, var ratio " +
                            g6(sum_a[k] / sum_b[k]) + ")",
                        t, p_equal, threshold, p_equal >= threshold});

    for (int side = 0; side < 2; ++side) {
      const RectIncrement& rect = side == 0 ? pair.base : pair.shifted;
      const double truth = std::pow(rect.width(), 2.0 * h1) * std::pow(rect.height(), 2.0 * h2);
      const double sum = side == 0 ? sum_a[k] : sum_b[k];
      const double statistic = sum / truth;
      const double p = chi_square_p(statistic, n);
      outcomes.push_back({"increment variance " + describe(rect) + " vs " + g6(truth) + " (chi-square, " +
                              std::to_string(config.n_paths) + " dof, sample " + g6(sum / n) + ")",
                          statistic, p, threshold, p >= threshold});
    }
  }
  return outcomes;
}

std::pair<Point, Point> witness_points() {
  return {{std::numbers::e, 1.0}, {1.0, std::numbers::e}};
}

WitnessGap witness_gap(const FieldCovariance& fc) {
  const auto [t, s] = witness_points();
  const HurstPair& hurst = fc.hurst();
  // After dividing by the standard deviations e^{H1 + H2} both covariances
  // reduce to kernel values at the log-lag (1, -1); this keeps the gap exactly
  // 0 for the fBs kernel.
  const double rho0 = r0(hurst, {1.0, -1.0});
  const double gap = fc.kernel({1.0, -1.0}) - rho0;
  const double rho2 = rho0 * rho0;
  const double variance = (1.0 - rho2) * (1.0 - rho2) / (1.0 + rho2);
  const double required =
      gap == 0.0 ? std::numeric_limits<double>::infinity() : std::ceil(25.0 * variance / (gap * gap));
  return {field_cov(fc, t, s), fbs_covariance(hurst, t, s), rho0, gap, variance, required};
}

TestOutcome test_not_fbs(const FieldCovariance& fc, const ThetaCertificate& certificate,
                         const IncrementTestConfig& config, std::uint64_t seed) {
  if (config.n_paths < 2) throw DomainError("test_not_fbs needs at least 2 paths");
  if (!(config.significance > 0.0 && config.significance < 1.0)) {
    throw DomainError("significance must lie in (0, 1)");
  }
  const WitnessGap w = witness_gap(fc);
  const double n = static_cast<double>(config.n_paths);
  const double se = std::sqrt(w.variance / n);
  if (w.gap != 0.0 && std::fabs(w.gap) < 5.0 * se) {
    throw DegenerateWitness("witness gap " + g6(w.gap) + " is below 5 standard errors (" + g6(5.0 * se) + ") at " +
                                std::to_string(config.n_paths) + " paths; raise n_paths to at least " +
                                g6(w.required_paths),
                            w.required_paths);
  }

  const auto [t, s] = witness_points();
  const std::array<Point, 2> points{t, s};
  const CovarianceFactor factor = factorize_points(fc, points, certificate);
  const HurstPair& hurst = fc.hurst();
  const double inv_t = 1.0 / std::sqrt(fbs_covariance(hurst, t, t));
  const double inv_s = 1.0 / std::sqrt(fbs_covariance(hurst, s, s));
  const double beta = w.rho0 / (1.0 + w.rho0 * w.rho0);

  double total = 0.0;
  double carry = 0.0;
  for_each_block(factor, seed, config.n_paths, [&](std::uint64_t, const Eigen::MatrixXd& block) {
    const auto x = block.row(0).array() * inv_t;
    const auto y = block.row(1).array() * inv_s;
    const double part = (x * y - beta * (x.square() - 1.0) - beta * (y.square() - 1.0)).sum();
    const double next = total + part;
    carry += std::fabs(total) >= std::fabs(part) ? (total - next) + part : (part - next) + total;
    total = next;
  });
  const double estimate = (total + carry) / n;
  const double z = (estimate - w.rho0) / se;
  const double p = std::erfc(std::fabs(z) / std::numbers::sqrt2);
  return {"witness correlation " + g6(estimate) + " vs fBs " + g6(w.rho0) + " (analytic gap " + g6(w.gap) +
              ", se " + g6(se) + ", z-test)",
          z, p, config.significance, p < config.significance};
}

CovarianceEstimate empirical_covariance(std::span<const GridSample> samples,
                                        std::span<const std::pair<GridIndex, GridIndex>> pairs) {
  if (samples.size() < 2) throw DomainError("empirical_covariance needs at least 2 paths");
  const double n = static_cast<double>(samples.size());
  CovarianceEstimate est{Eigen::MatrixXd::Zero(1, static_cast<Eigen::Index>(pairs.size())),
                         Eigen::MatrixXd::Zero(1, static_cast<Eigen::Index>(pairs.size()))};
  std::vector<double> products(samples.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& [a, b] = pairs[k];
    double sum = 0.0;
    for (std::size_t p = 0; p < samples.size(); ++p) {
      const Eigen::MatrixXd& v = samples[p].values;
      products[p] = v(static_cast<Eigen::Index>(a.row), static_cast<Eigen::Index>(a.col)) *
                    v(static_cast<Eigen::Index>(b.row), static_cast<Eigen::Index>(b.col));
      sum += products[p];
    }
    // Leave-one-out means are (sum - y_p) / (n - 1); their average is the
    // full mean.
    const double mean = sum / n;
    double spread = 0.0;
    for (double y : products) {
      const double loo = (sum - y) / (n - 1.0);
      spread += (loo - mean) * (loo - mean);
    }
    est.value(0, static_cast<Eigen::Index>(k)) = mean;
    est.standard_error(0, static_cast<Eigen::Index>(k)) = std::sqrt((n - 1.0) / n * spread);
  }
  return est;
}

CovarianceEstimate empirical_covariance(std::span<const GridSample> samples) {
  if (samples.size() < 2) throw DomainError("empirical_covariance needs at least 2 paths");
  const GridSpec& grid = samples.front().grid;
  const std::size_t offset = grid.include_axes() ? 1 : 0;
  const std::size_t n1 = grid.t1_points().size();
  const std::size_t n2 = grid.t2_points().size();
  const auto d = static_cast<Eigen::Index>(n1 * n2);
  const double n = static_cast<double>(samples.size());

  Eigen::MatrixXd first = Eigen::MatrixXd::Zero(d, d);
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd x(d);
  for (const GridSample& sample : samples) {
    if (!(sample.grid == grid)) throw DomainError("samples must share one grid");
    for (std::size_t i = 0; i < n1; ++i) {
      for (std::size_t j = 0; j < n2; ++j) {
        x(static_cast<Eigen::Index>(i * n2 + j)) =
            sample.values(static_cast<Eigen::Index>(i + offset), static_cast<Eigen::Index>(j + offset));
      }
    }
    const Eigen::VectorXd sq = x.array().square();
    first.selfadjointView<Eigen::Lower>().rankUpdate(x);
    second.selfadjointView<Eigen::Lower>().rankUpdate(sq);
  }
  first = first.selfadjointView<Eigen::Lower>();
  second = second.selfadjointView<Eigen::Lower>();

  // The delete-one jackknife variance of a mean of products y_p reduces to
  // sum (y_p - mean)^2 / (n (n - 1)).
  CovarianceEstimate est;
  est.value = first / n;
  const Eigen::MatrixXd centred = (second - n * est.value.cwiseAbs2()).cwiseMax(0.0);
  est.standard_error = (centred / (n * (n - 1.0))).cwiseSqrt();
  return est;
}

}  // namespace aniso
