#include "aniso/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <random>

#include "aniso/cli/output.hpp"
#include "aniso/errors.hpp"
#include "aniso/kernels.hpp"
#include "aniso/lamperti.hpp"
#include "aniso/parallel.hpp"
#include "aniso/sampler.hpp"
#include "aniso/spectral.hpp"
#include "aniso/stats.hpp"

namespace aniso::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Uniform on [lo, hi) from the top 53 bits; portable across standard libraries.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : engine_(seed) {}
  double operator()(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(engine_() >> 11) * 0x1p-53);
  }

 private:
  std::mt19937_64 engine_;
};

std::vector<double> linear_grid(const Range& r) {
  std::vector<double> grid(r.count);
  for (std::size_t i = 0; i < r.count; ++i) {
    grid[i] = r.count == 1 ? r.lo : r.lo + (r.hi - r.lo) * static_cast<double>(i) / static_cast<double>(r.count - 1);
  }
  return grid;
}

int finish(const std::string& command, const RunConfig& config, const VerificationReport& report,
           Clock::time_point start) {
  const auto path = write_report(command, config, report, seconds_since(start));
  std::cout << command << ": " << (report.pass() ? "pass" : "FAIL") << " (" << report.checks().size() << " checks, "
            << report.failures() << " failed) -> " << path.string() << "\n";
  for (const CheckRecord& c : report.checks()) {
    if (!c.pass) {
      std::cout << "  failed: " << c.name << ": " << g17(c.value) << " " << c.relation << " " << g17(c.threshold)
                << "\n";
    }
  }
  return report.pass() ? kPass : kCheckFailure;
}

std::vector<double> coordinates(const HurstPair& hurst) {
  std::vector<double> hs{hurst.h1()};
  if (hurst.h2() != hurst.h1()) hs.push_back(hurst.h2());
  return hs;
}

// The analytic bound when it applies, otherwise a Gram scan over the points'
// log-coordinates, whose Gram matrix is the grid covariance up to scaling.
std::optional<ThetaCertificate> certificate_for(const FieldCovariance& fc, std::span<const Point> points,
                                                double jitter_tol) {
  ThetaCertificate analytic = theta_bound(fc.hurst());
  if (analytic.covers(fc)) return analytic;
  std::vector<Lag> lags;
  for (const Point& p : points) lags.push_back({std::log(p.t1), std::log(p.t2)});
  if (lags.size() < 2) return std::nullopt;
  return certify_by_gram(fc, lags, jitter_tol);
}

}  // namespace

std::vector<RectanglePair> default_rectangle_pairs() {
  return {{RectIncrement({1.0, 1.0}, {2.0, 2.0}), RectIncrement({3.0, 2.0}, {4.0, 3.0})},
          {RectIncrement({0.5, 2.0}, {1.0, 3.0}), RectIncrement({2.5, 0.5}, {3.0, 1.5})},
          {RectIncrement({0.0, 0.0}, {1.0, 1.0}), RectIncrement({4.0, 4.0}, {5.0, 5.0})}};
}

int cmd_kernel_eval(const RunConfig& config) {
  const auto start = Clock::now();
  const StationaryKernel kernel(config.hurst, config.resolved_theta());
  const std::vector<double> lags = linear_grid(config.lag_grid);
  const double h1 = config.hurst.h1();
  const double h2 = config.hurst.h2();

  CsvTable table({"v1", "v2", "F_H1", "F_H2", "R0", "R_theta"});
  double max_symmetry = 0.0;
  double max_r1 = 0.0;
  for (double v1 : lags) {
    for (double v2 : lags) {
      const double r = kernel({v1, v2});
      table.add_row({v1, v2, f_h(h1, v1), f_h(h2, v2), r0(config.hurst, {v1, v2}), r});
      max_symmetry = std::max(max_symmetry, std::fabs(r - kernel({-v1, -v2})));
      max_r1 = std::max(max_r1, check_r1(kernel, {v1, v2}));
    }
  }
  write_atomic(std::filesystem::path(config.out) / "kernel_values.csv", table.str());

  VerificationReport report("identity");
  report.add_check("R_theta(0,0) - 1", {}, std::fabs(kernel({0.0, 0.0}) - 1.0), "<=", 1e-15);
  report.add_check("max |R(v) - R(-v)| on lag grid", {{"points", lags.size() * lags.size()}}, max_symmetry, "<=",
                   1e-14);
  report.add_check("max r1 residual on lag grid", {{"points", lags.size() * lags.size()}}, max_r1, "<=", 1e-14);
  report.summary() = {{"csv", "kernel_values.csv"}, {"rows", lags.size() * lags.size()},
                      {"kernel", kernel.descriptor()}};
  return finish("kernel-eval", config, report, start);
}

int cmd_verify(const RunConfig& config) {
  const auto start = Clock::now();
  const double theta = config.resolved_theta();
  const StationaryKernel kernel(config.hurst, theta);
  const FieldCovariance fc(kernel);
  VerificationReport report("identity");
  Uniform uniform(config.seed);

  // Identities of the kernel and of the Lamperti-lifted covariance at random
  // arguments, as relative residuals.
  double r1 = 0.0, symmetry = 0.0, folded = 0.0, lemma1 = 0.0, lemma2 = 0.0, lemma3 = 0.0;
  for (std::size_t i = 0; i < config.identity_samples; ++i) {
    const Lag v{uniform(-5.0, 5.0), uniform(-5.0, 5.0)};
    const double scale = r0(config.hurst, v);
    r1 = std::max(r1, check_r1(kernel, v) / (2.0 * scale));
    symmetry = std::max(symmetry, std::fabs(kernel(v) - kernel({-v.v1, -v.v2})) / scale);
    folded = std::max(folded, std::fabs(kernel(v) + kernel({-v.v1, v.v2}) - 2.0 * scale) / (2.0 * scale));

    const Point t{uniform(0.1, 10.0), uniform(0.1, 10.0)};
    const Point s{uniform(0.1, 10.0), uniform(0.1, 10.0)};
    const double size = std::pow(std::max(t.t1, s.t1), 2.0 * config.hurst.h1()) *
                        std::pow(std::max(t.t2, s.t2), 2.0 * config.hurst.h2());
    const ResidualPair l1 = check_lemma1(fc, t, s);
    const ResidualPair l2 = check_lemma2(fc, t, s);
    lemma1 = std::max({lemma1, l1.first / size, l1.second / size});
    lemma2 = std::max({lemma2, l2.first / size, l2.second / size});
    lemma3 = std::max(lemma3, check_lemma3(fc, t, s) / size);
  }
  const nlohmann::json sampled{{"samples", config.identity_samples}, {"seed", config.seed}};
  report.add_check("r1 relative residual", sampled, r1, "<=", 1e-12);
  report.add_check("R(v) = R(-v) relative residual", sampled, symmetry, "<=", 1e-12);
  report.add_check("R(v) + R(-v1,v2) = 2 R0(v) relative residual", sampled, folded, "<=", 1e-12);
  report.add_check("increment variance identities relative residual", sampled, lemma1, "<=", 1e-10);
  report.add_check("mixed covariance identities relative residual", sampled, lemma2, "<=", 1e-10);
  report.add_check("two-corner covariance identity relative residual", sampled, lemma3, "<=", 1e-10);

  const ThetaCertificate bound = theta_bound(config.hurst);
  report.add_check("|theta| within analytic bound", {{"theta", theta}}, std::fabs(theta), "<=", bound.theta_bound);

  const std::vector<double> xs = log_grid(config.frequency_grid.lo, config.frequency_grid.hi,
                                          config.frequency_grid.count);
  report.merge(verify_main_inequality(config.hurst, theta, xs, config.tol), "spectral: ");

  std::vector<double> freqs{0.0};
  const auto fourier = log_grid(config.fourier_grid.lo, config.fourier_grid.hi, config.fourier_grid.count);
  freqs.insert(freqs.end(), fourier.begin(), fourier.end());
  report.merge(fourier_inversion_scan(kernel, freqs, config.tol), "fourier: ");

  double worst_gram = std::numeric_limits<double>::infinity();
  for (std::size_t set = 0; set < config.gram_sets; ++set) {
    std::vector<Lag> points(config.gram_points);
    for (Lag& p : points) p = {uniform(-config.gram_extent, config.gram_extent),
                               uniform(-config.gram_extent, config.gram_extent)};
    const VerificationReport gram = verify_psd_gram(fc.kernel_function(), points, config.jitter_tol);
    report.merge(gram, "gram set " + std::to_string(set) + ": ");
    worst_gram = std::min(worst_gram, gram.summary()["lambda_min"].get<double>() /
                                          gram.summary()["lambda_max"].get<double>());
  }
  report.summary() = {{"theta", theta},
                      {"theta_bound", bound.theta_bound},
                      {"kernel", kernel.descriptor()},
                      {"worst_gram_lambda_ratio", worst_gram}};
  return finish("verify", config, report, start);
}

int cmd_theta_bound(const RunConfig& config) {
  const auto start = Clock::now();
  const ThetaCertificate cert = theta_bound(config.hurst);
  VerificationReport report("spectral");
  const double b1 = theta_root_bound(config.hurst.h1());
  const double b2 = theta_root_bound(config.hurst.h2());
  report.add_check("sqrt|theta| bound H1", {{"h", config.hurst.h1()}}, b1, ">", 0.0);
  report.add_check("sqrt|theta| bound H2", {{"h", config.hurst.h2()}}, b2, ">", 0.0);
  report.summary() = {{"root_bound_h1", b1},
                      {"root_bound_h2", b2},
                      {"theta_bound", cert.theta_bound},
                      {"theta_auto", 0.9 * cert.theta_bound},
                      {"method", to_string(cert.method)}};
  std::cout << "theta_bound " << g17(cert.theta_bound) << "\n";
  return finish("theta-bound", config, report, start);
}

int cmd_spectral(const RunConfig& config) {
  const auto start = Clock::now();
  const double theta = config.resolved_theta();
  const double half_root = 0.5 * std::sqrt(std::fabs(theta));
  const std::vector<double> xs = log_grid(config.frequency_grid.lo, config.frequency_grid.hi,
                                          config.frequency_grid.count);
  VerificationReport report("spectral");
  nlohmann::json files = nlohmann::json::array();
  for (double h : coordinates(config.hurst)) {
    std::vector<std::vector<double>> rows(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) {
      const double x = xs[i];
      const double a = a_series(h, x, config.tol);
      const double b = b_series(h, x, config.tol);
      rows[i] = {x, a, b, a_closed_form(h, x), log_gamma_modulus_ratio(h, x), a - half_root * std::fabs(b)};
    });
    CsvTable table({"x", "a", "b", "a_closed_form", "log_gamma_modulus_ratio", "margin"});
    double min_a = std::numeric_limits<double>::infinity();
    double min_margin = min_a;
    double min_b_excess = min_a;
    double worst_closed = 0.0;
    double min_gamma = min_a;
    for (const auto& row : rows) {
      table.add_row(row);
      const double x = row[0];
      min_a = std::min(min_a, row[1]);
      min_b_excess = std::min(min_b_excess, row[2] - b_lower_bound(h, x));
      worst_closed = std::max(worst_closed, std::fabs(row[3] - row[1]));
      const double px = std::numbers::pi * x;
      // log(sinh(px) / px) without overflow.
      const double log_sinhc = px + std::log1p(-std::exp(-2.0 * px)) - std::log(2.0 * px);
      min_gamma = std::min(min_gamma, row[4] - log_sinhc);
      min_margin = std::min(min_margin, row[5]);
    }
    char name[64];
    std::snprintf(name, sizeof name, "spectral_H%.6g.csv", h);
    write_atomic(std::filesystem::path(config.out) / name, table.str());
    files.push_back(name);
    const nlohmann::json in{{"h", h}, {"points", xs.size()}};
    const std::string tag = "[H=" + nlohmann::json(h).dump() + "] ";
    report.add_check(tag + "min a(x)", in, min_a, ">", 0.0);
    report.add_check(tag + "min b(x) - lower bound", in, min_b_excess, ">", 0.0);
    report.add_check(tag + "max |a closed form - a series|", in, worst_closed, "<", 1e-8);
    report.add_check(tag + "min log gamma ratio - log(sinh(pi x)/(pi x))", in, min_gamma, ">=", 0.0);
    report.add_check(tag + "min a - (sqrt|theta|/2)|b|", {{"h", h}, {"theta", theta}}, min_margin, ">", 0.0);
  }
  report.summary() = {{"theta", theta}, {"files", files}};
  return finish("spectral", config, report, start);
}

int cmd_simulate(const RunConfig& config) {
  const auto start = Clock::now();
  const double theta = config.resolved_theta();
  const FieldCovariance fc{StationaryKernel(config.hurst, theta)};
  const std::vector<double> times = linear_grid(config.time_grid);
  const GridSpec grid(times, times, config.include_axes);
  const std::vector<Point> points = grid.interior_points();

  VerificationReport report("simulation");
  const auto certificate = certificate_for(fc, points, config.jitter_tol);
  if (!certificate) {
    report.add_check("PSD certificate available", {{"theta", theta}}, 0.0, ">", 0.0);
    report.summary() = {{"error", "no positive semidefiniteness certificate for " + fc.descriptor()}};
    std::cerr << "simulate: refusing to sample, " << fc.descriptor() << " is not certified\n";
    return finish("simulate", config, report, start);
  }
  const GridFactor factor = factorize_covariance(fc, grid, *certificate);
  const std::vector<GridSample> samples = sample(factor, config.seed, config.paths);

  const std::filesystem::path dir(config.out);
  for (std::size_t p = 0; p < std::min(config.write_paths, samples.size()); ++p) {
    write_atomic(dir / ("sample_" + std::to_string(p) + ".csv"), to_csv(samples[p]));
    write_atomic(dir / ("sample_" + std::to_string(p) + ".json"), to_json(samples[p]).dump() + "\n");
  }

  report.add_check("eigenvalue floor before clipping", {{"clip_tol", factor.factor.clip_tol}},
                   factor.factor.lambda_min, ">=", -config.jitter_tol * factor.factor.lambda_max);
  if (samples.size() >= 2) {
    const CovarianceEstimate est = empirical_covariance(samples);
    const Eigen::MatrixXd truth = covariance_matrix(fc, points);
    std::size_t within = 0;
    nlohmann::json variances = nlohmann::json::array();
    const auto d = truth.rows();
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j <= i; ++j) {
        if (std::fabs(est.value(i, j) - truth(i, j)) <= 4.0 * est.standard_error(i, j)) ++within;
      }
      variances.push_back({{"t1", points[static_cast<std::size_t>(i)].t1},
                           {"t2", points[static_cast<std::size_t>(i)].t2},
                           {"analytic", truth(i, i)},
                           {"empirical", est.value(i, i)},
                           {"jackknife_se", est.standard_error(i, i)}});
    }
    const double entries = static_cast<double>(d * (d + 1) / 2);
    report.add_check("fraction of covariance entries within 4 jackknife SE", {{"paths", samples.size()}},
                     static_cast<double>(within) / entries, ">=", 0.99);
    report.summary()["variance_table"] = std::move(variances);
  }
  report.summary()["certificate"] = to_string(certificate->method);
  report.summary()["kernel"] = fc.descriptor();
  report.summary()["paths"] = samples.size();
  return finish("simulate", config, report, start);
}

int cmd_test(const RunConfig& config) {
  const auto start = Clock::now();
  const double theta = config.resolved_theta();
  const FieldCovariance fc{StationaryKernel(config.hurst, theta)};
  VerificationReport report("monte_carlo");

  IncrementTestConfig test_config;
  test_config.n_paths = config.paths;
  test_config.rectangles = default_rectangle_pairs();
  test_config.significance = config.significance;

  const ThetaCertificate bound = theta_bound(config.hurst);
  std::vector<Point> corners;
  for (const RectanglePair& pair : test_config.rectangles) {
    for (const RectIncrement& r : {pair.base, pair.shifted}) {
      for (const Point& p : {r.u, r.v, Point{r.u.t1, r.v.t2}, Point{r.v.t1, r.u.t2}}) {
        if (p.t1 > 0.0 && p.t2 > 0.0) corners.push_back(p);
      }
    }
  }
  corners.push_back(witness_points().first);
  corners.push_back(witness_points().second);
  const auto certificate = certificate_for(fc, corners, config.jitter_tol);
  if (!certificate) {
    report.add_check("PSD certificate available", {{"theta", theta}}, 0.0, ">", 0.0);
    return finish("test", config, report, start);
  }

  try {
    test_config.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  nlohmann::json outcomes = nlohmann::json::array();
  for (const TestOutcome& o : test_increment_stationarity(fc, *certificate, test_config, config.seed)) {
    report.add_check(o.description, {{"statistic", o.statistic}, {"paths", config.paths}}, o.p_value, ">=",
                     o.threshold);
    outcomes.push_back(to_json(o));
  }

  const WitnessGap gap = witness_gap(fc);
  IncrementTestConfig witness_config = test_config;
  witness_config.n_paths = config.witness_paths.value_or(
      std::isfinite(gap.required_paths) ? std::max<std::size_t>(config.paths, static_cast<std::size_t>(gap.required_paths))
                                        : config.paths);
  nlohmann::json witness{{"gap", gap.gap}, {"rho0", gap.rho0}, {"required_paths", gap.required_paths},
                         {"paths", witness_config.n_paths}};
  try {
    const TestOutcome o = test_not_fbs(fc, *certificate, witness_config, config.seed);
    outcomes.push_back(to_json(o));
    const nlohmann::json in{{"statistic", o.statistic}, {"paths", witness_config.n_paths}, {"gap", gap.gap}};
    if (gap.gap == 0.0) {
      // theta = 0 is the fBs itself; the test must then keep the hypothesis.
      report.add_check("fBs hypothesis retained at witness: " + o.description, in, o.p_value, ">=",
                       config.significance);
    } else {
      report.add_check("fBs hypothesis rejected at witness: " + o.description, in, o.p_value, "<",
                       config.significance);
    }
  } catch (const DegenerateWitness& e) {
    witness["error"] = e.what();
    report.add_check("witness gap resolvable at configured paths", {{"required_paths", e.required_paths()}},
                     static_cast<double>(witness_config.n_paths), ">=", e.required_paths());
    std::cerr << "test: " << e.what() << "\n";
  }
  report.summary() = {{"theta", theta},
                      {"kernel", fc.descriptor()},
                      {"certificate", to_string(certificate->method)},
                      {"theta_bound", bound.theta_bound},
                      {"witness", witness},
                      {"outcomes", outcomes}};
  return finish("test", config, report, start);
}

}  // namespace aniso::cli
