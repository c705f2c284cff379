#include "aniso/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <set>

#include <Eigen/Dense>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "aniso/binomial_series.hpp"
#include "aniso/errors.hpp"
#include "aniso/parallel.hpp"
#include "aniso/special.hpp"

namespace aniso {

namespace {

constexpr double kPi = std::numbers::pi;

void require_tolerance(double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw DomainError("tolerance must be positive and finite");
}

void require_frequency(double x) {
  if (!std::isfinite(x)) throw DomainError("frequency must be finite");
}

double lgamma_abs(double z) { return boost::math::lgamma(z); }

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double term) noexcept {
    const double t = sum_ + term;
    if (std::fabs(sum_) >= std::fabs(term)) {
      carry_ += (sum_ - t) + term;
    } else {
      carry_ += (term - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

// log cosh(y) for y >= 0 without overflow.
double log_cosh(double y) { return y + std::log1p(std::exp(-2.0 * y)) - std::numbers::ln2; }

struct TailEstimate {
  double value;
  double error;
};

// sum_{n >= m} binom(2h, n) (-1)^n w(n) for integer m >= 2 and h != 1/2, by
// Euler-Maclaurin. For n >= 2 the summands share one sign and |binom(2h, y)|
// extends to real y > 2h as Gamma(y - 2h) / (|Gamma(-2h)| Gamma(y + 1)); the
// ratio is taken directly, since a difference of lgamma values cancels for
// large y. w must be smooth and positive with logarithmic derivative dlogw.
// The error is the size of the next correction term under the local
// power-law decay, plus the quadrature error.
template <typename W, typename DW>
TailEstimate binomial_em_tail(double h, double m, W w, DW dlogw) {
  const double sigma = h < 0.5 ? -1.0 : 1.0;
  const double norm = 1.0 / std::fabs(boost::math::tgamma(-2.0 * h));
  auto term = [&](double y) {
    return sigma * boost::math::tgamma_delta_ratio(y - 2.0 * h, 1.0 + 2.0 * h) * norm * w(y);
  };
  boost::math::quadrature::exp_sinh<double> integrator;
  double integration_error = 0.0;
  double l1 = 0.0;
  // Substitute y = m e^s so the integrand decays exponentially in s.
  const double integral = integrator.integrate(
      [&](double s) {
        const double y = m * std::exp(s);
        return y > 1e250 ? 0.0 : term(y) * y;
      },
      0.0, std::numeric_limits<double>::infinity(), 1e-14, &integration_error, &l1);

  const double f_m = term(m);
  const double log_derivative = boost::math::digamma(m - 2.0 * h) - boost::math::digamma(m + 1.0) + dlogw(m);
  const double tail = integral + 0.5 * f_m - f_m * log_derivative / 12.0;
  const double p = -m * log_derivative;
  const double f3 = p * (p + 1.0) * (p + 2.0) * std::fabs(f_m) / (m * m * m);
  return {tail, f3 / 720.0 + integration_error};
}

}  // namespace

SeriesEvaluation inverse_offset_sum(double h, double tol) {
  require_hurst(h);
  require_tolerance(tol);

  std::size_t n_sum = 1024;
  for (;;) {
    BinomialStream binom(h);
    CompensatedSum head;
    for (std::size_t n = 1; n <= n_sum; ++n) {
      const double c = binom.next();
      const double sign = (n % 2 == 1) ? -1.0 : 1.0;
      head.add(sign * c / (static_cast<double>(n) - h));
    }
    if (h == 0.5) return {head.value(), n_sum, 0.0};

    const TailEstimate tail = binomial_em_tail(
        h, static_cast<double>(n_sum + 1), [h](double y) { return 1.0 / (y - h); },
        [h](double y) { return -1.0 / (y - h); });
    if (tail.error <= tol) return {head.value() + tail.value, n_sum, tail.error};
    n_sum *= 4;
    if (n_sum > kSeriesTermCap) {
      throw ToleranceNotReached("inverse_offset_sum: tolerance " + fmt(tol) + " not reached for H=" + fmt(h));
    }
  }
}

SeriesEvaluation a_series_detail(double h, double x, double tol) {
  require_hurst(h);
  require_tolerance(tol);
  require_frequency(x);

  const double x2 = x * x;
  const double leading = h / (h * h + x2);
  const SeriesEvaluation offset = inverse_offset_sum(h, 0.5 * tol);

  // a = leading - sum c_n (-1)^n [1/(n-h) - x^2 / ((n-h)((n-h)^2 + x^2))]
  //   = leading - offset + sum c_n (-1)^n x^2 / ((n-h)((n-h)^2 + x^2)).
  // The rest is summed until its rigorous tail bound is small enough. Past
  // max(1024, 4|x|) terms the Euler-Maclaurin tail is tried at every
  // quadrupling of the term count.
  CompensatedSum rest;
  std::size_t terms = 0;
  double tail = 0.0;
  if (x2 > 0.0) {
    BinomialStream binom(h);
    bool converged = false;
    std::size_t next_em = static_cast<std::size_t>(std::max(1024.0, std::ceil(4.0 * std::fabs(x))));
    for (std::size_t n = 1; n <= kSeriesTermCap; ++n) {
      const double c = binom.next();
      const double sign = (n % 2 == 1) ? -1.0 : 1.0;
      const double m = static_cast<double>(n) - h;
      rest.add(sign * c * x2 / (m * (m * m + x2)));
      terms = n;
      if (n >= 2 && c == 0.0) {
        converged = true;
        break;
      }
      if (n >= 2 && n % 16 == 0) {
        const double next = static_cast<double>(n + 1) - h;
        tail = binomial_tail_bound(h, n, std::fabs(c)) * std::min(1.0 / next, x2 / (next * next * next));
        if (tail <= 0.5 * tol) {
          converged = true;
          break;
        }
      }
      if (n == next_em) {
        const TailEstimate em = binomial_em_tail(
            h, static_cast<double>(n + 1),
            [h, x2](double y) { return x2 / ((y - h) * ((y - h) * (y - h) + x2)); },
            [h, x2](double y) { return -1.0 / (y - h) - 2.0 * (y - h) / ((y - h) * (y - h) + x2); });
        if (em.error <= 0.5 * tol) {
          rest.add(em.value);
          tail = em.error;
          converged = true;
          break;
        }
        next_em *= 4;
      }
    }
    if (!converged) {
      throw ToleranceNotReached("a_series: tolerance " + fmt(tol) + " not reached within " +
                                std::to_string(kSeriesTermCap) + " terms (H=" + fmt(h) + ", x=" + fmt(x) + ")");
    }
  }
  return {leading - offset.value + rest.value(), std::max(terms, offset.terms), tail + offset.error_bound};
}

double a_series(double h, double x, double tol) { return a_series_detail(h, x, tol).value; }

BDecomposition b_series_detail(double h, double x, double tol) {
  require_hurst(h);
  require_tolerance(tol);
  require_frequency(x);

  const double ax = std::fabs(x);
  if (ax == 0.0) return {0.0, 0.0, 0.0, 0.0, 0, 0.0};
  const double h2 = h * h;
  const double x2 = ax * ax;
  const double leading = 8.0 * ax * h2 / ((h2 + x2) * (9.0 * h2 + x2));

  // b = leading - sum c_n (-1)^n 4 n h |x| / (((n-h)^2 + x^2)((n+h)^2 + x^2))
  CompensatedSum positive;
  CompensatedSum negative;
  BinomialStream binom(h);
  std::size_t terms = 0;
  double tail = 0.0;
  bool converged = false;
  for (std::size_t n = 1; n <= kSeriesTermCap; ++n) {
    const double c = binom.next();
    const double sign = (n % 2 == 1) ? -1.0 : 1.0;
    const double nn = static_cast<double>(n);
    const double lo = nn - h;
    const double hi = nn + h;
    const double kernel = 4.0 * nn * h * ax / ((lo * lo + x2) * (hi * hi + x2));
    const double term = -sign * c * kernel;
    if (term >= 0.0) {
      positive.add(term);
    } else {
      negative.add(term);
    }
    terms = n;
    if (n >= 2 && c == 0.0) {
      converged = true;
      break;
    }
    if (n >= 2 && n % 16 == 0) {
      const double next = nn + 1.0;
      const double envelope = 4.0 * h * ax * next / std::pow(next * next - h2, 2);
      tail = binomial_tail_bound(h, n, std::fabs(c)) * envelope;
      if (tail <= tol) {
        converged = true;
        break;
      }
    }
  }
  if (!converged) {
    throw ToleranceNotReached("b_series: tolerance " + fmt(tol) + " not reached within " +
                              std::to_string(kSeriesTermCap) + " terms (H=" + fmt(h) + ", x=" + fmt(x) + ")");
  }
  const double magnitude = leading + positive.value() + negative.value();
  return {leading, positive.value(), negative.value(), x < 0.0 ? -magnitude : magnitude, terms, tail};
}

double b_series(double h, double x, double tol) { return b_series_detail(h, x, tol).value; }

double quadrature_horizon(double h, double tol) {
  require_hurst(h);
  require_tolerance(tol);
  return std::log(1.0 / tol) / std::min(h, 1.0 - h) + 10.0;
}

namespace {

// int_0^horizon f(v) dv for an integrand oscillating at angular frequency x.
// Panels are at most half a period long. The first panel uses tanh-sinh,
// which absorbs the |v|^{2H} behaviour at the origin; the rest use adaptive
// Gauss-Kronrod.
template <typename F>
double integrate_oscillatory(F f, double horizon, double x, double tol, const char* what) {
  const double ax = std::fabs(x);
  const double width = ax > 0.0 ? std::min(1.0, kPi / ax) : 1.0;
  const double rel = std::clamp(0.1 * tol, 1e-14, 1e-6);
  constexpr unsigned kMaxDepth = 12;

  auto fail = [&](double a, double b, double err) {
    throw QuadratureFailure(std::string(what) + ": refinement depth cap reached on [" + fmt(a) + ", " + fmt(b) +
                            "], error estimate " + fmt(err));
  };

  // Panel errors are judged against the accumulated L1 mass, so far-out
  // panels with negligible mass do not have to meet a relative target.
  CompensatedSum total;
  double mass = 0.0;
  {
    boost::math::quadrature::tanh_sinh<double> integrator(kMaxDepth + 3);
    double err = 0.0;
    double l1 = 0.0;
    const double b = std::min(width, horizon);
    total.add(integrator.integrate(f, 0.0, b, rel, &err, &l1));
    mass += l1;
    if (err > rel * mass * 10.0 + std::numeric_limits<double>::min()) fail(0.0, b, err);
  }
  const auto panels = static_cast<std::size_t>(std::ceil(horizon / width));
  for (std::size_t k = 1; k < panels; ++k) {
    const double a = width * static_cast<double>(k);
    const double b = std::min(horizon, a + width);
    if (b <= a) break;
    // Deep bisection at a target below roundoff only accumulates noise, so
    // the depth is raised step by step until the mass criterion holds.
    double err = 0.0;
    double l1 = 0.0;
    double value = 0.0;
    bool converged = false;
    for (unsigned depth : {0u, 3u, 6u, kMaxDepth}) {
      value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, depth, rel, &err, &l1);
      if (err <= rel * (mass + l1) * 10.0 + std::numeric_limits<double>::min()) {
        converged = true;
        break;
      }
    }
    if (!converged) fail(a, b, err);
    total.add(value);
    mass += l1;
  }
  return total.value();
}

}  // namespace

double a_quadrature(double h, double x, double tol) {
  require_hurst(h);
  require_frequency(x);
  const double horizon = quadrature_horizon(h, tol);
  return integrate_oscillatory([h, x](double v) { return f_h(h, v) * std::cos(x * v); }, horizon, x, tol,
                               "a_quadrature");
}

double b_quadrature(double h, double x, double tol) {
  require_hurst(h);
  require_frequency(x);
  const double horizon = quadrature_horizon(h, tol);
  if (x == 0.0) return 0.0;
  return integrate_oscillatory(
      [h, x](double v) { return f_h(h, v) * -std::expm1(-2.0 * h * v) * std::sin(x * v); }, horizon, x, tol,
      "b_quadrature");
}

double a_closed_form(double h, double x) {
  require_hurst(h);
  require_frequency(x);
  const double ax = std::fabs(x);
  const double lc = log_cosh(kPi * ax);
  const double cos_ph = std::cos(kPi * h);
  // cosh / (cosh^2 - cos^2) = 1 / (cosh (1 - cos^2 / cosh^2))
  const double log_ratio = -lc - std::log1p(-cos_ph * cos_ph * std::exp(-2.0 * lc));
  const double log_value = std::log(kPi) + lgamma_abs(1.0 + 2.0 * h) + std::log(std::sin(kPi * h)) -
                           std::log(h * h + ax * ax) - log_abs_gamma_squared(h, ax) + log_ratio;
  const double value = std::exp(log_value);
  if (!std::isfinite(value)) {
    throw SpecialFunctionError("a_closed_form: non-finite value at H=" + fmt(h) + ", x=" + fmt(x));
  }
  return value;
}

double gamma_modulus_ratio(double h, double x) {
  require_hurst(h);
  require_frequency(x);
  const double value = std::exp(2.0 * lgamma_abs(h) - log_abs_gamma_squared(h, x));
  if (!std::isfinite(value)) {
    throw SpecialFunctionError("gamma_modulus_ratio: overflow at H=" + fmt(h) + ", x=" + fmt(x));
  }
  return value;
}

double log_gamma_modulus_ratio(double h, double x) {
  require_hurst(h);
  require_frequency(x);
  return 2.0 * lgamma_abs(h) - log_abs_gamma_squared(h, x);
}

SpectralPair spectral_pair(double h, double x, double tol) {
  return {a_series(h, x, tol), b_series(h, x, tol), x, h};
}

double b_lower_bound(double h, double x) {
  require_hurst(h);
  const double h2 = h * h;
  const double x2 = x * x;
  return 8.0 * x * h2 / ((h2 + x2) * (9.0 * h2 + x2));
}

double a_lower_bound(double h, double x) {
  require_hurst(h);
  const double ax = std::fabs(x);
  const double scale = std::exp(lgamma_abs(1.0 + 2.0 * h) - 2.0 * lgamma_abs(h)) * std::sin(kPi * h) *
                       std::tanh(kPi * h) / 2.0;
  return scale / ((h * h + ax * ax) * std::max(ax, h));
}

double b_upper_bound(double h, double x) {
  require_hurst(h);
  const double ax = std::fabs(x);
  const double base = h * h + ax * ax;
  if (ax >= h) return 16.0 * h * h / (base * ax);
  return 4.0 * h / (base * (1.0 - h));
}

double theta_root_bound(double h) {
  require_hurst(h);
  const double gamma_ratio = std::exp(lgamma_abs(2.0 * h) - 2.0 * lgamma_abs(h));
  return gamma_ratio * (1.0 - h) / (4.0 * h) * std::sin(kPi * h) * std::tanh(kPi * h);
}

std::string to_string(CertificateMethod method) {
  switch (method) {
    case CertificateMethod::closed_form_bound:
      return "closed_form_bound";
    case CertificateMethod::gram_scan:
      return "gram_scan";
    case CertificateMethod::fourier_scan:
      return "fourier_scan";
  }
  return "unknown";
}

bool ThetaCertificate::covers(const FieldCovariance& fc) const {
  if (!(fc.hurst() == hurst)) return false;
  if (!kernel_descriptor.empty()) return fc.descriptor() == kernel_descriptor;
  const auto& kernel = fc.stationary_kernel();
  return kernel.has_value() && std::fabs(kernel->theta()) <= theta_bound;
}

ThetaCertificate theta_bound(const HurstPair& hurst) {
  const double b1 = theta_root_bound(hurst.h1());
  const double b2 = theta_root_bound(hurst.h2());
  const double root = std::min(b1, b2);
  return {hurst,
          root * root,
          CertificateMethod::closed_form_bound,
          0.0,
          "sqrt|theta| bound per coordinate: H1 -> " + fmt(b1) + ", H2 -> " + fmt(b2),
          {}};
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi >= lo) || n == 0) throw DomainError("log_grid needs 0 < lo <= hi and n >= 1");
  std::vector<double> grid(n);
  if (n == 1) {
    grid[0] = lo;
    return grid;
  }
  const double step = std::log(hi / lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) grid[i] = lo * std::exp(step * static_cast<double>(i));
  grid.back() = hi;
  return grid;
}

VerificationReport verify_main_inequality(const HurstPair& hurst, double theta, std::span<const double> x_grid,
                                          double tol) {
  VerificationReport report("spectral");
  const double half_root = 0.5 * std::sqrt(std::fabs(theta));
  std::vector<double> coordinates{hurst.h1()};
  if (hurst.h2() != hurst.h1()) coordinates.push_back(hurst.h2());

  nlohmann::json per_coordinate = nlohmann::json::array();
  for (double h : coordinates) {
    std::vector<double> margins(x_grid.size());
    std::vector<double> relative(x_grid.size());
    parallel_for(x_grid.size(), [&](std::size_t i) {
      const double a = a_series(h, x_grid[i], tol);
      const double b = b_series(h, x_grid[i], tol);
      margins[i] = a - half_root * std::fabs(b);
      relative[i] = margins[i] / a;
    });
    const auto worst = std::min_element(margins.begin(), margins.end());
    const std::size_t at = worst == margins.end() ? 0 : static_cast<std::size_t>(worst - margins.begin());
    const double min_margin = worst == margins.end() ? std::numeric_limits<double>::infinity() : *worst;
    const double x_at = x_grid.empty() ? 0.0 : x_grid[at];
    report.add_check("main_inequality_margin[H=" + fmt(h) + "]",
                     {{"h", h}, {"theta", theta}, {"x_at_min", x_at}, {"grid_points", x_grid.size()}, {"tol", tol}},
                     min_margin, ">", 0.0);
    const double min_relative = relative.empty() ? 1.0 : *std::min_element(relative.begin(), relative.end());
    per_coordinate.push_back({{"h", h}, {"min_margin", min_margin}, {"x_at_min", x_at},
                              {"min_relative_margin", min_relative}});
  }
  report.summary() = {{"theta", theta}, {"coordinates", per_coordinate}};
  return report;
}

VerificationReport verify_psd_gram(const KernelFunction& kernel, std::span<const Lag> points, double jitter_tol) {
  if (points.size() > kMaxGramPoints) {
    throw DomainError("verify_psd_gram accepts at most " + std::to_string(kMaxGramPoints) + " points");
  }
  std::set<std::pair<double, double>> distinct;
  for (const Lag& p : points) distinct.insert({p.v1, p.v2});
  if (distinct.size() < 2) throw DomainError("verify_psd_gram needs at least 2 distinct points");

  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const Lag& p = points[static_cast<std::size_t>(i)];
      const Lag& q = points[static_cast<std::size_t>(j)];
      gram(i, j) = kernel({p.v1 - q.v1, p.v2 - q.v2});
      gram(j, i) = gram(i, j);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw EigenFailure("verify_psd_gram: eigen-solver did not converge");
  const double lambda_min = solver.eigenvalues().minCoeff();
  const double lambda_max = solver.eigenvalues().maxCoeff();

  VerificationReport report("psd");
  report.add_check("gram_lambda_min", {{"points", points.size()}, {"jitter_tol", jitter_tol}, {"lambda_max", lambda_max}},
                   lambda_min, ">=", -jitter_tol * lambda_max);
  report.summary() = {{"lambda_min", lambda_min}, {"lambda_max", lambda_max}, {"points", points.size()}};
  return report;
}

VerificationReport fourier_inversion_scan(const StationaryKernel& kernel, std::span<const double> frequencies,
                                          double tol) {
  const HurstPair& hurst = kernel.hurst();
  const double theta = kernel.theta();
  VerificationReport report("spectral");

  // Integrability of R_theta: int |R_theta| <= (1/4 + |theta|/16) int F_H1 int F_H2.
  double l1_bound = 0.25 + std::fabs(theta) / 16.0;
  for (int i = 0; i < 2; ++i) {
    const double h = hurst[static_cast<std::size_t>(i)];
    const double mass = 2.0 * a_quadrature(h, 0.0, 1e-12);
    const double analytic = 2.0 / h + 2.0 * (3.0 - h) / ((1.0 - h) * (2.0 - h));
    report.add_check("integral_F_H[H=" + fmt(h) + "]", {{"h", h}}, mass, "<=", analytic);
    l1_bound *= mass;
  }
  report.add_check("l1_bound_R_theta", {{"theta", theta}}, l1_bound, "<", std::numeric_limits<double>::max());

  const std::size_t n = frequencies.size();
  std::vector<double> a1(n), b1(n), a2(n), b2(n);
  parallel_for(n, [&](std::size_t i) {
    const double x = std::fabs(frequencies[i]);
    a1[i] = a_series(hurst.h1(), x, 1e-13);
    b1[i] = b_series(hurst.h1(), x, 1e-13);
    a2[i] = a_series(hurst.h2(), x, 1e-13);
    b2[i] = b_series(hurst.h2(), x, 1e-13);
  });

  double min_density = std::numeric_limits<double>::infinity();
  double x_at = 0.0;
  double y_at = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (double sx : {1.0, -1.0}) {
        for (double sy : {1.0, -1.0}) {
          const double density = a1[i] * a2[j] - 0.25 * theta * (sx * b1[i]) * (sy * b2[j]);
          if (density < min_density) {
            min_density = density;
            x_at = sx * std::fabs(frequencies[i]);
            y_at = sy * std::fabs(frequencies[j]);
          }
        }
      }
    }
  }
  report.add_check("min_spectral_density", {{"theta", theta}, {"grid", n}, {"x_at_min", x_at}, {"y_at_min", y_at}},
                   min_density, ">=", -tol);
  report.summary() = {{"theta", theta}, {"min_density", min_density}, {"l1_bound", l1_bound}};
  return report;
}

std::optional<ThetaCertificate> certify_by_gram(const FieldCovariance& fc, std::span<const Lag> points,
                                                double jitter_tol) {
  const VerificationReport report = verify_psd_gram(fc.kernel_function(), points, jitter_tol);
  if (!report.pass()) return std::nullopt;
  const auto& kernel = fc.stationary_kernel();
  return ThetaCertificate{fc.hurst(),
                          kernel ? std::fabs(kernel->theta()) : 0.0,
                          CertificateMethod::gram_scan,
                          jitter_tol,
                          "gram lambda_min " + fmt(report.summary()["lambda_min"].get<double>()) + " over " +
                              std::to_string(points.size()) + " points",
                          fc.descriptor()};
}

std::optional<ThetaCertificate> certify_by_fourier(const StationaryKernel& kernel,
                                                   std::span<const double> frequencies, double tol) {
  const VerificationReport report = fourier_inversion_scan(kernel, frequencies, tol);
  if (!report.pass()) return std::nullopt;
  return ThetaCertificate{kernel.hurst(),
                          std::fabs(kernel.theta()),
                          CertificateMethod::fourier_scan,
                          tol,
                          "min spectral density " + fmt(report.summary()["min_density"].get<double>()) + " over " +
                              std::to_string(frequencies.size()) + " frequencies per axis",
                          kernel.descriptor()};
}

}  // namespace aniso
