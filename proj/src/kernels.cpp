#include "aniso/kernels.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "aniso/errors.hpp"

namespace aniso {

namespace {

void require_finite_lag(double v) {
  if (std::isnan(v)) throw DomainError("kernel lag is NaN");
}

void require_quarter_plane(Point p) {
  if (!(p.t1 >= 0.0) || !(p.t2 >= 0.0) || !std::isfinite(p.t1) || !std::isfinite(p.t2)) {
    throw DomainError("field coordinates must be finite and non-negative");
  }
}

// log(1 - e^{-a}) for a > 0.
double log1mexp(double a) {
  return a < std::numbers::ln2 ? std::log(-std::expm1(-a)) : std::log1p(-std::exp(-a));
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void require_hurst(double h) {
  if (!(h > 0.0 && h < 1.0)) {
    throw DomainError("Hurst index must lie in the open interval (0,1), got " + format_double(h));
  }
}

HurstPair::HurstPair(double h1, double h2) : h1_(h1), h2_(h2) {
  require_hurst(h1);
  require_hurst(h2);
}

double f_h(double h, double v) {
  require_hurst(h);
  require_finite_lag(v);
  const double a = std::fabs(v);
  if (a == 0.0) return 2.0;
  if (std::isinf(a)) return 0.0;
  // log(1 - (1 - e^{-a})^{2h}); past a = 40 it equals log(2h) - a to double
  // precision, and e^{-a} would go subnormal beyond a = 708.
  const double log_gap = a > 40.0 ? std::log(2.0 * h) - a : std::log(-std::expm1(2.0 * h * log1mexp(a)));
  return std::exp(-h * a) + std::exp(h * a + log_gap);
}

double damped_sinh(double h, double v) {
  require_finite_lag(v);
  if (v == 0.0) return 0.0;
  // e^{-h|v|} sinh(h v) = sign(v) (1 - e^{-2h|v|}) / 2
  const double half = -0.5 * std::expm1(-2.0 * h * std::fabs(v));
  return v > 0.0 ? half : -half;
}

double r0(const HurstPair& hurst, Lag v) {
  return 0.25 * f_h(hurst.h1(), v.v1) * f_h(hurst.h2(), v.v2);
}

StationaryKernel::StationaryKernel(HurstPair hurst, double theta) : hurst_(hurst), theta_(theta) {
  if (!std::isfinite(theta)) throw DomainError("theta must be finite");
}

double StationaryKernel::operator()(Lag v) const {
  const double base = r0(hurst_, v);
  if (theta_ == 0.0) return base;
  const double m = damped_sinh(hurst_.h1(), v.v1) * damped_sinh(hurst_.h2(), v.v2);
  return base * (1.0 + theta_ * m);
}

std::string StationaryKernel::descriptor() const {
  return "R_theta(H1=" + format_double(hurst_.h1()) + ",H2=" + format_double(hurst_.h2()) +
         ",theta=" + format_double(theta_) + ")";
}

double r_theta(const StationaryKernel& kernel, Lag v) { return kernel(v); }

double fbs_covariance(const HurstPair& hurst, Point t, Point s) {
  require_quarter_plane(t);
  require_quarter_plane(s);
  auto factor = [](double h, double a, double b) {
    const double e = 2.0 * h;
    return std::pow(a, e) + std::pow(b, e) - std::pow(std::fabs(a - b), e);
  };
  return 0.25 * factor(hurst.h1(), t.t1, s.t1) * factor(hurst.h2(), t.t2, s.t2);
}

}  // namespace aniso
