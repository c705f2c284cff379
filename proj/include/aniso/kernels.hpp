#pragma once

#include <cstddef>
#include <functional>
#include <string>

namespace aniso {

/// Anisotropic Hurst index (H1, H2), both strictly inside (0, 1).
class HurstPair {
 public:
  HurstPair(double h1, double h2);

  double h1() const noexcept { return h1_; }
  double h2() const noexcept { return h2_; }
  double operator[](std::size_t i) const { return i == 0 ? h1_ : h2_; }

  friend bool operator==(const HurstPair&, const HurstPair&) = default;

 private:
  double h1_;
  double h2_;
};

/// Lag of a stationary kernel, a vector in R^2.
struct Lag {
  double v1;
  double v2;
};

/// Parameter point of a self-similar field, in the closed quarter-plane.
struct Point {
  double t1;
  double t2;
};

/// Throws DomainError unless 0 < h < 1.
void require_hurst(double h);

/// F_H(v) = 2 cosh(Hv) - |2 sinh(v/2)|^{2H}.
///
/// Evaluated for every v != 0 in the factored form
///   e^{-H|v|} + e^{H|v|} (1 - (1 - e^{-|v|})^{2H}),
/// which has no cancellation between large terms and no overflow.
double f_h(double h, double v);

/// e^{-H|v|} sinh(Hv), bounded by 1/2 in absolute value.
double damped_sinh(double h, double v);

/// R0(v) = F_{H1}(v1) F_{H2}(v2) / 4, the stationary kernel of the
/// fractional Brownian sheet under the Lamperti transform.
double r0(const HurstPair& hurst, Lag v);

/// Product kernel R_theta = R0 * (1 + theta * damped_sinh(H1,v1) *
/// damped_sinh(H2,v2)). theta == 0 gives R0.
///
/// theta is not restricted here; positive definiteness is certified
/// separately (see spectral.hpp).
class StationaryKernel {
 public:
  explicit StationaryKernel(HurstPair hurst, double theta = 0.0);

  const HurstPair& hurst() const noexcept { return hurst_; }
  double theta() const noexcept { return theta_; }

  double operator()(Lag v) const;

  /// Stable text form, e.g. "R_theta(H1=0.5,H2=0.5,theta=0.001)".
  std::string descriptor() const;

 private:
  HurstPair hurst_;
  double theta_;
};

double r_theta(const StationaryKernel& kernel, Lag v);

/// Covariance of the normalized fractional Brownian sheet,
/// (1/4) prod_i (t_i^{2H_i} + s_i^{2H_i} - |t_i - s_i|^{2H_i}).
double fbs_covariance(const HurstPair& hurst, Point t, Point s);

/// Any covariance function on R^2 lags.
using KernelFunction = std::function<double(Lag)>;

}  // namespace aniso
