#pragma once

#include <optional>
#include <string>

#include "aniso/kernels.hpp"

namespace aniso {

/// Covariance C(t,s) of the self-similar field X(t) = t1^{H1} t2^{H2} Y(ln t1, ln t2)
/// built from the covariance R of a stationary field Y.
class FieldCovariance {
 public:
  explicit FieldCovariance(StationaryKernel kernel);

  /// Arbitrary stationary covariance, used for controls that break the
  /// rectangular-increment structure.
  FieldCovariance(HurstPair hurst, KernelFunction kernel, std::string descriptor);

  const HurstPair& hurst() const noexcept { return hurst_; }
  double kernel(Lag v) const { return kernel_(v); }
  const KernelFunction& kernel_function() const noexcept { return kernel_; }
  const std::optional<StationaryKernel>& stationary_kernel() const noexcept { return stationary_; }
  const std::string& descriptor() const noexcept { return descriptor_; }

 private:
  HurstPair hurst_;
  KernelFunction kernel_;
  std::optional<StationaryKernel> stationary_;
  std::string descriptor_;
};

/// C(t,s) = (t1 s1)^{H1} (t2 s2)^{H2} R(ln(t1/s1), ln(t2/s2)); exactly 0 when
/// any coordinate of t or s is 0.
double field_cov(const FieldCovariance& fc, Point t, Point s);

/// Rectangle with lower corner u and upper corner v. Degenerate rectangles
/// (v_i == u_i) are allowed and have a zero increment.
struct RectIncrement {
  Point u;
  Point v;

  RectIncrement(Point lower, Point upper);

  double width() const noexcept { return v.t1 - u.t1; }
  double height() const noexcept { return v.t2 - u.t2; }
  RectIncrement shifted(double d1, double d2) const;
};

/// E[Delta_a X * Delta_b X], expanded bilinearly over the 4 x 4 corners.
double increment_covariance(const FieldCovariance& fc, const RectIncrement& a, const RectIncrement& b);

struct ResidualPair {
  double first;
  double second;
};

/// |E[X(t) - X(s1,t2)]^2 - |t1-s1|^{2H1} t2^{2H2}| and
/// |E[X(s1,t2) - X(s)]^2 - |t2-s2|^{2H2} s1^{2H1}|.
ResidualPair check_lemma1(const FieldCovariance& fc, Point t, Point s);

/// Mixed-product residuals:
/// E[X(t) X(s1,t2)] against t2^{2H2} (t1^{2H1} + s1^{2H1} - |t1-s1|^{2H1}) / 2 and
/// E[X(s1,t2) X(s)] against s1^{2H1} (t2^{2H2} + s2^{2H2} - |t2-s2|^{2H2}) / 2.
ResidualPair check_lemma2(const FieldCovariance& fc, Point t, Point s);

/// |E[X(t)X(s)] + E[X(t1,s2)X(s1,t2)] - (1/2) prod_i (t_i^{2H_i} + s_i^{2H_i} - |t_i-s_i|^{2H_i})|.
double check_lemma3(const FieldCovariance& fc, Point t, Point s);

/// |R(v) + R(v1,-v2) - F_{H1}(v1) F_{H2}(v2) / 2|.
double check_r1(const KernelFunction& kernel, const HurstPair& hurst, Lag v);
double check_r1(const StationaryKernel& kernel, Lag v);

}  // namespace aniso
