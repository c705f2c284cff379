#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aniso/kernels.hpp"
#include "aniso/lamperti.hpp"
#include "aniso/report.hpp"

// One-dimensional transforms of the scalar kernel F_H, with the angular
// frequency convention
//   a(x) = int_0^inf F_H(v) cos(x v) dv,
//   b(x) = int_0^inf F_H(v) (1 - e^{-2Hv}) sin(x v) dv.
// a is even and b is odd in x. R_theta is positive definite when
// a(x) > (sqrt|theta| / 2) |b(x)| for both coordinates, because its Fourier
// transform factorizes as a_1(x) a_2(y) - (theta / 4) b_1(x) b_2(y).
//
// Three independent routes are provided for a (series, quadrature, gamma
// closed form) and two for b (series, quadrature).

namespace aniso {

inline constexpr double kDefaultSpectralTol = 1e-12;
inline constexpr std::size_t kSeriesTermCap = 1'000'000;

struct SpectralPair {
  double a;
  double b;
  double x;
  double h;
};

struct SeriesEvaluation {
  double value;
  std::size_t terms;
  double error_bound;
};

/// Positivity split of the b series at |x|:
///   b = leading + positive + negative,
/// leading = 8|x|H^2 / ((H^2 + x^2)(9H^2 + x^2)). For H <= 1/2 `negative` is
/// zero; for H > 1/2 only the n = 1 term is positive. `value` carries the sign
/// of x, the components do not.
struct BDecomposition {
  double leading;
  double positive;
  double negative;
  double value;
  std::size_t terms;
  double error_bound;
};

/// sum_{n>=1} binom(2h,n) (-1)^n / (n - h), the frequency-independent part of
/// the a series. The tail beyond the summed terms is estimated by
/// Euler-Maclaurin on the gamma-function form of |binom(2h,n)|.
SeriesEvaluation inverse_offset_sum(double h, double tol);

/// a(x) = H/(H^2+x^2) - sum_n binom(2H,n) (-1)^n (n-H)/((n-H)^2+x^2).
SeriesEvaluation a_series_detail(double h, double x, double tol = kDefaultSpectralTol);
double a_series(double h, double x, double tol = kDefaultSpectralTol);

BDecomposition b_series_detail(double h, double x, double tol = kDefaultSpectralTol);
double b_series(double h, double x, double tol = kDefaultSpectralTol);

/// Integration horizon ln(1/tol) / min(h, 1-h) + 10 for the quadrature route.
double quadrature_horizon(double h, double tol);

/// Adaptive quadrature of the defining integrals on [0, quadrature_horizon].
/// Throws QuadratureFailure when refinement hits its depth cap.
double a_quadrature(double h, double x, double tol = kDefaultSpectralTol);
double b_quadrature(double h, double x, double tol = kDefaultSpectralTol);

/// pi Gamma(1+2H) sin(pi H) cosh(pi x) /
///   ((H^2 + x^2) |Gamma(H + ix)|^2 (cosh^2(pi x) - cos^2(pi H))).
double a_closed_form(double h, double x);

/// Gamma(H)^2 / |Gamma(H + ix)|^2 = prod_{n>=0} (1 + x^2 / (n + H)^2).
/// Throws SpecialFunctionError once the ratio overflows (x around 225).
double gamma_modulus_ratio(double h, double x);
double log_gamma_modulus_ratio(double h, double x);

SpectralPair spectral_pair(double h, double x, double tol = kDefaultSpectralTol);

/// 8|x|H^2 / ((H^2+x^2)(9H^2+x^2)); strict lower bound for b(x), x > 0.
double b_lower_bound(double h, double x);

/// Gamma(1+2H) sin(pi H) tanh(pi H) / (2 Gamma(H)^2 (H^2+x^2) max(x, H)).
double a_lower_bound(double h, double x);

/// 16H^2 / ((H^2+x^2) x) for x >= H, 4H / ((H^2+x^2)(1-H)) below. Derived for
/// H > 1/2 only.
double b_upper_bound(double h, double x);

/// Single-coordinate bound on sqrt|theta|:
/// Gamma(2H)/Gamma(H)^2 * (1-H)/(4H) * sin(pi H) * tanh(pi H).
double theta_root_bound(double h);

enum class CertificateMethod { closed_form_bound, gram_scan, fourier_scan };

std::string to_string(CertificateMethod method);

/// Evidence that a kernel is positive semidefinite.
///
/// A closed-form certificate covers every R_theta with the same Hurst pair and
/// |theta| <= theta_bound. Scan certificates are bound to one kernel
/// descriptor; their theta_bound is the |theta| that was scanned (0 for
/// kernels that are not of R_theta form).
struct ThetaCertificate {
  HurstPair hurst;
  double theta_bound;
  CertificateMethod method;
  double tolerance;
  std::string evidence;
  std::string kernel_descriptor;

  bool covers(const FieldCovariance& fc) const;
};

/// max admissible |theta| = min_i theta_root_bound(H_i)^2.
ThetaCertificate theta_bound(const HurstPair& hurst);

/// Checks a(x) - (sqrt|theta|/2)|b(x)| > 0 for each coordinate H on x_grid.
VerificationReport verify_main_inequality(const HurstPair& hurst, double theta, std::span<const double> x_grid,
                                          double tol = kDefaultSpectralTol);

inline constexpr double kDefaultJitterTol = 1e-8;
inline constexpr std::size_t kMaxGramPoints = 2048;

/// Gram matrix G_ij = R(p_i - p_j); passes iff lambda_min >= -jitter_tol * lambda_max.
VerificationReport verify_psd_gram(const KernelFunction& kernel, std::span<const Lag> points,
                                   double jitter_tol = kDefaultJitterTol);

/// Evaluates a_1(x) a_2(y) - (theta/4) b_1(x) b_2(y) on the signed grid
/// {+-f} x {+-f}; passes iff the minimum is >= -tol. Also reports the L1 bound of
/// R_theta used to justify the Fourier transform.
VerificationReport fourier_inversion_scan(const StationaryKernel& kernel, std::span<const double> frequencies,
                                          double tol = kDefaultSpectralTol);

std::optional<ThetaCertificate> certify_by_gram(const FieldCovariance& fc, std::span<const Lag> points,
                                                double jitter_tol = kDefaultJitterTol);
std::optional<ThetaCertificate> certify_by_fourier(const StationaryKernel& kernel,
                                                   std::span<const double> frequencies,
                                                   double tol = kDefaultSpectralTol);

/// n log-spaced points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t n);

}  // namespace aniso
