#pragma once

#include <complex>

namespace aniso {

/// Logarithm of the gamma function for complex arguments with Re z > 0,
/// by a Lanczos approximation (g = 7, 9 terms).
///
/// The real part is log|Gamma(z)|. The imaginary part is continuous in z but
/// is not reduced to the principal branch.
std::complex<double> log_gamma(std::complex<double> z);

/// log |Gamma(h + i x)|^2 for h > 0.
double log_abs_gamma_squared(double h, double x);

}  // namespace aniso
