#include "aniso/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "aniso/errors.hpp"

namespace aniso {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoefficients{
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

std::complex<double> lanczos_log_gamma(std::complex<double> z) {
  z -= 1.0;
  std::complex<double> series = kLanczosCoefficients[0];
  for (std::size_t i = 1; i < kLanczosCoefficients.size(); ++i) {
    series += kLanczosCoefficients[i] / (z + static_cast<double>(i));
  }
  const std::complex<double> t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(series);
}

}  // namespace

std::complex<double> log_gamma(std::complex<double> z) {
  if (!(z.real() > 0.0)) throw DomainError("log_gamma requires Re z > 0");
  // The approximation is tuned for Re z >= 1/2; shift smaller arguments with
  // Gamma(z) = Gamma(z + 1) / z.
  const std::complex<double> value =
      z.real() < 0.5 ? lanczos_log_gamma(z + 1.0) - std::log(z) : lanczos_log_gamma(z);
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
    throw SpecialFunctionError("log_gamma produced a non-finite value");
  }
  return value;
}

double log_abs_gamma_squared(double h, double x) { return 2.0 * log_gamma({h, x}).real(); }

}  // namespace aniso
