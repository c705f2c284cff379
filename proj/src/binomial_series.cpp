#include "aniso/binomial_series.hpp"

#include <cmath>

#include "aniso/errors.hpp"
#include "aniso/kernels.hpp"

namespace aniso {

BinomialStream::BinomialStream(double h) : two_h_(2.0 * h) { require_hurst(h); }

double binomial_tail_bound(double h, std::size_t n, double abs_coefficient) {
  if (n < 2) throw DomainError("binomial tail bound needs N >= 2");
  const double nn = static_cast<double>(n);
  const double k = std::pow(nn, 1.0 + 2.0 * h) * abs_coefficient;
  return k * std::pow(nn, -2.0 * h) / (2.0 * h);
}

double BinomialSeries::alternating_sum() const {
  double sum = 0.0;
  double sign = 1.0;
  for (double c : coefficients) {
    sum += sign * c;
    sign = -sign;
  }
  return sum;
}

BinomialSeries binom_coeffs(double h, std::size_t n_max) {
  require_hurst(h);
  if (n_max < 1) throw DomainError("binom_coeffs needs n_max >= 1");
  BinomialSeries series{h, {}, 0.0, 0.0};
  series.coefficients.reserve(n_max);
  BinomialStream stream(h);
  for (std::size_t n = 1; n <= n_max; ++n) series.coefficients.push_back(stream.next());
  if (n_max == 1) {
    // The monotone envelope starts at n = 2; account for that term directly.
    const double second = std::fabs(stream.next());
    series.tail_constant = std::pow(2.0, 1.0 + 2.0 * h) * second;
    series.tail_bound = second + binomial_tail_bound(h, 2, second);
    return series;
  }
  const double last = std::fabs(series.coefficients.back());
  series.tail_constant = std::pow(static_cast<double>(n_max), 1.0 + 2.0 * h) * last;
  series.tail_bound = binomial_tail_bound(h, n_max, last);
  return series;
}

}  // namespace aniso
