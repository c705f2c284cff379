#pragma once

#include <cstddef>
#include <vector>

namespace aniso {

/// Generalized binomial coefficients binom(2h, n) for n = 1, 2, ..., produced
/// by the running product prod_{k=1..n} (2h - k + 1) / k.
class BinomialStream {
 public:
  explicit BinomialStream(double h);

  /// Advances to the next index and returns binom(2h, n).
  double next() noexcept {
    ++n_;
    value_ *= (two_h_ - static_cast<double>(n_) + 1.0) / static_cast<double>(n_);
    return value_;
  }
  std::size_t index() const noexcept { return n_; }
  double value() const noexcept { return value_; }

 private:
  double two_h_;
  std::size_t n_ = 0;
  double value_ = 1.0;
};

/// Bound on sum_{n>N} |binom(2h, n)| given |binom(2h, N)|.
///
/// n^{1+2h} |binom(2h, n)| is non-increasing for n >= 2, so
/// |binom(2h, n)| <= K n^{-(1+2h)} with K = N^{1+2h} |binom(2h, N)|, and the
/// tail is at most K N^{-2h} / (2h). Requires N >= 2.
double binomial_tail_bound(double h, std::size_t n, double abs_coefficient);

struct BinomialSeries {
  double h;
  std::vector<double> coefficients;  // binom(2h, n) at index n - 1
  double tail_constant;              // K above, from the last retained term
  double tail_bound;                 // bound on the absolute sum of omitted terms

  std::size_t count() const noexcept { return coefficients.size(); }
  double operator()(std::size_t n) const { return coefficients.at(n - 1); }

  /// sum_{n=1..N} binom(2h, n) (-1)^{n-1}; tends to 1.
  double alternating_sum() const;
};

BinomialSeries binom_coeffs(double h, std::size_t n_max);

}  // namespace aniso
