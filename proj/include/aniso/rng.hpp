#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace aniso {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds.
PhiloxCounter philox4x32(PhiloxCounter counter, PhiloxKey key) noexcept;

/// Inverse standard normal CDF (Wichura's AS 241, relative accuracy about
/// 1e-16). Requires 0 < p < 1.
double normal_quantile(double p);

/// Standard normals addressed by (seed, path, index). Each Philox call yields
/// the pair of indices (2k, 2k+1), so the value at an address does not depend
/// on which other values were drawn or in what order.
class NormalSource {
 public:
  explicit NormalSource(std::uint64_t seed) noexcept;

  double operator()(std::uint64_t path, std::uint64_t index) const noexcept;
  /// out[i] = (*this)(path, first + i).
  void fill(std::uint64_t path, std::uint64_t first, std::span<double> out) const noexcept;

 private:
  std::array<double, 2> pair(std::uint64_t path, std::uint64_t block) const noexcept;

  PhiloxKey key_;
};

}  // namespace aniso
