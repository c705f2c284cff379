#pragma once

#include <cmath>

#include "aniso/lamperti.hpp"

namespace aniso::testing {

inline double relative_error(double got, double want) {
  return std::fabs(got - want) / std::max(std::fabs(want), 1e-300);
}

/// R0(v) (1 + 0.3 e^{-|v1|-|v2|}) / 1.3: positive definite (product of
/// positive definite kernels) with unit variance, but R(v) + R(v1,-v2) is not
/// F_{H1} F_{H2} / 2, so rectangular increments are not stationary.
inline FieldCovariance modulated_control(const HurstPair& hurst) {
  return FieldCovariance(
      hurst,
      [hurst](Lag v) { return r0(hurst, v) * (1.0 + 0.3 * std::exp(-std::fabs(v.v1) - std::fabs(v.v2))) / 1.3; },
      "R0*(1+0.3exp(-|v1|-|v2|))/1.3");
}

}  // namespace aniso::testing
