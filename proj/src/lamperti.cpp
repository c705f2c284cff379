#include "aniso/lamperti.hpp"

#include <array>
#include <cmath>
#include <utility>

#include "aniso/errors.hpp"

namespace aniso {

namespace {

void require_quarter_plane(Point p) {
  if (!(p.t1 >= 0.0) || !(p.t2 >= 0.0) || !std::isfinite(p.t1) || !std::isfinite(p.t2)) {
    throw DomainError("field coordinates must be finite and non-negative");
  }
}

void require_open_quarter_plane(Point p) {
  if (!(p.t1 > 0.0) || !(p.t2 > 0.0) || !std::isfinite(p.t1) || !std::isfinite(p.t2)) {
    throw DomainError("identity checks need strictly positive coordinates");
  }
}

double pow2h(double t, double h) { return std::pow(t, 2.0 * h); }

double fbm_factor(double h, double a, double b) {
  return pow2h(a, h) + pow2h(b, h) - pow2h(std::fabs(a - b), h);
}

}  // namespace

FieldCovariance::FieldCovariance(StationaryKernel kernel)
    : hurst_(kernel.hurst()),
      kernel_([kernel](Lag v) { return kernel(v); }),
      stationary_(kernel),
      descriptor_(kernel.descriptor()) {}

FieldCovariance::FieldCovariance(HurstPair hurst, KernelFunction kernel, std::string descriptor)
    : hurst_(hurst), kernel_(std::move(kernel)), descriptor_(std::move(descriptor)) {
  if (!kernel_) throw DomainError("empty kernel function");
}

double field_cov(const FieldCovariance& fc, Point t, Point s) {
  require_quarter_plane(t);
  require_quarter_plane(s);
  if (t.t1 == 0.0 || t.t2 == 0.0 || s.t1 == 0.0 || s.t2 == 0.0) return 0.0;
  const double h1 = fc.hurst().h1();
  const double h2 = fc.hurst().h2();
  const double prefactor = std::pow(t.t1 * s.t1, h1) * std::pow(t.t2 * s.t2, h2);
  return prefactor * fc.kernel({std::log(t.t1 / s.t1), std::log(t.t2 / s.t2)});
}

RectIncrement::RectIncrement(Point lower, Point upper) : u(lower), v(upper) {
  require_quarter_plane(u);
  require_quarter_plane(v);
  if (v.t1 < u.t1 || v.t2 < u.t2) {
    throw DomainError("rectangle upper corner must dominate the lower corner");
  }
}

RectIncrement RectIncrement::shifted(double d1, double d2) const {
  return RectIncrement({u.t1 + d1, u.t2 + d2}, {v.t1 + d1, v.t2 + d2});
}

double increment_covariance(const FieldCovariance& fc, const RectIncrement& a, const RectIncrement& b) {
  using Corner = std::pair<Point, double>;
  auto corners = [](const RectIncrement& r) {
    return std::array<Corner, 4>{{{{r.v.t1, r.v.t2}, 1.0},
                                  {{r.u.t1, r.v.t2}, -1.0},
                                  {{r.v.t1, r.u.t2}, -1.0},
                                  {{r.u.t1, r.u.t2}, 1.0}}};
  };
  const auto ca = corners(a);
  const auto cb = corners(b);
  double sum = 0.0;
  for (const auto& [p, sp] : ca) {
    for (const auto& [q, sq] : cb) {
      sum += sp * sq * field_cov(fc, p, q);
    }
  }
  return sum;
}

ResidualPair check_lemma1(const FieldCovariance& fc, Point t, Point s) {
  require_open_quarter_plane(t);
  require_open_quarter_plane(s);
  const double h1 = fc.hurst().h1();
  const double h2 = fc.hurst().h2();
  const Point mid{s.t1, t.t2};

  const double lhs1 = field_cov(fc, t, t) + field_cov(fc, mid, mid) - 2.0 * field_cov(fc, t, mid);
  const double rhs1 = pow2h(std::fabs(t.t1 - s.t1), h1) * pow2h(t.t2, h2);

  const double lhs2 = field_cov(fc, mid, mid) + field_cov(fc, s, s) - 2.0 * field_cov(fc, mid, s);
  const double rhs2 = pow2h(std::fabs(t.t2 - s.t2), h2) * pow2h(s.t1, h1);

  return {std::fabs(lhs1 - rhs1), std::fabs(lhs2 - rhs2)};
}

ResidualPair check_lemma2(const FieldCovariance& fc, Point t, Point s) {
  require_open_quarter_plane(t);
  require_open_quarter_plane(s);
  const double h1 = fc.hurst().h1();
  const double h2 = fc.hurst().h2();
  const Point mid{s.t1, t.t2};

  const double rhs1 = 0.5 * pow2h(t.t2, h2) * fbm_factor(h1, t.t1, s.t1);
  const double rhs2 = 0.5 * pow2h(s.t1, h1) * fbm_factor(h2, t.t2, s.t2);
  return {std::fabs(field_cov(fc, t, mid) - rhs1), std::fabs(field_cov(fc, mid, s) - rhs2)};
}

double check_lemma3(const FieldCovariance& fc, Point t, Point s) {
  require_open_quarter_plane(t);
  require_open_quarter_plane(s);
  const double h1 = fc.hurst().h1();
  const double h2 = fc.hurst().h2();
  const double lhs = field_cov(fc, t, s) + field_cov(fc, {t.t1, s.t2}, {s.t1, t.t2});
  const double rhs = 0.5 * fbm_factor(h1, t.t1, s.t1) * fbm_factor(h2, t.t2, s.t2);
  return std::fabs(lhs - rhs);
}

double check_r1(const KernelFunction& kernel, const HurstPair& hurst, Lag v) {
  const double lhs = kernel(v) + kernel({v.v1, -v.v2});
  const double rhs = 0.5 * f_h(hurst.h1(), v.v1) * f_h(hurst.h2(), v.v2);
  return std::fabs(lhs - rhs);
}

double check_r1(const StationaryKernel& kernel, Lag v) {
  return check_r1([&kernel](Lag w) { return kernel(w); }, kernel.hurst(), v);
}

}  // namespace aniso
