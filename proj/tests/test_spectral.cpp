#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <doctest.h>

#include "aniso/errors.hpp"
#include "aniso/spectral.hpp"
#include "support.hpp"

using namespace aniso;
using aniso::testing::relative_error;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> probe_frequencies() {
  std::vector<double> xs{0.0};
  const auto grid = log_grid(1e-3, 1e3, 41);
  xs.insert(xs.end(), grid.begin(), grid.end());
  return xs;
}

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("H = 1/2 closed forms") {
    for (double x = 0.0; x <= 40.0; x += 0.41) {
      const double a = 1.0 / (0.25 + x * x);
      const double b = 4.0 * x / ((0.25 + x * x) * (2.25 + x * x));
      CHECK(std::fabs(a_series(0.5, x) - a) < 1e-12);
      CHECK(std::fabs(a_closed_form(0.5, x) - a) < 1e-12);
      CHECK(std::fabs(b_series(0.5, x) - b) < 1e-12);
    }
    CHECK(std::fabs(a_quadrature(0.5, 1.3) - 1.0 / (0.25 + 1.69)) < 1e-10);
    CHECK(std::fabs(b_quadrature(0.5, 1.3) - 5.2 / ((0.25 + 1.69) * (2.25 + 1.69))) < 1e-10);
  }

  TEST_CASE("a(0) = 2 Gamma(2H) Gamma(1-H) / Gamma(1+H)") {
    // 30-digit values of the gamma expression.
    CHECK(relative_error(a_series(0.2, 0.0), 5.6252127335036062) < 1e-12);
    CHECK(relative_error(a_series(0.75, 0.0), 6.9921534781123195) < 1e-12);
    CHECK(relative_error(a_quadrature(0.2, 0.0), 5.6252127335036062) < 1e-10);
    CHECK(relative_error(a_closed_form(0.75, 0.0), 6.9921534781123195) < 1e-12);
    for (double h : {0.05, 0.3, 0.6, 0.95}) {
      const double want = 2.0 * std::tgamma(2.0 * h) * std::tgamma(1.0 - h) / std::tgamma(1.0 + h);
      const SeriesEvaluation s = inverse_offset_sum(h, 1e-13);
      CHECK(std::fabs((1.0 / h - s.value) - want) < 1e-11);
      CHECK(s.error_bound <= 1e-13);
    }
  }

  TEST_CASE("high-precision quadrature oracles") {
    // 30-digit quadrature of the defining integrals with a cancellation-free
    // integrand.
    struct Case {
      double h, x, a, b;
    };
    for (const Case& c : {Case{0.3, 0.7, 1.0510654176312241, 0.91696810823808289},
                          Case{0.8, 2.5, 0.070566458856591281, 0.28929209591880704},
                          Case{0.1, 0.05, 8.3128411705320919, 3.4637752780407500},
                          Case{0.95, 10.0, 0.00035668466560095843, 0.0072097406650563495}}) {
      CAPTURE(c.h);
      CAPTURE(c.x);
      CHECK(std::fabs(a_series(c.h, c.x) - c.a) < 1e-11);
      CHECK(std::fabs(a_closed_form(c.h, c.x) - c.a) < 1e-11);
      CHECK(std::fabs(a_quadrature(c.h, c.x) - c.a) < 1e-10);
      CHECK(std::fabs(b_series(c.h, c.x) - c.b) < 1e-11);
      CHECK(std::fabs(b_quadrature(c.h, c.x) - c.b) < 1e-10);
    }
  }

  TEST_CASE("parity") {
    for (double h : {0.15, 0.5, 0.85}) {
      for (double x : {0.01, 0.7, 3.0, 40.0}) {
        CHECK(a_series(h, -x) == a_series(h, x));
        CHECK(b_series(h, -x) == -b_series(h, x));
        CHECK(a_closed_form(h, -x) == a_closed_form(h, x));
        CHECK(std::fabs(b_quadrature(h, -x) + b_quadrature(h, x)) < 1e-12);
      }
    }
  }

  TEST_CASE("positivity and bounds") {
    for (double h = 0.05; h < 0.99; h += 0.05) {
      for (double x : probe_frequencies()) {
        CAPTURE(h);
        CAPTURE(x);
        const double a = a_series(h, x);
        CHECK(a > 0.0);
        CHECK(a >= a_lower_bound(h, x));
        if (x > 0.0) {
          const double b = b_series(h, x);
          CHECK(b > b_lower_bound(h, x));
          if (h > 0.5) CHECK(b <= b_upper_bound(h, x));
        }
        // log(sinh(pi x) / (pi x)), kept finite for large x
        const double px = kPi * x;
        const double log_sinhc = px > 0.0 ? px + std::log1p(-std::exp(-2.0 * px)) - std::log(2.0 * px) : 0.0;
        CHECK(log_gamma_modulus_ratio(h, x) >= log_sinhc - 1e-12 * std::max(1.0, log_sinhc));
      }
    }
  }

  TEST_CASE("gamma ratio product formula") {
    for (double h : {0.2, 0.7}) {
      for (double x : {0.3, 2.0}) {
        double product = 1.0;
        for (int n = 0; n < 2000000; ++n) product *= 1.0 + x * x / ((n + h) * (n + h));
        // The truncated product misses a factor of about exp(x^2 / N).
        CHECK(relative_error(gamma_modulus_ratio(h, x), product) < 3e-6);
      }
    }
    CHECK_THROWS_AS(gamma_modulus_ratio(0.5, 400.0), SpecialFunctionError);
    CHECK(std::isfinite(log_gamma_modulus_ratio(0.5, 400.0)));
  }

  TEST_CASE("b decomposition signs") {
    const BDecomposition low = b_series_detail(0.3, 1.5);
    CHECK(low.negative == 0.0);
    CHECK(low.positive > 0.0);
    const BDecomposition high = b_series_detail(0.8, 1.5);
    CHECK(high.negative < 0.0);
    CHECK(std::fabs(high.value - (high.leading + high.positive + high.negative)) < 1e-15);
    CHECK(b_series_detail(0.8, -1.5).value == -high.value);
    CHECK(b_series_detail(0.8, 0.0).value == 0.0);
  }

  TEST_CASE("series tolerance failures are reported") {
    CHECK_THROWS_AS(a_series(0.3, 1.0, 1e-30), ToleranceNotReached);
    CHECK_THROWS_AS(a_series(0.3, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(a_series(0.3, std::nan(""), 1e-12), DomainError);
    CHECK_THROWS_AS(b_series(1.2, 1.0), DomainError);
  }

  TEST_CASE("quadrature horizon") {
    CHECK(quadrature_horizon(0.25, 1e-12) == doctest::Approx(std::log(1e12) / 0.25 + 10.0));
    CHECK(quadrature_horizon(0.75, 1e-12) == quadrature_horizon(0.25, 1e-12));
  }

  TEST_CASE("theta root bound values") {
    // 30-digit evaluations of Gamma(2H)/Gamma(H)^2 (1-H)/(4H) sin(pi H) tanh(pi H).
    CHECK(relative_error(theta_root_bound(0.1), 0.0107289783635706593) < 1e-13);
    CHECK(relative_error(theta_root_bound(0.3), 0.0578251174865511849) < 1e-13);
    CHECK(relative_error(theta_root_bound(0.5), 0.0729846638948619687) < 1e-13);
    CHECK(relative_error(theta_root_bound(0.7), 0.0445352436228466156) < 1e-13);
    CHECK(relative_error(theta_root_bound(0.9), 0.00695207429761595717) < 1e-13);
    // Vanishes like (1-H)^2 at the upper end.
    CHECK(theta_root_bound(0.999) < 1e-5);
  }

  TEST_CASE("theta bound certificate") {
    const ThetaCertificate c = theta_bound(HurstPair(0.5, 0.5));
    CHECK(relative_error(c.theta_bound, 0.00532676116384596823) < 1e-13);
    CHECK(c.method == CertificateMethod::closed_form_bound);
    CHECK(to_string(c.method) == "closed_form_bound");
    CHECK(theta_bound(HurstPair(0.3, 0.9)).theta_bound == theta_bound(HurstPair(0.9, 0.3)).theta_bound);
    CHECK(relative_error(theta_bound(HurstPair(0.3, 0.7)).theta_bound, 0.00198338792454630014) < 1e-13);

    CHECK(c.covers(FieldCovariance(StationaryKernel(HurstPair(0.5, 0.5), 0.005))));
    CHECK(c.covers(FieldCovariance(StationaryKernel(HurstPair(0.5, 0.5), -0.005))));
    CHECK_FALSE(c.covers(FieldCovariance(StationaryKernel(HurstPair(0.5, 0.5), 0.006))));
    CHECK_FALSE(c.covers(FieldCovariance(StationaryKernel(HurstPair(0.5, 0.4), 0.001))));
    CHECK_FALSE(c.covers(aniso::testing::modulated_control(HurstPair(0.5, 0.5))));
  }

  TEST_CASE("main inequality") {
    const HurstPair hp(0.3, 0.8);
    const double theta = 0.9 * theta_bound(hp).theta_bound;
    const auto xs = log_grid(1e-3, 1e3, 60);
    const VerificationReport ok = verify_main_inequality(hp, theta, xs);
    CHECK(ok.pass());
    CHECK(ok.checks().size() == 2);
    const VerificationReport bad = verify_main_inequality(HurstPair(0.5, 0.5), 100.0, xs);
    CHECK_FALSE(bad.pass());
    CHECK(bad.to_json()["pass"] == false);
  }

  TEST_CASE("gram check") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> lag(-3.0, 3.0);
    std::vector<Lag> points(150);
    for (Lag& p : points) p = {lag(rng), lag(rng)};
    const StationaryKernel k(HurstPair(0.4, 0.6), 0.9 * theta_bound(HurstPair(0.4, 0.6)).theta_bound);
    const VerificationReport ok = verify_psd_gram([&k](Lag v) { return k(v); }, points);
    CHECK(ok.pass());
    // 1 - |v|^2 / 2 has negative Gram eigenvalues.
    const VerificationReport bad =
        verify_psd_gram([](Lag v) { return 1.0 - 0.5 * (v.v1 * v.v1 + v.v2 * v.v2); }, points);
    CHECK_FALSE(bad.pass());

    std::vector<Lag> same(3, Lag{0.5, 0.5});
    CHECK_THROWS_AS(verify_psd_gram([&k](Lag v) { return k(v); }, same), DomainError);
    std::vector<Lag> many(kMaxGramPoints + 1, Lag{0.0, 0.0});
    CHECK_THROWS_AS(verify_psd_gram([&k](Lag v) { return k(v); }, many), DomainError);
  }

  TEST_CASE("fourier scan and scan certificates") {
    const HurstPair hp(0.5, 0.5);
    std::vector<double> freqs{0.0};
    const auto grid = log_grid(1e-2, 1e2, 25);
    freqs.insert(freqs.end(), grid.begin(), grid.end());
    const StationaryKernel good(hp, 0.9 * theta_bound(hp).theta_bound);
    CHECK(fourier_inversion_scan(good, freqs).pass());
    const StationaryKernel bad(hp, 100.0);
    CHECK_FALSE(fourier_inversion_scan(bad, freqs).pass());

    const auto cert = certify_by_fourier(good, freqs);
    REQUIRE(cert.has_value());
    CHECK(cert->method == CertificateMethod::fourier_scan);
    CHECK(cert->covers(FieldCovariance(good)));
    CHECK_FALSE(cert->covers(FieldCovariance(StationaryKernel(hp, 0.001))));
    CHECK_FALSE(certify_by_fourier(bad, freqs).has_value());

    const FieldCovariance control = aniso::testing::modulated_control(hp);
    std::vector<Lag> lags;
    for (double a = -2.0; a <= 2.0; a += 0.5) {
      for (double b = -2.0; b <= 2.0; b += 0.5) lags.push_back({a, b});
    }
    const auto gram = certify_by_gram(control, lags);
    REQUIRE(gram.has_value());
    CHECK(gram->covers(control));
    CHECK(gram->method == CertificateMethod::gram_scan);
  }

  TEST_CASE("log grid") {
    const auto g = log_grid(1e-2, 1e2, 5);
    CHECK(g.front() == 1e-2);
    CHECK(g.back() == 1e2);
    CHECK(g[2] == doctest::Approx(1.0));
    CHECK(log_grid(3.0, 3.0, 1).size() == 1);
    CHECK_THROWS_AS(log_grid(0.0, 1.0, 3), DomainError);
  }
}
