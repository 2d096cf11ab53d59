#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "phasenoise/specfun.hpp"

using namespace pn::specfun;

TEST_CASE("log I0 matches reference values across both regimes") {
  CHECK(log_bessel_i0(0.0) == doctest::Approx(0.0));
  CHECK(log_bessel_i0(0.5) == doctest::Approx(0.0615497191854812).epsilon(1e-12));
  CHECK(log_bessel_i0(1.0) == doctest::Approx(0.235914358507179).epsilon(1e-12));
  CHECK(log_bessel_i0(5.0) == doctest::Approx(3.30468177582253).epsilon(1e-12));
  CHECK(log_bessel_i0(30.0) == doctest::Approx(27.3847014331719).epsilon(1e-12));
  CHECK(log_bessel_i0(100.0) == doctest::Approx(96.7797326899426).epsilon(1e-12));
  CHECK(log_bessel_i0(700.0) == doctest::Approx(695.805699998443).epsilon(1e-12));
}

TEST_CASE("I1/I0 ratio") {
  CHECK(bessel_i1_i0_ratio(0.0) == doctest::Approx(0.0));
  CHECK(bessel_i1_i0_ratio(0.5) == doctest::Approx(0.242499612580802).epsilon(1e-12));
  CHECK(bessel_i1_i0_ratio(2.0) == doctest::Approx(0.697774657964008).epsilon(1e-12));
  CHECK(bessel_i1_i0_ratio(10.0) == doctest::Approx(0.948599825954846).epsilon(1e-12));
  CHECK(bessel_i1_i0_ratio(50.0) == doctest::Approx(0.989948967378498).epsilon(1e-12));
}

TEST_CASE("digamma: special values and recurrence") {
  CHECK(digamma(1.0) == doctest::Approx(-0.577215664901533).epsilon(1e-12));
  CHECK(digamma(0.5) == doctest::Approx(-1.96351002602142).epsilon(1e-12));
  CHECK(digamma(10.3) == doctest::Approx(2.28281544643912).epsilon(1e-12));
  for (double x : {0.3, 1.7, 4.2}) {
    CHECK(digamma(x + 1.0) == doctest::Approx(digamma(x) + 1.0 / x).epsilon(1e-12));
  }
}

TEST_CASE("Euler product") {
  CHECK(euler_q_product(0.0) == doctest::Approx(1.0));
  CHECK(euler_q_product(0.5) == doctest::Approx(0.288788095086602).epsilon(1e-12));
}

TEST_CASE("regularized incomplete gamma: closed-form and reference points") {
  // P(1, x) = 1 - e^{-x}
  for (double x : {0.1, 1.0, 3.0, 10.0}) {
    CHECK(regularized_gamma_p(1.0, x) == doctest::Approx(1.0 - std::exp(-x)).epsilon(1e-12));
  }
  CHECK(regularized_gamma_p(3.0, 0.0) == doctest::Approx(0.0));
  CHECK(regularized_gamma_p(3.0, 2.5) == doctest::Approx(0.45618688411667).epsilon(1e-12));
}

TEST_CASE("inverse regularized gamma: round trip and pinned quantile") {
  for (double a : {0.5, 2.0, 20.0}) {
    for (double p : {0.05, 0.5, 0.95}) {
      const double x = inverse_regularized_gamma_p(a, p);
      CHECK(regularized_gamma_p(a, x) == doctest::Approx(p).epsilon(1e-9));
    }
  }
  CHECK(inverse_regularized_gamma_p(20.0, 0.1) ==
        doctest::Approx(14.5252614653).epsilon(1e-9));
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(log_bessel_i0(-1.0), std::domain_error);
  CHECK_THROWS_AS(regularized_gamma_p(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(regularized_gamma_p(1.0, -1.0), std::domain_error);
  CHECK_THROWS_AS(inverse_regularized_gamma_p(1.0, 1.5), std::domain_error);
}
