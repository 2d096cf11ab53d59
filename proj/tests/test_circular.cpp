#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "phasenoise/circular.hpp"

using namespace pn;

TEST_CASE("wrap_angle reduces into [0, 2pi)") {
  CHECK(wrap_angle(0.0) == doctest::Approx(0.0));
  CHECK(wrap_angle(2.0 * M_PI) == doctest::Approx(0.0));
  CHECK(wrap_angle(-0.1) == doctest::Approx(2.0 * M_PI - 0.1));
  CHECK(wrap_angle(7.0 * M_PI + 0.25) == doctest::Approx(M_PI + 0.25));
}

TEST_CASE("pdfs integrate to one on the circle") {
  for (const CircularDistribution& d :
       {CircularDistribution{UniformCircular{}}, CircularDistribution{WrappedGaussian{0.3}},
        CircularDistribution{WrappedGaussian{2.5}}, CircularDistribution{Tikhonov{8.0}}}) {
    const std::size_t n = 20000;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += pdf(d, kTwoPi * i / n);
    CHECK(acc * kTwoPi / n == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("uniform entropy is ln 2pi") {
  CHECK(entropy(CircularDistribution{UniformCircular{}}).value ==
        doctest::Approx(kLogTwoPi).epsilon(1e-15));
}

TEST_CASE("wrapped Gaussian entropy: evaluators agree") {
  for (double sigma : {0.05, 0.2, 0.5, 1.0}) {
    const CircularDistribution d{WrappedGaussian{sigma}};
    const double hq = entropy(d, EntropyMethod::Quadrature).value;
    const double hs = entropy(d, EntropyMethod::Series).value;
    CHECK(hq == doctest::Approx(hs).epsilon(1e-10));
  }
  // reference quadrature values (independent oracle, 2^16-point trapezoid)
  CHECK(entropy(CircularDistribution{WrappedGaussian{6.0 * M_PI / 180.0}}).value ==
        doctest::Approx(-0.837528962608).epsilon(1e-9));
  CHECK(entropy(CircularDistribution{WrappedGaussian{0.5}}).value ==
        doctest::Approx(0.725791351632).epsilon(1e-9));
}

TEST_CASE("wrapped Gaussian entropy: small-sigma Gaussian limit, large-sigma uniform limit") {
  const double sigma = 5.0 * M_PI / 180.0;
  const CircularDistribution d{WrappedGaussian{sigma}};
  const double approx = 0.5 * std::log(2.0 * M_PI * M_E * sigma * sigma);
  CHECK(entropy(d, EntropyMethod::GaussianApprox).value == doctest::Approx(approx));
  CHECK(std::abs(entropy(d, EntropyMethod::Quadrature).value - approx) < 1e-9);
  CHECK(entropy(CircularDistribution{WrappedGaussian{2.0 * M_PI}}).value ==
        doctest::Approx(kLogTwoPi).epsilon(1e-9));
}

TEST_CASE("Tikhonov entropy: closed form vs quadrature, uniform limit") {
  CHECK(entropy(CircularDistribution{Tikhonov{0.0}}).value ==
        doctest::Approx(kLogTwoPi).epsilon(1e-12));
  CHECK(entropy(CircularDistribution{Tikhonov{10.0}}).value ==
        doctest::Approx(0.29485088998).epsilon(1e-10));
  for (double lam : {0.5, 3.0, 10.0})
    CHECK(entropy(CircularDistribution{Tikhonov{lam}}, EntropyMethod::Quadrature).value ==
          doctest::Approx(entropy(CircularDistribution{Tikhonov{lam}}).value).epsilon(1e-9));
}

TEST_CASE("Tikhonov sampler: mean resultant length matches I1/I0") {
  const double lam = 4.0;
  RngStream rng(42);
  const CircularDistribution d{Tikhonov{lam}};
  const std::size_t n = 200000;
  double c = 0.0, s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double th = sample(d, rng);
    c += std::cos(th);
    s += std::sin(th);
  }
  const double r = std::hypot(c / n, s / n);
  // I1(4)/I0(4) = 0.86353; MC std error of r is about 1/sqrt(2n)
  CHECK(r == doctest::Approx(0.863551).epsilon(5e-3));
  CHECK(std::abs(s / n) < 0.005);
}

TEST_CASE("entropy method mismatches are rejected") {
  CHECK_THROWS(entropy(CircularDistribution{Tikhonov{2.0}}, EntropyMethod::Series));
  CHECK_THROWS(entropy(CircularDistribution{UniformCircular{}}, EntropyMethod::GaussianApprox));
  CHECK_THROWS(WrappedGaussian{0.0});
  CHECK_THROWS(Tikhonov{-1.0});
}

TEST_CASE("conditional phase entropy: uniform observations carry no information") {
  RngStream rng(1);
  std::vector<CircularDistribution> laws(3, CircularDistribution{UniformCircular{}});
  const EntropyEstimate e = conditional_phase_entropy(laws, {}, rng);
  CHECK(e.value == doctest::Approx(kLogTwoPi));
  CHECK(e.std_error == doctest::Approx(0.0));
}

TEST_CASE("conditional phase entropy: single observation reduces to the noise entropy") {
  // h(phi | phi + theta) = h(theta) when M = 1
  RngStream rng(7);
  const double sigma = 0.2;
  std::vector<CircularDistribution> laws{CircularDistribution{WrappedGaussian{sigma}}};
  const EntropyEstimate e = conditional_phase_entropy(laws, {}, rng);
  const double href = entropy(laws[0]).value;
  CHECK(std::abs(e.value - href) < 3.0 * e.std_error + 2e-3);
}

TEST_CASE("conditional phase entropy: two observations beat one") {
  RngStream rng(9);
  const CircularDistribution wg{WrappedGaussian{0.2}};
  const EntropyEstimate e1 = conditional_phase_entropy({wg}, {}, rng);
  const EntropyEstimate e2 = conditional_phase_entropy({wg, wg}, {}, rng);
  // independent oracle (n = 150k) puts M=2 near -0.539
  CHECK(e2.value == doctest::Approx(-0.5385).epsilon(0.02));
  CHECK(e2.value < e1.value);
}
