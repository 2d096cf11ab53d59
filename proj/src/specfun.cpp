#include "phasenoise/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace pn::specfun {

namespace {

constexpr double kSeriesCutoff = 30.0;  // power series below, asymptotic above

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw std::domain_error(std::string(what) + ": non-finite argument");
}

// I_nu power series, nu in {0,1}, valid for modest lambda (no overflow below
// the cutoff). Terms truncated below 1e-18 relative.
double bessel_i_series(int nu, double lambda) {
  const double q = lambda * lambda / 4.0;
  double term = (nu == 0) ? 1.0 : lambda / 2.0;
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * (k + nu));
    sum += term;
    if (term < sum * 1e-18) break;
  }
  return sum;
}

// Bracket of the large-argument expansion: I_nu(x) ~ e^x/sqrt(2 pi x) * bracket.
double bessel_asymptotic_bracket(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 40; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (odd * odd - mu) / (8.0 * k * x);
    sum += term;
    if (std::abs(term) < 1e-16) break;
  }
  return sum;
}

// P(a,x) by its power series, for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a, term = 1.0 / a, sum = term;
  for (int n = 0; n < 5000; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Q(a,x) by Lentz continued fraction, for x >= a + 1.
double gamma_q_cf(double a, double x) {
  const double tiny = std::numeric_limits<double>::min() / 1e-30;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 5000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double log_bessel_i0(double lambda) {
  require_finite(lambda, "log_bessel_i0");
  if (lambda < 0.0) throw std::domain_error("log_bessel_i0: negative argument");
  if (lambda <= kSeriesCutoff) return std::log(bessel_i_series(0, lambda));
  return lambda - 0.5 * std::log(2.0 * M_PI * lambda) +
         std::log(bessel_asymptotic_bracket(0, lambda));
}

double bessel_i1_i0_ratio(double lambda) {
  require_finite(lambda, "bessel_i1_i0_ratio");
  if (lambda < 0.0) throw std::domain_error("bessel_i1_i0_ratio: negative argument");
  if (lambda == 0.0) return 0.0;
  if (lambda <= kSeriesCutoff)
    return bessel_i_series(1, lambda) / bessel_i_series(0, lambda);
  return bessel_asymptotic_bracket(1, lambda) / bessel_asymptotic_bracket(0, lambda);
}

double digamma(double x) {
  require_finite(x, "digamma");
  if (x <= 0.0) throw std::domain_error("digamma: requires x > 0");
  double acc = 0.0;
  while (x < 10.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double r = 1.0 / (x * x);
  // ln x - 1/(2x) - sum B_{2n}/(2n x^{2n}), eight Bernoulli terms
  double series = r * (1.0 / 12.0 -
                  r * (1.0 / 120.0 -
                  r * (1.0 / 252.0 -
                  r * (1.0 / 240.0 -
                  r * (1.0 / 132.0 -
                  r * (691.0 / 32760.0 -
                  r * (1.0 / 12.0)))))));
  return acc + std::log(x) - 0.5 / x - series;
}

double euler_q_product(double q) {
  require_finite(q, "euler_q_product");
  if (q < 0.0 || q >= 1.0) throw std::domain_error("euler_q_product: requires 0 <= q < 1");
  if (q == 0.0) return 1.0;
  double log_prod = 0.0, ql = q;
  while (ql >= 1e-18) {
    log_prod += std::log1p(-ql);
    ql *= q;
  }
  return std::exp(log_prod);
}

double regularized_gamma_p(double a, double x) {
  require_finite(a, "regularized_gamma_p");
  require_finite(x, "regularized_gamma_p");
  if (a <= 0.0 || x < 0.0) throw std::domain_error("regularized_gamma_p: a > 0, x >= 0 required");
  if (x == 0.0) return 0.0;
  return (x < a + 1.0) ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double inverse_regularized_gamma_p(double a, double p) {
  require_finite(a, "inverse_regularized_gamma_p");
  require_finite(p, "inverse_regularized_gamma_p");
  if (a <= 0.0 || p <= 0.0 || p >= 1.0)
    throw std::domain_error("inverse_regularized_gamma_p: a > 0, 0 < p < 1 required");
  // Bracket around the mean, then bisect; Newton polish at the end.
  double lo = 0.0, hi = a + 1.0;
  while (regularized_gamma_p(a, hi) < p) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (regularized_gamma_p(a, mid) < p)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-14 * (1.0 + hi)) break;
  }
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 4; ++i) {
    const double f = regularized_gamma_p(a, x) - p;
    const double df = std::exp((a - 1.0) * std::log(x) - x - std::lgamma(a));
    if (df <= 0.0) break;
    const double step = f / df;
    if (x - step <= lo || x - step >= hi) break;
    x -= step;
  }
  return x;
}

}  // namespace pn::specfun
