#pragma once

// Scalar special functions used by the entropy and outage formulas.
// All functions are pure, allocation-free, double precision, and work in
// the log domain where the direct value would overflow.

namespace pn::specfun {

// ln I0(lambda) for lambda >= 0. Power series below the crossover,
// asymptotic expansion above; relative error <= 1e-12 on [0, 1e4].
double log_bessel_i0(double lambda);

// I1(lambda)/I0(lambda), monotone increasing from 0 to 1.
double bessel_i1_i0_ratio(double lambda);

// Euler digamma for x > 0 (recurrence shift + Bernoulli series).
double digamma(double x);

// Euler-type product prod_{l>=1} (1 - q^l) for q in [0,1).
// Terms are dropped once q^l < 1e-18.
double euler_q_product(double q);

// Lower regularized incomplete gamma P(a,x), a > 0, x >= 0.
double regularized_gamma_p(double a, double x);

// Inverse of P(a, .) in its second argument: P(a, result) = p.
double inverse_regularized_gamma_p(double a, double p);

}  // namespace pn::specfun
