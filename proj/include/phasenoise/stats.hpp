#pragma once

// Statistical utilities for the Monte-Carlo validation suite: noncentral
// chi-squared pdf/cdf, one-sample Kolmogorov-Smirnov test, histogram
// differential entropy, and Gauss-Hermite quadrature rules.

#include <cstddef>
#include <functional>
#include <vector>

namespace pn::stats {

// Noncentral chi-squared with `dof` degrees of freedom and noncentrality
// `delta`, evaluated as a Poisson mixture of central chi-squared terms
// truncated at cumulative weight 1 - 1e-12. delta = 0 gives the central law.
double noncentral_chi2_pdf(int dof, double delta, double t);
double noncentral_chi2_cdf(int dof, double delta, double t);

// Differential entropy of the noncentral chi-squared law by 1-D quadrature
// of -f ln f over mean +- 12 standard deviations.
double noncentral_chi2_entropy(int dof, double delta, std::size_t nodes = 600);

struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
};

// One-sample KS test of `samples` against the continuous CDF `cdf`.
// Asymptotic Kolmogorov p-value with the usual small-sample correction.
KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);

// Differential entropy of a positive-valued sample via a log-spaced
// histogram with ceil(2 n^{1/3}) bins and Miller-Madow bias correction.
double histogram_entropy_log_bins(const std::vector<double>& samples);

struct GaussHermite {
  std::vector<double> nodes;    // roots of H_n
  std::vector<double> weights;  // sum w_i f(x_i) ~ integral e^{-x^2} f(x) dx
};

// Golub-Welsch rule via the symmetric tridiagonal Jacobi matrix.
GaussHermite gauss_hermite(int n);

}  // namespace pn::stats
