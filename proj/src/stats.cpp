#include "phasenoise/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "phasenoise/specfun.hpp"

namespace pn::stats {

namespace {

constexpr double kTailMass = 1e-12;

// Index window [jmin, jmax] of Poisson(lam) holding mass >= 1 - kTailMass.
void poisson_window(double lam, long& jmin, long& jmax) {
  const double half = 8.0 * std::sqrt(lam) + 20.0;
  const long j0 = static_cast<long>(lam);
  jmin = std::max(0L, j0 - static_cast<long>(half));
  jmax = j0 + static_cast<long>(half);
}

// log I_nu(x) for integer nu >= 0, by the ascending series (small x) or the
// large-argument asymptotic expansion.
double log_bessel_i(int nu, double x) {
  if (x <= 0.0) return nu == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  if (x <= std::max(30.0, 1.5 * nu)) {
    const double log_t0 = nu * std::log(x / 2.0) - std::lgamma(nu + 1.0);
    double sum = 1.0, term = 1.0;
    for (int k = 1; k < 400; ++k) {
      term *= (x * x / 4.0) / (k * (k + nu));
      sum += term;
      if (term < 1e-18 * sum) break;
    }
    return log_t0 + std::log(sum);
  }
  const double mu = 4.0 * static_cast<double>(nu) * nu;
  double sum = 1.0, term = 1.0;
  for (int k = 1; k <= 20; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(mu - odd * odd) / (8.0 * k * x);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return x - 0.5 * std::log(2.0 * M_PI * x) + std::log(sum);
}

double noncentral_chi2_log_pdf(int dof, double delta, double t) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (t <= 0.0) return kNegInf;
  const double k2 = dof / 2.0;
  if (delta <= 0.0) return (k2 - 1.0) * std::log(t / 2.0) - t / 2.0 -
                           std::lgamma(k2) - std::log(2.0);
  const double z = std::sqrt(delta * t);
  if (z > 50.0 && dof % 2 == 0) {
    // Bessel form, O(1) per point: f = 0.5 e^{-(t+d)/2} (t/d)^{nu/2} I_nu(z)
    const int nu = dof / 2 - 1;
    return -std::log(2.0) - (t + delta) / 2.0 + 0.5 * nu * std::log(t / delta) +
           log_bessel_i(nu, z);
  }
  // Poisson mixture in one pass, multiplicative recurrences for both the
  // weight and the central chi-squared density.
  const double lam = delta / 2.0;
  long jmin, jmax;
  poisson_window(lam, jmin, jmax);
  double logw = -lam + jmin * std::log(lam) - std::lgamma(jmin + 1.0);
  double logg = (k2 + jmin - 1.0) * std::log(t / 2.0) - t / 2.0 -
                std::lgamma(k2 + jmin) - std::log(2.0);
  double peak = kNegInf;
  double acc = 0.0;
  // two passes in one: track max exponent for a stable log-sum-exp
  std::vector<double> logs;
  logs.reserve(jmax - jmin + 1);
  for (long j = jmin; j <= jmax; ++j) {
    const double l = logw + logg;
    logs.push_back(l);
    peak = std::max(peak, l);
    logw += std::log(lam / (j + 1.0));
    logg += std::log((t / 2.0) / (k2 + j));
  }
  if (peak == kNegInf) return kNegInf;
  for (double l : logs) acc += std::exp(l - peak);
  return peak + std::log(acc);
}

}  // namespace

double noncentral_chi2_pdf(int dof, double delta, double t) {
  if (dof < 1 || delta < 0.0)
    throw std::invalid_argument("noncentral_chi2_pdf: dof >= 1 and delta >= 0 required");
  const double l = noncentral_chi2_log_pdf(dof, delta, t);
  return std::isfinite(l) ? std::exp(l) : 0.0;
}

double noncentral_chi2_cdf(int dof, double delta, double t) {
  if (dof < 1 || delta < 0.0)
    throw std::invalid_argument("noncentral_chi2_cdf: dof >= 1 and delta >= 0 required");
  if (t <= 0.0) return 0.0;
  const double x = t / 2.0;
  const double k2 = dof / 2.0;
  if (delta <= 0.0) return specfun::regularized_gamma_p(k2, x);
  const double lam = delta / 2.0;
  long jmin, jmax;
  poisson_window(lam, jmin, jmax);
  // P(a+1, x) = P(a, x) - x^a e^{-x} / Gamma(a+1); sweep upward once.
  double w = std::exp(-lam + jmin * std::log(lam) - std::lgamma(jmin + 1.0));
  double p = specfun::regularized_gamma_p(k2 + jmin, x);
  double dterm = std::exp((k2 + jmin) * std::log(x) - x - std::lgamma(k2 + jmin + 1.0));
  double F = 0.0;
  for (long j = jmin; j <= jmax; ++j) {
    F += w * std::clamp(p, 0.0, 1.0);
    w *= lam / (j + 1.0);
    p -= dterm;
    dterm *= x / (k2 + j + 1.0);
  }
  return std::clamp(F, 0.0, 1.0);
}

double noncentral_chi2_entropy(int dof, double delta, std::size_t nodes) {
  if (nodes < 16) throw std::invalid_argument("noncentral_chi2_entropy: too few nodes");
  const double mean = dof + delta;
  const double sd = std::sqrt(2.0 * dof + 4.0 * delta);
  const double lo = std::max(1e-12, mean - 12.0 * sd);
  const double hi = mean + 12.0 * sd;
  const double dx = (hi - lo) / static_cast<double>(nodes - 1);
  double acc = 0.0;
  for (std::size_t i = 0; i < nodes; ++i) {
    const double t = lo + i * dx;
    const double l = noncentral_chi2_log_pdf(dof, delta, t);
    if (std::isfinite(l)) {
      const double w = (i == 0 || i + 1 == nodes) ? 0.5 : 1.0;
      acc -= w * std::exp(l) * l;
    }
  }
  return acc * dx;
}

namespace {

// Kolmogorov survival function Q(x) = 2 sum_{k>=1} (-1)^{k-1} e^{-2 k^2 x^2}.
double kolmogorov_q(double x) {
  if (x < 0.2) return 1.0;
  double sum = 0.0, sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * x * x);
    sum += term;
    if (std::abs(term) < 1e-14) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace

KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_test: empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double F = cdf(samples[i]);
    d = std::max(d, std::abs(F - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - F));
  }
  const double sn = std::sqrt(n);
  return {d, kolmogorov_q((sn + 0.12 + 0.11 / sn) * d)};
}

double histogram_entropy_log_bins(const std::vector<double>& samples) {
  if (samples.size() < 1000)
    throw std::invalid_argument(
        "histogram_entropy_log_bins: need at least 1000 samples for a stable "
        "histogram; increase n_samples");
  const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
  if (*mn <= 0.0)
    throw std::invalid_argument("histogram_entropy_log_bins: samples must be positive");
  const double n = static_cast<double>(samples.size());
  const std::size_t K = static_cast<std::size_t>(std::ceil(2.0 * std::cbrt(n)));
  const double lo = std::log(*mn) - 1e-9, hi = std::log(*mx) + 1e-9;
  const double dlog = (hi - lo) / static_cast<double>(K);

  std::vector<std::size_t> counts(K, 0);
  for (double t : samples) {
    const auto b = static_cast<std::size_t>((std::log(t) - lo) / dlog);
    counts[std::min(b, K - 1)]++;
  }
  double h = 0.0;
  std::size_t occupied = 0;
  for (std::size_t i = 0; i < K; ++i) {
    if (counts[i] == 0) continue;
    ++occupied;
    const double p = counts[i] / n;
    const double width = std::exp(lo + (i + 1) * dlog) - std::exp(lo + i * dlog);
    h -= p * std::log(p / width);
  }
  return h + static_cast<double>(occupied - 1) / (2.0 * n);  // Miller-Madow
}

GaussHermite gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: n >= 1 required");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double b = std::sqrt(i / 2.0);
    J(i, i - 1) = b;
    J(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  GaussHermite gh;
  gh.nodes.resize(n);
  gh.weights.resize(n);
  const double mu0 = std::sqrt(M_PI);
  for (int i = 0; i < n; ++i) {
    gh.nodes[i] = es.eigenvalues()(i);
    const double v = es.eigenvectors()(0, i);
    gh.weights[i] = mu0 * v * v;
  }
  return gh;
}

}  // namespace pn::stats
