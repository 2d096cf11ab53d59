#include "phasenoise/circular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "phasenoise/specfun.hpp"

namespace pn {

double wrap_angle(double radians) {
  double r = std::fmod(radians, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;  // fmod rounding at the seam
  return r;
}

WrappedGaussian::WrappedGaussian(double sigma_radians) : sigma(sigma_radians) {
  if (!std::isfinite(sigma) || sigma <= 0.0)
    throw std::domain_error("WrappedGaussian: sigma must be finite and > 0");
}

Tikhonov::Tikhonov(double concentration) : lambda(concentration) {
  if (!std::isfinite(lambda) || lambda < 0.0)
    throw std::domain_error("Tikhonov: lambda must be finite and >= 0");
}

namespace {

int wrap_terms(double sigma) {
  return static_cast<int>(std::ceil(6.0 * sigma / kTwoPi)) + 2;
}

double wrapped_gaussian_log_pdf(double sigma, double theta) {
  theta = wrap_angle(theta);
  const int L = wrap_terms(sigma);
  const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
  // factor out the dominant term so tiny densities stay representable
  double emin = std::numeric_limits<double>::infinity();
  for (int l = -L; l <= L; ++l) {
    const double d = theta - kTwoPi * l;
    emin = std::min(emin, d * d * inv2s2);
  }
  double sum = 0.0;
  for (int l = -L; l <= L; ++l) {
    const double d = theta - kTwoPi * l;
    sum += std::exp(emin - d * d * inv2s2);
  }
  return -emin + std::log(sum) - 0.5 * std::log(kTwoPi * sigma * sigma);
}

// Best-Fisher rejection sampler for the Tikhonov (von Mises) law, mean 0.
double sample_tikhonov(double lambda, RngStream& rng) {
  if (lambda == 0.0) return rng.uniform_angle();
  const double tau = 1.0 + std::sqrt(1.0 + 4.0 * lambda * lambda);
  const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * lambda);
  const double r = (1.0 + rho * rho) / (2.0 * rho);
  for (;;) {
    const double u1 = rng.uniform();
    const double z = std::cos(M_PI * u1);
    const double f = (1.0 + r * z) / (r + z);
    const double c = lambda * (r - f);
    const double u2 = rng.uniform();
    if (c * (2.0 - c) - u2 > 0.0 || std::log(c / u2) + 1.0 - c >= 0.0) {
      const double u3 = rng.uniform();
      const double theta = (u3 < 0.5 ? -1.0 : 1.0) * std::acos(f);
      return wrap_angle(theta);
    }
  }
}

double quadrature_entropy(const CircularDistribution& dist, std::size_t nodes) {
  const double dx = kTwoPi / static_cast<double>(nodes);
  double acc = 0.0;
  for (std::size_t j = 0; j < nodes; ++j) {
    const double f = pdf(dist, j * dx);
    if (f > 0.0) acc -= f * std::log(f) * dx;
  }
  return acc;
}

double wrapped_gaussian_series_entropy(double sigma) {
  const double s2 = sigma * sigma;
  const double q = std::exp(-s2);
  if (q >= 0.999)
    throw std::domain_error("entropy(series): sigma too small, use quadrature");
  double h = -std::log(specfun::euler_q_product(q) / kTwoPi);
  double sign = -1.0;
  for (int n = 1; n < 100000; ++n) {
    const double term =
        2.0 * sign / n * std::exp(-s2 * (static_cast<double>(n) * n + n) / 2.0) /
        (1.0 - std::exp(-n * s2));
    h += term;
    if (std::abs(term) < 1e-15) break;
    sign = -sign;
  }
  return h;
}

}  // namespace

double log_pdf(const CircularDistribution& dist, double theta) {
  return std::visit(
      [&](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UniformCircular>) {
          return -kLogTwoPi;
        } else if constexpr (std::is_same_v<T, WrappedGaussian>) {
          return wrapped_gaussian_log_pdf(d.sigma, theta);
        } else {
          return d.lambda * std::cos(theta) - kLogTwoPi - specfun::log_bessel_i0(d.lambda);
        }
      },
      dist);
}

double pdf(const CircularDistribution& dist, double theta) {
  return std::exp(log_pdf(dist, theta));
}

double sample(const CircularDistribution& dist, RngStream& rng) {
  return std::visit(
      [&](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UniformCircular>) {
          return rng.uniform_angle();
        } else if constexpr (std::is_same_v<T, WrappedGaussian>) {
          return wrap_angle(rng.normal(d.sigma));
        } else {
          return sample_tikhonov(d.lambda, rng);
        }
      },
      dist);
}

EntropyEstimate entropy(const CircularDistribution& dist, EntropyMethod method,
                        std::size_t nodes) {
  switch (method) {
    case EntropyMethod::Quadrature:
      return {quadrature_entropy(dist, nodes), EntropyMethod::Quadrature, 0.0};
    case EntropyMethod::ClosedForm:
      if (std::holds_alternative<UniformCircular>(dist))
        return {kLogTwoPi, EntropyMethod::ClosedForm, 0.0};
      if (const auto* t = std::get_if<Tikhonov>(&dist)) {
        const double h = kLogTwoPi + specfun::log_bessel_i0(t->lambda) -
                         t->lambda * specfun::bessel_i1_i0_ratio(t->lambda);
        return {h, EntropyMethod::ClosedForm, 0.0};
      }
      throw std::invalid_argument("entropy: no closed form for wrapped Gaussian");
    case EntropyMethod::Series:
      if (const auto* w = std::get_if<WrappedGaussian>(&dist))
        return {wrapped_gaussian_series_entropy(w->sigma), EntropyMethod::Series, 0.0};
      throw std::invalid_argument("entropy: series evaluator is wrapped-Gaussian only");
    case EntropyMethod::GaussianApprox:
      if (const auto* w = std::get_if<WrappedGaussian>(&dist))
        return {0.5 * std::log(kTwoPi * M_E * w->sigma * w->sigma),
                EntropyMethod::GaussianApprox, 0.0};
      throw std::invalid_argument("entropy: Gaussian approximation is wrapped-Gaussian only");
    case EntropyMethod::MonteCarlo:
      throw std::invalid_argument("entropy: Monte Carlo evaluator is not provided here");
  }
  throw std::invalid_argument("entropy: unknown method");
}

EntropyEstimate entropy(const CircularDistribution& dist, std::size_t nodes) {
  if (std::holds_alternative<WrappedGaussian>(dist))
    return entropy(dist, EntropyMethod::Quadrature, nodes);
  return entropy(dist, EntropyMethod::ClosedForm, nodes);
}

EntropyEstimate conditional_phase_entropy(const std::vector<CircularDistribution>& models,
                                          const ConditionalEntropyConfig& cfg, RngStream& rng) {
  if (models.empty()) throw std::invalid_argument("conditional_phase_entropy: M >= 1 required");
  if (cfg.n_samples < 256 || cfg.quadrature_nodes < 16)
    throw std::invalid_argument("conditional_phase_entropy: config too small");

  bool all_uniform = true;
  const double grid_dx = kTwoPi / static_cast<double>(cfg.quadrature_nodes);
  for (const auto& m : models) {
    if (!std::holds_alternative<UniformCircular>(m)) all_uniform = false;
    // reject laws the normalizer grid cannot resolve (point-mass limit)
    double eff_sigma = kTwoPi;
    if (const auto* w = std::get_if<WrappedGaussian>(&m)) eff_sigma = w->sigma;
    if (const auto* t = std::get_if<Tikhonov>(&m))
      if (t->lambda > 1.0) eff_sigma = 1.0 / std::sqrt(t->lambda);
    if (eff_sigma < 4.0 * grid_dx)
      throw std::domain_error("conditional_phase_entropy: law too concentrated for the grid");
  }
  if (all_uniform) return {kLogTwoPi, EntropyMethod::MonteCarlo, 0.0};

  const std::size_t M = models.size();
  const std::size_t blocks = 256;
  const std::size_t per_block = (cfg.n_samples + blocks - 1) / blocks;
  const std::size_t n = per_block * blocks;

  std::vector<double> block_mean(blocks, 0.0);
  std::vector<double> log_grid(cfg.quadrature_nodes);
  double total = 0.0;
  for (std::size_t b = 0; b < blocks; ++b) {
    RngStream sub = rng.substream(b);
    double acc = 0.0;
    for (std::size_t i = 0; i < per_block; ++i) {
      const double phi = sub.uniform_angle();
      double log_num = 0.0;
      std::fill(log_grid.begin(), log_grid.end(), 0.0);
      for (std::size_t m = 0; m < M; ++m) {
        const double theta = sample(models[m], sub);
        const double v = wrap_angle(phi + theta);
        log_num += log_pdf(models[m], theta);
        for (std::size_t j = 0; j < cfg.quadrature_nodes; ++j)
          log_grid[j] += log_pdf(models[m], v - j * grid_dx);
      }
      const double mx = *std::max_element(log_grid.begin(), log_grid.end());
      double z = 0.0;
      for (double lg : log_grid) z += std::exp(lg - mx);
      const double log_norm = mx + std::log(z) + std::log(grid_dx);
      acc += -(log_num - log_norm);
    }
    block_mean[b] = acc / static_cast<double>(per_block);
    total += acc;
  }
  const double mean = total / static_cast<double>(n);

  // bootstrap over block means
  RngStream boot = rng.substream(0xb00dull);
  double se_acc = 0.0, se_acc2 = 0.0;
  for (std::size_t r = 0; r < cfg.bootstrap_resamples; ++r) {
    double s = 0.0;
    for (std::size_t b = 0; b < blocks; ++b)
      s += block_mean[static_cast<std::size_t>(boot.uniform() * blocks) % blocks];
    s /= static_cast<double>(blocks);
    se_acc += s;
    se_acc2 += s * s;
  }
  const double bm = se_acc / cfg.bootstrap_resamples;
  const double se = std::sqrt(std::max(0.0, se_acc2 / cfg.bootstrap_resamples - bm * bm));
  return {mean, EntropyMethod::MonteCarlo, se};
}

}  // namespace pn
