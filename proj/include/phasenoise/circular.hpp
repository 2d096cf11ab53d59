#pragma once

// Circular (mod 2*pi) probability laws: pdf, sampling, differential entropy
// through interchangeable evaluators, and the Monte-Carlo conditional phase
// entropy h(phi | phi + theta_1, ..., phi + theta_M) with phi uniform.

#include <cstddef>
#include <variant>
#include <vector>

#include "phasenoise/rng.hpp"

namespace pn {

constexpr double kTwoPi = 2.0 * M_PI;
constexpr double kLogTwoPi = 1.8378770664093454836;  // ln(2*pi)

// Reduce any real angle into [0, 2*pi).
double wrap_angle(double radians);

struct UniformCircular {};

struct WrappedGaussian {
  double sigma;  // radians, > 0
  explicit WrappedGaussian(double sigma_radians);
};

struct Tikhonov {
  double lambda;  // concentration, >= 0
  explicit Tikhonov(double concentration);
};

using CircularDistribution = std::variant<UniformCircular, WrappedGaussian, Tikhonov>;

enum class EntropyMethod { Series, Quadrature, GaussianApprox, MonteCarlo, ClosedForm };

struct EntropyEstimate {
  double value = 0.0;  // nats
  EntropyMethod method = EntropyMethod::ClosedForm;
  double std_error = 0.0;  // nats, 0 for deterministic evaluators
};

double pdf(const CircularDistribution& dist, double theta);
double log_pdf(const CircularDistribution& dist, double theta);

double sample(const CircularDistribution& dist, RngStream& rng);

// Differential entropy in nats. Evaluators:
//   Series        -- wrapped Gaussian only (product/alternating-sum form)
//   Quadrature    -- any law, periodic trapezoid of -f ln f, `nodes` points
//   GaussianApprox-- wrapped Gaussian only, 0.5 ln(2 pi e sigma^2)
//   ClosedForm    -- uniform and Tikhonov
// Default routing: uniform -> ClosedForm, wrapped Gaussian -> Quadrature,
// Tikhonov -> ClosedForm.
EntropyEstimate entropy(const CircularDistribution& dist, EntropyMethod method,
                        std::size_t nodes = 4096);
EntropyEstimate entropy(const CircularDistribution& dist, std::size_t nodes = 4096);

struct ConditionalEntropyConfig {
  std::size_t n_samples = 200000;
  std::size_t quadrature_nodes = 512;
  std::size_t bootstrap_resamples = 200;
};

// Monte-Carlo estimate of h(phi | v) with phi ~ U[0,2pi), v_m = phi + theta_m
// mod 2pi and theta_m independently drawn from models[m]. When every model is
// uniform the observation carries no information and ln(2 pi) is returned
// exactly. Work is split into seed-derived chunks, so the result does not
// depend on how it is scheduled.
EntropyEstimate conditional_phase_entropy(const std::vector<CircularDistribution>& models,
                                          const ConditionalEntropyConfig& cfg, RngStream& rng);

}  // namespace pn
