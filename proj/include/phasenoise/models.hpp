#pragma once

// Oscillator phase-noise process models and their entropy rates.

#include <variant>

#include <Eigen/Core>

#include "phasenoise/circular.hpp"
#include "phasenoise/rng.hpp"

namespace pn {

struct Noncoherent {};  // memoryless, uniform marginal

struct PartiallyCoherent {  // memoryless residual error after tracking
  CircularDistribution residual;
};

struct Wiener {  // random-walk phase, i.i.d. Gaussian increments mod 2*pi
  double sigma_delta;  // radians, > 0
  explicit Wiener(double sigma_delta_radians);
};

struct CompositeWiener {  // one TX Wiener process plus per-antenna RX processes
  double sigma_tx;  // radians, >= 0
  double sigma_rx;  // radians, >= 0, not both zero
  CompositeWiener(double sigma_tx_radians, double sigma_rx_radians);
};

using PhaseNoiseModel = std::variant<Noncoherent, PartiallyCoherent, Wiener, CompositeWiener>;

enum class OscillatorTopology { CLO, SLO };

struct PhasePath {
  // phases(m, k): antenna m, time k, each entry in [0, 2*pi).
  Eigen::ArrayXXd phases;
  Eigen::Index antennas() const { return phases.rows(); }
  Eigen::Index steps() const { return phases.cols(); }
};

// Differential-entropy rate h({theta_k}) in nats. For the composite model this
// is the entropy of the per-antenna marginal innovation (variance
// sigma_tx^2 + sigma_rx^2); its cross-antenna dependence lives only in
// sample paths.
EntropyEstimate entropy_rate(const PhaseNoiseModel& model,
                             EntropyMethod method = EntropyMethod::Quadrature);

// Marginal one-sample law of theta_k. Uniform for Noncoherent and (stationary)
// Wiener; the residual law for PartiallyCoherent.
CircularDistribution marginal_law(const PhaseNoiseModel& model);

// Innovation law theta_k | theta_{k-1} shifted to zero mean, where defined.
CircularDistribution innovation_law(const PhaseNoiseModel& model);

bool is_memoryless(const PhaseNoiseModel& model);
bool has_uniform_marginal(const PhaseNoiseModel& model);

// I(theta_0; theta_-inf^-1) of one scalar process, in nats.
// Memoryless models: 0. Wiener: ln(2*pi) - h(Delta). CompositeWiener is
// rejected (no single-process decomposition).
double past_mutual_information(const PhaseNoiseModel& model,
                               EntropyMethod method = EntropyMethod::Quadrature);

// Generate an M x n matrix of phase samples. Under CLO one scalar path is
// replicated across rows; under SLO rows are independent. CompositeWiener adds
// a shared TX walk to M independent RX walks (SLO) or to one RX walk (CLO).
PhasePath sample_path(const PhaseNoiseModel& model, OscillatorTopology topology,
                      Eigen::Index M, Eigen::Index n, RngStream& rng);

}  // namespace pn
