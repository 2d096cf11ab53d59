#pragma once

// Closed-form phase-noise numbers and bounds for the four scenarios
// (uplink/downlink x common/separate oscillators), plus the high-SNR
// capacity approximation C(rho) ~ 0.5 ln(rho) + chi. Everything internal
// is in nats.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "phasenoise/models.hpp"

namespace pn {

enum class LinkDirection { Uplink, Downlink };

struct ChannelSpec {
  LinkDirection direction = LinkDirection::Uplink;
  OscillatorTopology topology = OscillatorTopology::CLO;
  Eigen::VectorXcd h;  // path-loss coefficients, ||h|| > 0
  PhaseNoiseModel model = Noncoherent{};

  Eigen::Index antennas() const { return h.size(); }
  void validate() const;
};

struct SnrSpec {
  // Linear rho under the convention used throughout: noise variance 2 per complex
  // dimension, power constraint E||x||^2 <= 2 rho. SNR = rho.
  double rho = 1.0;
  static SnrSpec from_db(double snr_db);
};

struct PhaseNoiseNumberResult {
  double prelog = 0.5;
  double chi_lower = 0.0;                // nats
  std::optional<double> chi_upper;       // nats; absent when only a lower bound exists
  std::optional<double> chi_exact;       // nats; present when the formula is exact
  double mc_std_error = 0.0;             // nats; 0 for closed-form results
  std::vector<std::string> formula_tags;

  double chi_best() const { return chi_exact ? *chi_exact : chi_lower; }
};

struct PnnOptions {
  EntropyMethod entropy_method = EntropyMethod::Quadrature;  // for Wiener-family entropies
  std::size_t quadrature_nodes = 4096;
  // Monte-Carlo settings for the memoryless SLO conditional-entropy path.
  std::uint64_t seed = 1;
  std::size_t n_samples = 200000;
  std::size_t cond_quadrature_nodes = 512;
};

// SISO: chi = 0.5 ln(|h|^2/2) + ln(2 pi) - h({theta_k}); exact.
PhaseNoiseNumberResult pnn_siso(std::complex<double> h, const PhaseNoiseModel& model,
                                const PnnOptions& opt = {});

// Uplink CLO: maximal-ratio combining reduces to SISO with gain ||h||; exact.
PhaseNoiseNumberResult pnn_ul_clo(const ChannelSpec& spec, const PnnOptions& opt = {});

// Uplink SLO. Memoryless models: exact via the conditional phase entropy
// h(phi | phi + theta). Wiener: lower bound from the averaged-innovation
// chain (entropy of a wrapped Gaussian with variance sigma^2/M), upper bound
// from the uniform-marginal conditional entropy plus M times the single
// process past mutual information.
PhaseNoiseNumberResult pnn_ul_slo(const ChannelSpec& spec, const PnnOptions& opt = {});

// Uplink SLO with a composite TX/RX Wiener model: lower bound only, effective
// innovation variance sigma_tx^2 + sigma_rx^2 / M.
PhaseNoiseNumberResult pnn_ul_slo_composite(const ChannelSpec& spec, const PnnOptions& opt = {});

// Downlink CLO: maximum-ratio transmission; same expression as uplink CLO.
PhaseNoiseNumberResult pnn_dl_clo(const ChannelSpec& spec, const PnnOptions& opt = {});

// Downlink bounds: antenna-selection lower bound always; upper bound exact
// for CLO, tight for SLO with uniform marginals, otherwise tagged untight.
PhaseNoiseNumberResult pnn_dl_bounds(const ChannelSpec& spec, const PnnOptions& opt = {});

// Downlink SLO with i.i.d. uniform-marginal processes: exact, achieved by
// selecting the strongest antenna (lowest index on ties).
PhaseNoiseNumberResult pnn_dl_slo_uniform(const ChannelSpec& spec, const PnnOptions& opt = {});

// Dispatch on (direction, topology).
PhaseNoiseNumberResult phase_noise_number(const ChannelSpec& spec, const PnnOptions& opt = {});

struct RateInterval {
  double lower = 0.0;  // nats / channel use
  std::optional<double> upper;
  bool exact = false;
};

// [0.5 ln rho + chi_lower, 0.5 ln rho + chi_upper].
RateInterval capacity_highsnr(const ChannelSpec& spec, const SnrSpec& snr,
                              const PnnOptions& opt = {});

}  // namespace pn
