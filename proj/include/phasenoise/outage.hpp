#pragma once

// Quasi-static Rayleigh fading outage analysis: Monte-Carlo outage curves
// for the high-SNR rate 0.5 ln(rho) + chi(h), a closed-form oracle for the
// CLO/SLO epsilon-outage offsets, and the signal-level channel simulator.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "phasenoise/capacity.hpp"
#include "phasenoise/models.hpp"
#include "phasenoise/rng.hpp"

namespace pn {

// i.i.d. CN(0,1) entries, constant per codeword.
struct FadingEnsemble {
  Eigen::Index antennas = 1;
};

struct OutageCurve {
  std::vector<double> rate_grid_bits;   // ascending
  std::vector<double> probabilities;    // nondecreasing along the grid
  std::vector<double> ci_halfwidth;     // 95%, normal approximation
  std::size_t n_samples = 0;
  std::vector<double> chi_bits_sorted;  // per-draw rate offsets, for quantiles
};

struct McConfig {
  std::size_t n_samples = 100000;
  int n_workers = 1;       // scheduling only; results are worker-count invariant
  std::size_t chunk = 8192;
};

// Empirical CDF of R(h) = 0.5 log2(rho) + chi(h) over fading draws. Requires
// a spec shape whose phase-noise number is exact (CLO, or SLO with uniform
// marginals); bounded-only shapes are refused.
OutageCurve outage_cdf_mc(const ChannelSpec& spec_template, const SnrSpec& snr,
                          const std::vector<double>& rate_grid_bits,
                          const McConfig& cfg, const RngStream& rng);

// epsilon-quantile rate (bits) read off the stored per-draw offsets.
double outage_rate_mc(const OutageCurve& curve, double epsilon, double rho);

// Closed-form epsilon-outage rate offsets in bits: the chi gain-term quantile
// with the model/SNR-dependent constant stripped. CLO uses the Gamma(M)
// quantile of ||h||^2; SLO uses the max|h_m|^2 quantile.
double outage_rate_analytic(OscillatorTopology topology, int M, double epsilon);

struct GapRow {
  int M = 1;
  double delta_r_analytic_bits = 0.0;
  std::optional<double> delta_r_mc_bits;      // at sigma_delta
  std::optional<double> delta_r_mc_alt_bits;  // at sigma_delta_alt
  double ci_bits = 0.0;
};

struct GapConfig {
  double epsilon = 0.1;
  double sigma_delta = 6.0 * M_PI / 180.0;      // radians
  double sigma_delta_alt = 2.0 * M_PI / 180.0;  // radians, sigma-independence check
  double rho_db = 20.0;
  McConfig mc;                                  // mc.n_samples == 0 disables MC columns
};

// CLO-vs-SLO epsilon-outage rate difference per array size (downlink Wiener).
std::vector<GapRow> gap_vs_m(const std::vector<int>& m_list, const GapConfig& cfg,
                             const RngStream& rng);

// ---- signal-level simulation (achievability constructions) ----------------

struct ChannelSample {
  std::complex<double> x;  // transmitted scalar symbol
  Eigen::VectorXcd y;      // received vector (uplink) or scalar-as-vector (downlink)
  double t = 0.0;          // ||y||^2
  Eigen::VectorXd theta;   // phase slice used for this sample
};

enum class InputPolicy { GammaAmplitude, ConstantAmplitude, Supplied };

struct SimOptions {
  InputPolicy policy = InputPolicy::GammaAmplitude;
  double constant_amplitude = 1.0;
  std::complex<double> supplied_symbol = 1.0;  // used by Supplied
  bool zero_noise = false;
};

// One slot of y = Theta h x + w (uplink) or y = h^T Theta x_vec + w
// (downlink, isotropic x_vec = x * h*/||h||). Noise is CN(0,2) per dimension.
ChannelSample simulate_channel(const ChannelSpec& spec, const SnrSpec& snr,
                               const SimOptions& opt, RngStream& rng);

std::complex<double> mrc_combine(const Eigen::VectorXcd& y, const Eigen::VectorXcd& h);
Eigen::VectorXcd conjugate_beamform(const Eigen::VectorXcd& h, std::complex<double> s);
Eigen::Index antenna_select(const Eigen::VectorXcd& h);  // lowest index on ties

// ---- noncoherent rate lower bound ------------------------------------------

struct RateLbResult {
  double rate_nats = 0.0;
  double h_t_nats = 0.0;          // histogram estimate, Miller-Madow corrected
  double h_t_given_x_nats = 0.0;  // quadrature over the amplitude law
  double std_error = 0.0;
};

struct RateLbConfig {
  std::size_t n_samples = 1000000;
  int gh_nodes = 96;  // Gauss-Hermite nodes for the amplitude average
};

// I(x; ||y||^2) for |x|^2 = 4 rho s, s ~ Gamma(1/2,1): h(t) from a log-binned
// histogram of simulated energies, h(t|x) from the noncentral chi-squared
// entropy averaged over the amplitude law by quadrature.
RateLbResult rate_lb_noncoherent_mc(const Eigen::VectorXcd& h, const SnrSpec& snr,
                                    const RateLbConfig& cfg, const RngStream& rng);

}  // namespace pn
