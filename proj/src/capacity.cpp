#include "phasenoise/capacity.hpp"

#include <cmath>
#include <stdexcept>

namespace pn {

namespace {

const char* method_tag(EntropyMethod m) {
  switch (m) {
    case EntropyMethod::Series: return "entropy=series";
    case EntropyMethod::Quadrature: return "entropy=quadrature";
    case EntropyMethod::GaussianApprox: return "entropy=gaussian_approx";
    case EntropyMethod::MonteCarlo: return "entropy=monte_carlo";
    case EntropyMethod::ClosedForm: return "entropy=closed_form";
  }
  return "entropy=?";
}

double coherent_gain_term(const Eigen::VectorXcd& h) {
  return 0.5 * std::log(h.squaredNorm() / 2.0);
}

double best_antenna_gain_term(const Eigen::VectorXcd& h) {
  double best = 0.0;
  for (Eigen::Index m = 0; m < h.size(); ++m) best = std::max(best, std::norm(h(m)));
  return 0.5 * std::log(best / 2.0);
}

double wiener_entropy(double sigma, const PnnOptions& opt) {
  return entropy(CircularDistribution{WrappedGaussian{sigma}}, opt.entropy_method,
                 opt.quadrature_nodes)
      .value;
}

PhaseNoiseNumberResult exact_result(double chi, std::vector<std::string> tags,
                                    double std_err = 0.0) {
  PhaseNoiseNumberResult r;
  r.chi_lower = chi;
  r.chi_upper = chi;
  r.chi_exact = chi;
  r.mc_std_error = std_err;
  r.formula_tags = std::move(tags);
  return r;
}

}  // namespace

void ChannelSpec::validate() const {
  if (h.size() < 1 || h.squaredNorm() <= 0.0)
    throw std::invalid_argument("ChannelSpec: need at least one antenna and ||h|| > 0");
}

SnrSpec SnrSpec::from_db(double snr_db) {
  return SnrSpec{std::pow(10.0, snr_db / 10.0)};
}

PhaseNoiseNumberResult pnn_siso(std::complex<double> h, const PhaseNoiseModel& model,
                                const PnnOptions& opt) {
  if (std::norm(h) <= 0.0) throw std::invalid_argument("pnn_siso: |h| > 0 required");
  const EntropyEstimate hr = entropy_rate(model, opt.entropy_method);
  const double chi = 0.5 * std::log(std::norm(h) / 2.0) + kLogTwoPi - hr.value;
  return exact_result(chi, {"siso", method_tag(hr.method)});
}

PhaseNoiseNumberResult pnn_ul_clo(const ChannelSpec& spec, const PnnOptions& opt) {
  spec.validate();
  if (spec.direction != LinkDirection::Uplink || spec.topology != OscillatorTopology::CLO)
    throw std::invalid_argument("pnn_ul_clo: spec is not uplink/CLO");
  const EntropyEstimate hr = entropy_rate(spec.model, opt.entropy_method);
  const double chi = coherent_gain_term(spec.h) + kLogTwoPi - hr.value;
  return exact_result(chi, {"ul-clo", "mrc", method_tag(hr.method)});
}

PhaseNoiseNumberResult pnn_ul_slo(const ChannelSpec& spec, const PnnOptions& opt) {
  spec.validate();
  if (spec.direction != LinkDirection::Uplink || spec.topology != OscillatorTopology::SLO)
    throw std::invalid_argument("pnn_ul_slo: spec is not uplink/SLO");
  if (std::holds_alternative<CompositeWiener>(spec.model))
    return pnn_ul_slo_composite(spec, opt);

  const Eigen::Index M = spec.antennas();
  const double gain = coherent_gain_term(spec.h);

  if (std::holds_alternative<Noncoherent>(spec.model)) {
    // uniform marginals: h(phi | phi + theta) = ln(2 pi) exactly
    return exact_result(gain, {"ul-slo", "noncoherent"});
  }

  if (is_memoryless(spec.model)) {
    // exact memoryless form: chi = gain + ln(2 pi) - h(phi | phi + theta)
    std::vector<CircularDistribution> laws(static_cast<std::size_t>(M),
                                           marginal_law(spec.model));
    RngStream rng(opt.seed);
    const EntropyEstimate ce = conditional_phase_entropy(
        laws, {opt.n_samples, opt.cond_quadrature_nodes, 200}, rng);
    const double chi = gain + kLogTwoPi - ce.value;
    return exact_result(chi, {"ul-slo", "memoryless", "conditional_entropy=monte_carlo"},
                        ce.std_error);
  }

  // Wiener with memory: bound pair
  const auto& w = std::get<Wiener>(spec.model);
  if (M == 1) {
    // SLO and CLO coincide; the innovation-averaging chain is tight
    ChannelSpec clo = spec;
    clo.topology = OscillatorTopology::CLO;
    PhaseNoiseNumberResult r = pnn_ul_clo(clo, opt);
    r.formula_tags = {"ul-slo", "m1-reduction", method_tag(opt.entropy_method)};
    return r;
  }
  const double h_avg = wiener_entropy(w.sigma_delta / std::sqrt(static_cast<double>(M)), opt);
  const double h_delta = wiener_entropy(w.sigma_delta, opt);

  PhaseNoiseNumberResult r;
  // h(phi | theta + phi) with the uniform stationary marginal equals
  // ln(2 pi); the M independent processes contribute M times the scalar
  // past mutual information.
  r.chi_upper = gain + static_cast<double>(M) * (kLogTwoPi - h_delta);
  r.chi_lower = gain + kLogTwoPi - h_avg;
  r.formula_tags = {"ul-slo", "wiener-bound-chain", "upper=uniform-marginal-loose",
                    method_tag(opt.entropy_method)};
  if (r.chi_lower > *r.chi_upper) {
    // The innovation-averaging chain assumes wrapping is negligible; once the
    // increment sd is large enough that it crosses the exact upper bound, the
    // chain no longer applies. Fall back to the CLO value, which is always a
    // valid lower bound for separate oscillators.
    r.chi_lower = gain + kLogTwoPi - h_delta;
    r.formula_tags[1] = "lower=clo-fallback";
  }
  return r;
}

PhaseNoiseNumberResult pnn_ul_slo_composite(const ChannelSpec& spec, const PnnOptions& opt) {
  spec.validate();
  const auto* c = std::get_if<CompositeWiener>(&spec.model);
  if (spec.topology != OscillatorTopology::SLO || c == nullptr)
    throw std::invalid_argument("pnn_ul_slo_composite: spec is not SLO/CompositeWiener");
  const double M = static_cast<double>(spec.antennas());
  const double eff_sigma = std::sqrt(c->sigma_tx * c->sigma_tx + c->sigma_rx * c->sigma_rx / M);
  PhaseNoiseNumberResult r;
  r.chi_lower = coherent_gain_term(spec.h) + kLogTwoPi - wiener_entropy(eff_sigma, opt);
  r.chi_upper.reset();
  r.formula_tags = {"ul-slo-composite", "lower-bound-only", method_tag(opt.entropy_method)};
  return r;
}

PhaseNoiseNumberResult pnn_dl_clo(const ChannelSpec& spec, const PnnOptions& opt) {
  spec.validate();
  if (spec.direction != LinkDirection::Downlink || spec.topology != OscillatorTopology::CLO)
    throw std::invalid_argument("pnn_dl_clo: spec is not downlink/CLO");
  const EntropyEstimate hr = entropy_rate(spec.model, opt.entropy_method);
  const double chi = coherent_gain_term(spec.h) + kLogTwoPi - hr.value;
  return exact_result(chi, {"dl-clo", "mrt", method_tag(hr.method)});
}

PhaseNoiseNumberResult pnn_dl_slo_uniform(const ChannelSpec& spec, const PnnOptions& opt) {
  spec.validate();
  if (spec.topology != OscillatorTopology::SLO)
    throw std::invalid_argument("pnn_dl_slo_uniform: SLO topology required");
  if (!has_uniform_marginal(spec.model))
    throw std::invalid_argument("pnn_dl_slo_uniform: model must have uniform marginals");
  const EntropyEstimate hr = entropy_rate(spec.model, opt.entropy_method);
  const double chi = best_antenna_gain_term(spec.h) + kLogTwoPi - hr.value;
  return exact_result(chi, {"dl-slo", "antenna-selection", method_tag(hr.method)});
}

PhaseNoiseNumberResult pnn_dl_bounds(const ChannelSpec& spec, const PnnOptions& opt) {
  spec.validate();
  if (spec.direction != LinkDirection::Downlink)
    throw std::invalid_argument("pnn_dl_bounds: downlink spec required");
  const EntropyEstimate hr = entropy_rate(spec.model, opt.entropy_method);
  const double lower = kLogTwoPi + best_antenna_gain_term(spec.h) - hr.value;

  PhaseNoiseNumberResult r;
  r.chi_lower = lower;
  if (spec.topology == OscillatorTopology::CLO) {
    // The duality upper bound collapses to the exact CLO value.
    const double clo = coherent_gain_term(spec.h) + kLogTwoPi - hr.value;
    r.chi_upper = clo;
    r.chi_exact = clo;
    r.formula_tags = {"dl-bounds", "clo-reduction", method_tag(hr.method)};
    return r;
  }
  if (has_uniform_marginal(spec.model) &&
      !std::holds_alternative<CompositeWiener>(spec.model)) {
    // i.i.d. uniform marginals: sup term is max_m |h_m|^2 and the bound pair
    // closes onto the antenna-selection value.
    r.chi_upper = lower;
    r.chi_exact = lower;
    r.formula_tags = {"dl-bounds", "iid-uniform-exact", method_tag(hr.method)};
    return r;
  }
  // General SLO: keep the always-valid Cauchy-Schwarz sup and the
  // independent-process entropy floor; not tight.
  r.chi_upper = kLogTwoPi + coherent_gain_term(spec.h) - hr.value;
  r.formula_tags = {"dl-bounds", "sup/inf not tight", method_tag(hr.method)};
  return r;
}

PhaseNoiseNumberResult phase_noise_number(const ChannelSpec& spec, const PnnOptions& opt) {
  spec.validate();
  if (spec.direction == LinkDirection::Uplink)
    return spec.topology == OscillatorTopology::CLO ? pnn_ul_clo(spec, opt)
                                                    : pnn_ul_slo(spec, opt);
  if (spec.topology == OscillatorTopology::CLO) return pnn_dl_clo(spec, opt);
  if (has_uniform_marginal(spec.model) && !std::holds_alternative<CompositeWiener>(spec.model))
    return pnn_dl_slo_uniform(spec, opt);
  return pnn_dl_bounds(spec, opt);
}

RateInterval capacity_highsnr(const ChannelSpec& spec, const SnrSpec& snr,
                              const PnnOptions& opt) {
  if (!(snr.rho > 0.0) || !std::isfinite(snr.rho))
    throw std::invalid_argument("capacity_highsnr: rho must be finite and positive");
  const PhaseNoiseNumberResult pnn = phase_noise_number(spec, opt);
  const double base = 0.5 * std::log(snr.rho);
  RateInterval ri;
  ri.lower = base + pnn.chi_lower;
  if (pnn.chi_upper) ri.upper = base + *pnn.chi_upper;
  ri.exact = pnn.chi_exact.has_value();
  return ri;
}

}  // namespace pn
