#include "phasenoise/models.hpp"

#include <cmath>
#include <stdexcept>

namespace pn {

Wiener::Wiener(double sigma_delta_radians) : sigma_delta(sigma_delta_radians) {
  if (!std::isfinite(sigma_delta) || sigma_delta <= 0.0)
    throw std::domain_error("Wiener: sigma_delta must be finite and > 0");
}

CompositeWiener::CompositeWiener(double sigma_tx_radians, double sigma_rx_radians)
    : sigma_tx(sigma_tx_radians), sigma_rx(sigma_rx_radians) {
  if (!std::isfinite(sigma_tx) || !std::isfinite(sigma_rx) || sigma_tx < 0.0 || sigma_rx < 0.0)
    throw std::domain_error("CompositeWiener: sigmas must be finite and >= 0");
  if (sigma_tx == 0.0 && sigma_rx == 0.0)
    throw std::domain_error("CompositeWiener: at least one sigma must be positive");
}

EntropyEstimate entropy_rate(const PhaseNoiseModel& model, EntropyMethod method) {
  return std::visit(
      [&](const auto& m) -> EntropyEstimate {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Noncoherent>) {
          return {kLogTwoPi, EntropyMethod::ClosedForm, 0.0};
        } else if constexpr (std::is_same_v<T, PartiallyCoherent>) {
          if (std::holds_alternative<WrappedGaussian>(m.residual))
            return entropy(m.residual, method);
          return entropy(m.residual);  // closed forms for uniform / Tikhonov
        } else if constexpr (std::is_same_v<T, Wiener>) {
          return entropy(CircularDistribution{WrappedGaussian{m.sigma_delta}}, method);
        } else {
          const double s = std::hypot(m.sigma_tx, m.sigma_rx);
          return entropy(CircularDistribution{WrappedGaussian{s}}, method);
        }
      },
      model);
}

CircularDistribution marginal_law(const PhaseNoiseModel& model) {
  return std::visit(
      [](const auto& m) -> CircularDistribution {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PartiallyCoherent>)
          return m.residual;
        else
          return UniformCircular{};  // noncoherent; Wiener is stationary uniform
      },
      model);
}

CircularDistribution innovation_law(const PhaseNoiseModel& model) {
  if (const auto* w = std::get_if<Wiener>(&model))
    return WrappedGaussian{w->sigma_delta};
  if (const auto* c = std::get_if<CompositeWiener>(&model))
    return WrappedGaussian{std::hypot(c->sigma_tx, c->sigma_rx)};
  throw std::invalid_argument("innovation_law: model has no innovation process");
}

bool is_memoryless(const PhaseNoiseModel& model) {
  return std::holds_alternative<Noncoherent>(model) ||
         std::holds_alternative<PartiallyCoherent>(model);
}

bool has_uniform_marginal(const PhaseNoiseModel& model) {
  if (std::holds_alternative<Noncoherent>(model) || std::holds_alternative<Wiener>(model) ||
      std::holds_alternative<CompositeWiener>(model))
    return true;
  const auto& pc = std::get<PartiallyCoherent>(model);
  if (std::holds_alternative<UniformCircular>(pc.residual)) return true;
  if (const auto* t = std::get_if<Tikhonov>(&pc.residual)) return t->lambda == 0.0;
  return false;
}

double past_mutual_information(const PhaseNoiseModel& model, EntropyMethod method) {
  if (is_memoryless(model)) return 0.0;
  if (const auto* w = std::get_if<Wiener>(&model)) {
    const double h_delta =
        entropy(CircularDistribution{WrappedGaussian{w->sigma_delta}}, method).value;
    return kLogTwoPi - h_delta;
  }
  throw std::invalid_argument(
      "past_mutual_information: unsupported for CompositeWiener (cross-antenna memory)");
}

namespace {

void fill_iid_row(Eigen::ArrayXXd& out, Eigen::Index row, const CircularDistribution& law,
                  RngStream& rng) {
  for (Eigen::Index k = 0; k < out.cols(); ++k) out(row, k) = sample(law, rng);
}

void fill_wiener_row(Eigen::ArrayXXd& out, Eigen::Index row, double sigma, RngStream& rng) {
  double theta = rng.uniform_angle();
  for (Eigen::Index k = 0; k < out.cols(); ++k) {
    out(row, k) = theta;
    theta = wrap_angle(theta + rng.normal(sigma));
  }
}

}  // namespace

PhasePath sample_path(const PhaseNoiseModel& model, OscillatorTopology topology,
                      Eigen::Index M, Eigen::Index n, RngStream& rng) {
  if (M < 1 || n < 1) throw std::invalid_argument("sample_path: M >= 1 and n >= 1 required");
  Eigen::ArrayXXd phases(M, n);

  const bool clo = topology == OscillatorTopology::CLO;
  if (const auto* c = std::get_if<CompositeWiener>(&model)) {
    // shared TX walk plus one RX walk (CLO) or M independent RX walks (SLO)
    Eigen::ArrayXd tx(n);
    double t = rng.uniform_angle();
    for (Eigen::Index k = 0; k < n; ++k) {
      tx(k) = t;
      if (c->sigma_tx > 0.0) t = wrap_angle(t + rng.normal(c->sigma_tx));
    }
    const Eigen::Index rows = clo ? 1 : M;
    for (Eigen::Index m = 0; m < rows; ++m) {
      double r = rng.uniform_angle();
      for (Eigen::Index k = 0; k < n; ++k) {
        phases(m, k) = wrap_angle(tx(k) + r);
        if (c->sigma_rx > 0.0) r = wrap_angle(r + rng.normal(c->sigma_rx));
      }
    }
    if (clo)
      for (Eigen::Index m = 1; m < M; ++m) phases.row(m) = phases.row(0);
    return {phases};
  }

  const Eigen::Index rows = clo ? 1 : M;
  for (Eigen::Index m = 0; m < rows; ++m) {
    if (const auto* w = std::get_if<Wiener>(&model))
      fill_wiener_row(phases, m, w->sigma_delta, rng);
    else
      fill_iid_row(phases, m, marginal_law(model), rng);
  }
  if (clo)
    for (Eigen::Index m = 1; m < M; ++m) phases.row(m) = phases.row(0);
  return {phases};
}

}  // namespace pn
