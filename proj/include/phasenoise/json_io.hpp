#pragma once

// JSON (de)serialization for CLI configs and results. Angles cross this
// boundary in degrees and rates in bits; the library itself works in
// radians and nats.

#include <cmath>
#include <string>

#include <json.hpp>

#include "phasenoise/capacity.hpp"
#include "phasenoise/models.hpp"

namespace pn::io {

using nlohmann::json;

inline double deg2rad(double d) { return d * M_PI / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / M_PI; }
inline double nats2bits(double n) { return n / std::log(2.0); }

inline PhaseNoiseModel model_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "noncoherent") return Noncoherent{};
  if (kind == "wiener") return Wiener{deg2rad(j.at("sigma_delta_deg").get<double>())};
  if (kind == "composite_wiener")
    return CompositeWiener{deg2rad(j.at("sigma_tx_deg").get<double>()),
                           deg2rad(j.at("sigma_rx_deg").get<double>())};
  if (kind == "tikhonov")
    return PartiallyCoherent{CircularDistribution{Tikhonov{j.at("lambda").get<double>()}}};
  if (kind == "partially_coherent_wrapped_gaussian")
    return PartiallyCoherent{
        CircularDistribution{WrappedGaussian{deg2rad(j.at("sigma_deg").get<double>())}}};
  throw std::invalid_argument("model.kind: unknown value '" + kind + "'");
}

inline json model_to_json(const PhaseNoiseModel& model) {
  json j;
  if (std::holds_alternative<Noncoherent>(model)) {
    j["kind"] = "noncoherent";
  } else if (const auto* w = std::get_if<Wiener>(&model)) {
    j["kind"] = "wiener";
    j["sigma_delta_deg"] = rad2deg(w->sigma_delta);
  } else if (const auto* c = std::get_if<CompositeWiener>(&model)) {
    j["kind"] = "composite_wiener";
    j["sigma_tx_deg"] = rad2deg(c->sigma_tx);
    j["sigma_rx_deg"] = rad2deg(c->sigma_rx);
  } else if (const auto* p = std::get_if<PartiallyCoherent>(&model)) {
    if (const auto* t = std::get_if<Tikhonov>(&p->residual)) {
      j["kind"] = "tikhonov";
      j["lambda"] = t->lambda;
    } else if (const auto* g = std::get_if<WrappedGaussian>(&p->residual)) {
      j["kind"] = "partially_coherent_wrapped_gaussian";
      j["sigma_deg"] = rad2deg(g->sigma);
    } else {
      j["kind"] = "noncoherent";
    }
  }
  return j;
}

inline json result_to_json(const PhaseNoiseNumberResult& r) {
  json j;
  j["prelog"] = r.prelog;
  j["chi_lower_bits"] = nats2bits(r.chi_lower);
  if (r.chi_upper) j["chi_upper_bits"] = nats2bits(*r.chi_upper);
  if (r.chi_exact) j["chi_exact_bits"] = nats2bits(*r.chi_exact);
  j["mc_std_error_bits"] = nats2bits(r.mc_std_error);
  j["formula_tags"] = r.formula_tags;
  return j;
}

inline json manifest(std::uint64_t seed, const json& config) {
  json j;
  j["tool"] = "pncap";
  j["version"] = "1.0.0";
  j["seed"] = seed;
  j["config"] = config;
  j["config_hash"] = std::hash<std::string>{}(config.dump());
  return j;
}

}  // namespace pn::io
