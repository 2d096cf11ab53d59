// pncap: phase-noise channel capacity toolbox.
//
// Conventions at the command-line boundary: SNR in dB with linear
// rho = 10^(dB/10) under the noise-variance-2 convention (the power
// constraint is E||x||^2 <= 2 rho, so rho is NOT the per-dimension SNR of
// unit-variance conventions); angles in degrees; rates in bits/channel use.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "phasenoise/capacity.hpp"
#include "phasenoise/circular.hpp"
#include "phasenoise/json_io.hpp"
#include "phasenoise/outage.hpp"
#include "phasenoise/specfun.hpp"
#include "phasenoise/stats.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitValidation = 3;

struct Options {
  std::string config_path;
  std::string output_path;   // empty -> stdout
  std::string manifest_path; // empty -> <output>.manifest.json when output set
  std::string direction = "uplink";
  std::string topology = "clo";
  std::string model_kind = "wiener";
  double sigma_delta_deg = 6.0;
  double lambda = 10.0;
  double sigma_tx_deg = 6.0;
  double sigma_rx_deg = 6.0;
  int m = 1;
  std::vector<double> h_real;
  std::vector<double> h_imag;
  double snr_db = 20.0;
  double epsilon = 0.1;
  std::uint64_t seed = 1;
  std::size_t n_samples = 100000;
  int workers = 1;
  // entropy-curve
  double sigma_min_deg = 2.0;
  double sigma_max_deg = 360.0;
  int steps = 180;
  // gap
  std::vector<int> m_list{1, 2, 5, 10, 20};
  double sigma_delta_alt_deg = 2.0;
};

json options_to_json(const Options& o) {
  json j;
  j["direction"] = o.direction;
  j["topology"] = o.topology;
  j["model"] = {{"kind", o.model_kind},
                {"sigma_delta_deg", o.sigma_delta_deg},
                {"lambda", o.lambda},
                {"sigma_tx_deg", o.sigma_tx_deg},
                {"sigma_rx_deg", o.sigma_rx_deg}};
  j["m"] = o.m;
  j["h_real"] = o.h_real;
  j["h_imag"] = o.h_imag;
  j["snr_db"] = o.snr_db;
  j["epsilon"] = o.epsilon;
  j["seed"] = o.seed;
  j["n_samples"] = o.n_samples;
  j["workers"] = o.workers;
  j["sigma_min_deg"] = o.sigma_min_deg;
  j["sigma_max_deg"] = o.sigma_max_deg;
  j["steps"] = o.steps;
  j["m_list"] = o.m_list;
  j["sigma_delta_alt_deg"] = o.sigma_delta_alt_deg;
  return j;
}

// JSON config file provides defaults; explicitly passed flags win because
// they are applied by CLI11 after this runs.
void apply_config_file(Options& o) {
  if (o.config_path.empty()) return;
  std::ifstream in(o.config_path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + o.config_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw CLI::ValidationError("--config", std::string("invalid JSON: ") + e.what());
  }
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("direction", o.direction);
  get("topology", o.topology);
  get("m", o.m);
  get("h_real", o.h_real);
  get("h_imag", o.h_imag);
  get("snr_db", o.snr_db);
  get("epsilon", o.epsilon);
  get("seed", o.seed);
  get("n_samples", o.n_samples);
  get("workers", o.workers);
  get("sigma_min_deg", o.sigma_min_deg);
  get("sigma_max_deg", o.sigma_max_deg);
  get("steps", o.steps);
  get("m_list", o.m_list);
  get("sigma_delta_alt_deg", o.sigma_delta_alt_deg);
  if (j.contains("model")) {
    const json& m = j.at("model");
    if (m.contains("kind")) o.model_kind = m.at("kind").get<std::string>();
    if (m.contains("sigma_delta_deg")) o.sigma_delta_deg = m.at("sigma_delta_deg").get<double>();
    if (m.contains("lambda")) o.lambda = m.at("lambda").get<double>();
    if (m.contains("sigma_tx_deg")) o.sigma_tx_deg = m.at("sigma_tx_deg").get<double>();
    if (m.contains("sigma_rx_deg")) o.sigma_rx_deg = m.at("sigma_rx_deg").get<double>();
  }
}

pn::PhaseNoiseModel build_model(const Options& o) {
  json j;
  j["kind"] = o.model_kind;
  j["sigma_delta_deg"] = o.sigma_delta_deg;
  j["lambda"] = o.lambda;
  j["sigma_tx_deg"] = o.sigma_tx_deg;
  j["sigma_rx_deg"] = o.sigma_rx_deg;
  j["sigma_deg"] = o.sigma_delta_deg;
  return pn::io::model_from_json(j);
}

pn::ChannelSpec build_spec(const Options& o) {
  pn::ChannelSpec spec;
  spec.direction = o.direction == "downlink" ? pn::LinkDirection::Downlink
                                             : pn::LinkDirection::Uplink;
  spec.topology =
      o.topology == "slo" ? pn::OscillatorTopology::SLO : pn::OscillatorTopology::CLO;
  spec.model = build_model(o);
  if (!o.h_real.empty()) {
    spec.h.resize(static_cast<Eigen::Index>(o.h_real.size()));
    for (std::size_t i = 0; i < o.h_real.size(); ++i)
      spec.h(static_cast<Eigen::Index>(i)) =
          std::complex<double>(o.h_real[i], i < o.h_imag.size() ? o.h_imag[i] : 0.0);
  } else {
    spec.h = Eigen::VectorXcd::Ones(o.m);
  }
  return spec;
}

void emit(const Options& o, const std::string& body) {
  if (o.output_path.empty()) {
    std::cout << body;
  } else {
    std::ofstream out(o.output_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + o.output_path);
    out << body;
  }
}

void emit_manifest(const Options& o) {
  std::string path = o.manifest_path;
  if (path.empty()) {
    if (o.output_path.empty()) return;  // stdout runs carry no manifest file
    path = o.output_path + ".manifest.json";
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open manifest file " + path);
  out << pn::io::manifest(o.seed, options_to_json(o)).dump(2) << "\n";
}

// --- subcommand bodies -------------------------------------------------------

int run_entropy_curve(const Options& o) {
  if (!(0.0 < o.sigma_min_deg && o.sigma_min_deg < o.sigma_max_deg) || o.steps < 2) {
    std::cerr << "entropy-curve: need 0 < sigma_min_deg < sigma_max_deg and steps >= 2\n";
    return kExitConfig;
  }
  std::ostringstream csv;
  csv << "sigma_deg,h_wrapped_bits,h_unwrapped_bits,abs_diff_bits\n";
  const double ln2 = std::log(2.0);
  for (int i = 0; i < o.steps; ++i) {
    const double deg =
        o.sigma_min_deg + (o.sigma_max_deg - o.sigma_min_deg) * i / (o.steps - 1.0);
    const pn::WrappedGaussian wg(pn::io::deg2rad(deg));
    const double hw =
        pn::entropy(pn::CircularDistribution{wg}, pn::EntropyMethod::Quadrature).value / ln2;
    const double hu = 0.5 * std::log(2.0 * M_PI * M_E * wg.sigma * wg.sigma) / ln2;
    char line[128];
    std::snprintf(line, sizeof line, "%.6f,%.9f,%.9f,%.9f\n", deg, hw, hu, std::abs(hw - hu));
    csv << line;
  }
  emit(o, csv.str());
  emit_manifest(o);
  return kExitOk;
}

int run_pnn(const Options& o) {
  pn::ChannelSpec spec = build_spec(o);
  pn::PnnOptions popt;
  popt.seed = o.seed;
  const pn::PhaseNoiseNumberResult r = pn::phase_noise_number(spec, popt);
  json j = pn::io::result_to_json(r);
  j["snr_db"] = o.snr_db;
  const double rho = pn::SnrSpec::from_db(o.snr_db).rho;
  j["rate_lower_bits"] = 0.5 * std::log2(rho) + pn::io::nats2bits(r.chi_lower);
  emit(o, j.dump(2) + "\n");
  emit_manifest(o);
  return kExitOk;
}

int run_outage(const Options& o) {
  pn::ChannelSpec spec = build_spec(o);
  const pn::SnrSpec snr = pn::SnrSpec::from_db(o.snr_db);
  pn::McConfig mc;
  mc.n_samples = o.n_samples;
  mc.n_workers = o.workers;
  pn::RngStream rng(o.seed);

  // probe run for a grid spanning the curve, then the real evaluation
  pn::McConfig probe = mc;
  probe.n_samples = std::min<std::size_t>(o.n_samples, 20000);
  const pn::OutageCurve pilot = pn::outage_cdf_mc(spec, snr, {}, probe, rng.substream(1));
  const double half_log_rho = 0.5 * std::log2(snr.rho);
  const double lo = half_log_rho + pilot.chi_bits_sorted.front();
  const double hi = half_log_rho + pilot.chi_bits_sorted.back();
  std::vector<double> grid;
  for (int i = 0; i <= 100; ++i) grid.push_back(lo + (hi - lo) * i / 100.0);

  const pn::OutageCurve curve = pn::outage_cdf_mc(spec, snr, grid, mc, rng.substream(0));
  std::ostringstream csv;
  csv << "rate_bits,prob,ci\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    char line[128];
    std::snprintf(line, sizeof line, "%.9f,%.7f,%.7f\n", curve.rate_grid_bits[i],
                  curve.probabilities[i], curve.ci_halfwidth[i]);
    csv << line;
  }
  emit(o, csv.str());
  emit_manifest(o);
  return kExitOk;
}

int run_gap(const Options& o) {
  pn::GapConfig cfg;
  cfg.epsilon = o.epsilon;
  cfg.sigma_delta = pn::io::deg2rad(o.sigma_delta_deg);
  cfg.sigma_delta_alt = pn::io::deg2rad(o.sigma_delta_alt_deg);
  cfg.rho_db = o.snr_db;
  cfg.mc.n_samples = o.n_samples;
  cfg.mc.n_workers = o.workers;
  const auto rows = pn::gap_vs_m(o.m_list, cfg, pn::RngStream(o.seed));
  std::ostringstream csv;
  csv << "M,delta_R_analytic_bits,delta_R_mc_bits,delta_R_mc_alt_sigma_bits,ci_bits\n";
  for (const auto& r : rows) {
    char line[160];
    std::snprintf(line, sizeof line, "%d,%.9f,%.9f,%.9f,%.9f\n", r.M,
                  r.delta_r_analytic_bits, r.delta_r_mc_bits.value_or(0.0),
                  r.delta_r_mc_alt_bits.value_or(0.0), r.ci_bits);
    csv << line;
  }
  emit(o, csv.str());
  emit_manifest(o);
  return kExitOk;
}

int run_rate_lb(const Options& o) {
  pn::ChannelSpec spec = build_spec(o);
  pn::RateLbConfig cfg;
  cfg.n_samples = o.n_samples;
  const pn::RateLbResult r = pn::rate_lb_noncoherent_mc(
      spec.h, pn::SnrSpec::from_db(o.snr_db), cfg, pn::RngStream(o.seed));
  json j;
  j["rate_nats"] = r.rate_nats;
  j["rate_bits"] = pn::io::nats2bits(r.rate_nats);
  j["h_t_nats"] = r.h_t_nats;
  j["h_t_given_x_nats"] = r.h_t_given_x_nats;
  j["std_error_nats"] = r.std_error;
  const double rho = pn::SnrSpec::from_db(o.snr_db).rho;
  j["asymptote_nats"] = 0.5 * std::log(rho) + 0.5 * std::log(spec.h.squaredNorm() / 2.0);
  emit(o, j.dump(2) + "\n");
  emit_manifest(o);
  return kExitOk;
}

int run_validate(const Options& o) {
  std::ostringstream rep;
  bool ok = true;
  pn::RngStream rng(o.seed);
  const double rho = pn::SnrSpec::from_db(o.snr_db).rho;

  // noncentral chi-squared law of t = ||y||^2 given x, per array size
  for (int M : {1, 2, 4, 8}) {
    pn::ChannelSpec spec;
    spec.direction = pn::LinkDirection::Uplink;
    spec.topology = pn::OscillatorTopology::SLO;
    spec.model = pn::Noncoherent{};
    spec.h = Eigen::VectorXcd::Ones(M);
    pn::SimOptions sopt;
    sopt.policy = pn::InputPolicy::Supplied;
    sopt.supplied_symbol = 1.0;
    pn::RngStream sub = rng.substream(M);
    std::vector<double> t;
    for (int i = 0; i < 4000; ++i)
      t.push_back(pn::simulate_channel(spec, pn::SnrSpec{rho}, sopt, sub).t);
    const double delta = spec.h.squaredNorm();  // ||h x||^2 with |x| = 1
    const auto ks = pn::stats::ks_test(
        t, [&](double v) { return pn::stats::noncentral_chi2_cdf(2 * M, delta, v); });
    const bool pass = ks.p_value > 0.01;
    ok = ok && pass;
    char line[160];
    std::snprintf(line, sizeof line,
                  "ks_noncentral_chi2 M=%d D=%.4f p=%.4f : %s\n", M, ks.statistic,
                  ks.p_value, pass ? "pass" : "FAIL");
    rep << line;
  }

  // gamma-amplitude input power: E|x|^2 = 2 rho
  {
    pn::RngStream sub = rng.substream(100);
    const std::size_t n = 200000;
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double p = 4.0 * rho * sub.gamma_half();
      sum += p;
      sumsq += p * p;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sumsq / n - mean * mean) / n);
    const bool pass = std::abs(mean - 2.0 * rho) < 3.0 * se;
    ok = ok && pass;
    char line[160];
    std::snprintf(line, sizeof line, "input_power mean=%.4f target=%.4f se=%.4f : %s\n",
                  mean, 2.0 * rho, se, pass ? "pass" : "FAIL");
    rep << line;
  }

  rep << (ok ? "validate: all checks passed\n" : "validate: FAILURES above\n");
  emit(o, rep.str());
  emit_manifest(o);
  return ok ? kExitOk : kExitValidation;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config_path, "JSON config file; flags override");
  cmd->add_option("--output", o.output_path, "output file (default stdout)");
  cmd->add_option("--manifest", o.manifest_path, "manifest file path");
  cmd->add_option("--seed", o.seed, "RNG seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "pncap: high-SNR capacity of SIMO/MISO phase-noise channels "
      "(rates in bits, angles in degrees, SNR in dB with noise variance 2)"};
  app.require_subcommand(1);
  Options o;

  // config file defaults must land before CLI11 writes flag values
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config") o.config_path = argv[i + 1];
  try {
    apply_config_file(o);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  auto* ec = app.add_subcommand("entropy-curve",
                                "wrapped vs unwrapped Gaussian entropy sweep (CSV)");
  add_common(ec, o);
  ec->add_option("--sigma-min-deg", o.sigma_min_deg, "sweep start, degrees");
  ec->add_option("--sigma-max-deg", o.sigma_max_deg, "sweep end, degrees");
  ec->add_option("--steps", o.steps, "grid points");

  auto add_spec_flags = [&](CLI::App* cmd) {
    cmd->add_option("--direction", o.direction, "uplink | downlink")
        ->check(CLI::IsMember({"uplink", "downlink"}));
    cmd->add_option("--topology", o.topology, "clo | slo")
        ->check(CLI::IsMember({"clo", "slo"}));
    cmd->add_option("--model", o.model_kind,
                    "noncoherent | wiener | composite_wiener | tikhonov | "
                    "partially_coherent_wrapped_gaussian");
    cmd->add_option("--sigma-delta-deg", o.sigma_delta_deg, "Wiener innovation sd, degrees");
    cmd->add_option("--lambda", o.lambda, "Tikhonov concentration");
    cmd->add_option("--sigma-tx-deg", o.sigma_tx_deg, "composite TX sd, degrees");
    cmd->add_option("--sigma-rx-deg", o.sigma_rx_deg, "composite RX sd, degrees");
    cmd->add_option("--m", o.m, "antenna count (unit gains unless --h given)");
    cmd->add_option("--gains", o.h_real, "gain vector, real parts")->delimiter(',');
    cmd->add_option("--gains-imag", o.h_imag, "gain vector, imaginary parts")->delimiter(',');
    cmd->add_option("--snr-db", o.snr_db, "SNR rho in dB");
  };

  auto* pnn = app.add_subcommand("pnn", "phase-noise number chi and rate (JSON)");
  add_common(pnn, o);
  add_spec_flags(pnn);

  auto* outage = app.add_subcommand("outage", "Rayleigh outage CDF, high-SNR rate (CSV)");
  add_common(outage, o);
  add_spec_flags(outage);
  outage->add_option("--n-samples", o.n_samples, "Monte-Carlo draws");
  outage->add_option("--workers", o.workers, "worker threads (result-invariant)");

  auto* gap = app.add_subcommand("gap", "CLO-vs-SLO outage rate gap vs M (CSV)");
  add_common(gap, o);
  gap->add_option("--epsilon", o.epsilon, "outage probability")
      ->check(CLI::Range(1e-6, 1.0 - 1e-6));
  gap->add_option("--m-list", o.m_list, "array sizes")->delimiter(',');
  gap->add_option("--sigma-delta-deg", o.sigma_delta_deg, "Wiener sd, degrees");
  gap->add_option("--sigma-delta-alt-deg", o.sigma_delta_alt_deg,
                  "second sd for the sigma-independence check, degrees");
  gap->add_option("--snr-db", o.snr_db, "SNR in dB");
  gap->add_option("--n-samples", o.n_samples, "MC draws per curve (0 = analytic only)");
  gap->add_option("--workers", o.workers, "worker threads");

  auto* ratelb = app.add_subcommand("rate-lb",
                                    "noncoherent energy-detection rate lower bound (JSON)");
  add_common(ratelb, o);
  add_spec_flags(ratelb);
  ratelb->add_option("--n-samples", o.n_samples, "Monte-Carlo draws");

  auto* validate = app.add_subcommand("validate", "distributional self-tests");
  add_common(validate, o);
  validate->add_option("--snr-db", o.snr_db, "SNR in dB");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (ec->parsed()) return run_entropy_curve(o);
    if (pnn->parsed()) return run_pnn(o);
    if (outage->parsed()) return run_outage(o);
    if (gap->parsed()) return run_gap(o);
    if (ratelb->parsed()) return run_rate_lb(o);
    if (validate->parsed()) return run_validate(o);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& e) {
    // model/spec parameter rejections surface as configuration errors
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitConfig;
}
