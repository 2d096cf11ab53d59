#include "phasenoise/outage.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "phasenoise/specfun.hpp"
#include "phasenoise/stats.hpp"

namespace pn {

namespace {

constexpr double kLn2 = 0.6931471805599453;

enum class GainTerm { Coherent, BestAntenna };

// chi(h) = gain_term(h) + constant. Splits an exact phase-noise-number
// formula so the fading loop only has to evaluate the gain term.
struct ChiFormula {
  GainTerm gain = GainTerm::Coherent;
  double constant_nats = 0.0;
};

double gain_term_nats(GainTerm g, const Eigen::VectorXcd& h) {
  if (g == GainTerm::Coherent) return 0.5 * std::log(h.squaredNorm() / 2.0);
  double best = 0.0;
  for (Eigen::Index m = 0; m < h.size(); ++m) best = std::max(best, std::norm(h(m)));
  return 0.5 * std::log(best / 2.0);
}

ChiFormula chi_formula(const ChannelSpec& spec_template) {
  ChannelSpec ref = spec_template;
  ref.h = Eigen::VectorXcd::Ones(spec_template.antennas());
  const PhaseNoiseNumberResult r = phase_noise_number(ref);
  if (!r.chi_exact)
    throw std::domain_error(
        "outage_cdf_mc: the phase-noise number for this spec is only bounded; "
        "an outage curve would conflate bound looseness with fading");
  ChiFormula f;
  f.gain = (spec_template.topology == OscillatorTopology::SLO &&
            spec_template.direction == LinkDirection::Downlink)
               ? GainTerm::BestAntenna
               : GainTerm::Coherent;
  f.constant_nats = *r.chi_exact - gain_term_nats(f.gain, ref.h);
  return f;
}

// Per-draw chi values (bits), chunked over counter-derived substreams so the
// result is independent of the worker count.
std::vector<double> draw_chi_bits(const ChiFormula& f, Eigen::Index M,
                                  const McConfig& cfg, const RngStream& rng) {
  const std::size_t n = cfg.n_samples;
  const std::size_t chunk = std::max<std::size_t>(1, cfg.chunk);
  const std::size_t n_chunks = (n + chunk - 1) / chunk;
  std::vector<double> chi(n);

  auto run_chunk = [&](std::size_t c) {
    RngStream sub = rng.substream(c);
    const std::size_t begin = c * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    Eigen::VectorXcd h(M);
    for (std::size_t i = begin; i < end; ++i) {
      for (Eigen::Index m = 0; m < M; ++m)
        h(m) = std::complex<double>(sub.normal(M_SQRT1_2), sub.normal(M_SQRT1_2));
      chi[i] = (f.constant_nats + gain_term_nats(f.gain, h)) / kLn2;
    }
  };

  const int workers = std::max(1, cfg.n_workers);
  if (workers == 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) run_chunk(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1))
          run_chunk(c);
      });
    for (auto& t : pool) t.join();
  }
  return chi;
}

}  // namespace

OutageCurve outage_cdf_mc(const ChannelSpec& spec_template, const SnrSpec& snr,
                          const std::vector<double>& rate_grid_bits,
                          const McConfig& cfg, const RngStream& rng) {
  if (cfg.n_samples == 0) throw std::invalid_argument("outage_cdf_mc: n_samples > 0");
  const ChiFormula f = chi_formula(spec_template);
  std::vector<double> chi = draw_chi_bits(f, spec_template.antennas(), cfg, rng);
  std::sort(chi.begin(), chi.end());

  OutageCurve curve;
  curve.rate_grid_bits = rate_grid_bits;
  curve.n_samples = cfg.n_samples;
  const double n = static_cast<double>(cfg.n_samples);
  const double half_log_rho = 0.5 * std::log2(snr.rho);
  for (double r : rate_grid_bits) {
    // outage iff 0.5 log2(rho) + chi < r
    const auto it = std::lower_bound(chi.begin(), chi.end(), r - half_log_rho);
    const double p = static_cast<double>(it - chi.begin()) / n;
    curve.probabilities.push_back(p);
    curve.ci_halfwidth.push_back(1.96 * std::sqrt(std::max(p * (1.0 - p), 1.0 / n) / n));
  }
  curve.chi_bits_sorted = std::move(chi);
  return curve;
}

double outage_rate_mc(const OutageCurve& curve, double epsilon, double rho) {
  if (curve.chi_bits_sorted.empty())
    throw std::invalid_argument("outage_rate_mc: curve has no stored draws");
  if (epsilon <= 0.0 || epsilon >= 1.0)
    throw std::invalid_argument("outage_rate_mc: epsilon in (0,1)");
  const std::size_t n = curve.chi_bits_sorted.size();
  auto idx = static_cast<std::size_t>(epsilon * static_cast<double>(n));
  idx = std::min(idx, n - 1);
  return 0.5 * std::log2(rho) + curve.chi_bits_sorted[idx];
}

double outage_rate_analytic(OscillatorTopology topology, int M, double epsilon) {
  if (M < 1 || epsilon <= 0.0 || epsilon >= 1.0)
    throw std::invalid_argument("outage_rate_analytic: M >= 1 and epsilon in (0,1)");
  if (topology == OscillatorTopology::CLO) {
    // ||h||^2 ~ Gamma(M, 1): quantile via the inverse regularized gamma
    const double q = specfun::inverse_regularized_gamma_p(static_cast<double>(M), epsilon);
    return 0.5 * std::log2(q / 2.0);
  }
  // max_m |h_m|^2: epsilon = (1 - e^{-q})^M
  const double q = -std::log(1.0 - std::pow(epsilon, 1.0 / static_cast<double>(M)));
  return 0.5 * std::log2(q / 2.0);
}

namespace {

double quantile_at(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  auto idx = static_cast<std::size_t>(std::clamp(p, 0.0, 1.0) * static_cast<double>(n));
  return sorted[std::min(idx, n - 1)];
}

// 95% half-width of the epsilon-quantile by the order-statistic spread.
double quantile_ci(const std::vector<double>& sorted, double eps) {
  const double d = 1.96 * std::sqrt(eps * (1.0 - eps) / static_cast<double>(sorted.size()));
  return 0.5 * (quantile_at(sorted, eps + d) - quantile_at(sorted, eps - d));
}

}  // namespace

std::vector<GapRow> gap_vs_m(const std::vector<int>& m_list, const GapConfig& cfg,
                             const RngStream& rng) {
  std::vector<GapRow> rows;
  const SnrSpec snr = SnrSpec::from_db(cfg.rho_db);
  std::uint64_t stream = 0;
  for (int M : m_list) {
    GapRow row;
    row.M = M;
    row.delta_r_analytic_bits = outage_rate_analytic(OscillatorTopology::CLO, M, cfg.epsilon) -
                                outage_rate_analytic(OscillatorTopology::SLO, M, cfg.epsilon);
    if (cfg.mc.n_samples > 0) {
      auto mc_gap = [&](double sigma) {
        ChannelSpec spec;
        spec.direction = LinkDirection::Downlink;
        spec.h = Eigen::VectorXcd::Ones(M);
        spec.model = Wiener{sigma};
        spec.topology = OscillatorTopology::CLO;
        OutageCurve clo = outage_cdf_mc(spec, snr, {}, cfg.mc, rng.substream(stream++));
        spec.topology = OscillatorTopology::SLO;
        OutageCurve slo = outage_cdf_mc(spec, snr, {}, cfg.mc, rng.substream(stream++));
        const double gap = outage_rate_mc(clo, cfg.epsilon, snr.rho) -
                           outage_rate_mc(slo, cfg.epsilon, snr.rho);
        const double ci = std::hypot(quantile_ci(clo.chi_bits_sorted, cfg.epsilon),
                                     quantile_ci(slo.chi_bits_sorted, cfg.epsilon));
        return std::pair<double, double>(gap, ci);
      };
      auto [g1, ci1] = mc_gap(cfg.sigma_delta);
      auto [g2, ci2] = mc_gap(cfg.sigma_delta_alt);
      row.delta_r_mc_bits = g1;
      row.delta_r_mc_alt_bits = g2;
      row.ci_bits = std::max(ci1, ci2);
    }
    rows.push_back(row);
  }
  return rows;
}

// ---- signal-level simulation -----------------------------------------------

ChannelSample simulate_channel(const ChannelSpec& spec, const SnrSpec& snr,
                               const SimOptions& opt, RngStream& rng) {
  spec.validate();
  const Eigen::Index M = spec.antennas();
  const PhasePath path = sample_path(spec.model, spec.topology, M, 1, rng);

  ChannelSample out;
  out.theta = path.phases.col(0).matrix();
  switch (opt.policy) {
    case InputPolicy::GammaAmplitude: {
      const double s = rng.gamma_half();
      out.x = std::polar(std::sqrt(4.0 * snr.rho * s), rng.uniform_angle());
      break;
    }
    case InputPolicy::ConstantAmplitude:
      out.x = std::polar(opt.constant_amplitude, rng.uniform_angle());
      break;
    case InputPolicy::Supplied:
      out.x = opt.supplied_symbol;
      break;
  }

  if (spec.direction == LinkDirection::Uplink) {
    out.y.resize(M);
    for (Eigen::Index m = 0; m < M; ++m) {
      std::complex<double> w =
          opt.zero_noise ? 0.0 : std::complex<double>(rng.normal(), rng.normal());
      out.y(m) = std::polar(1.0, out.theta(m)) * spec.h(m) * out.x + w;
    }
  } else {
    // maximum-ratio transmission of the scalar symbol
    const Eigen::VectorXcd xv = conjugate_beamform(spec.h, out.x);
    std::complex<double> acc = 0.0;
    for (Eigen::Index m = 0; m < M; ++m)
      acc += spec.h(m) * std::polar(1.0, out.theta(m)) * xv(m);
    std::complex<double> w =
        opt.zero_noise ? 0.0 : std::complex<double>(rng.normal(), rng.normal());
    out.y.resize(1);
    out.y(0) = acc + w;
  }
  out.t = out.y.squaredNorm();
  return out;
}

std::complex<double> mrc_combine(const Eigen::VectorXcd& y, const Eigen::VectorXcd& h) {
  const double norm = h.norm();
  if (norm <= 0.0) throw std::invalid_argument("mrc_combine: ||h|| > 0 required");
  return (h / norm).dot(y);  // conjugates h
}

Eigen::VectorXcd conjugate_beamform(const Eigen::VectorXcd& h, std::complex<double> s) {
  const double norm = h.norm();
  if (norm <= 0.0) throw std::invalid_argument("conjugate_beamform: ||h|| > 0 required");
  return s * h.conjugate() / norm;
}

Eigen::Index antenna_select(const Eigen::VectorXcd& h) {
  if (h.size() == 0 || h.squaredNorm() <= 0.0)
    throw std::invalid_argument("antenna_select: nonzero gain vector required");
  Eigen::Index best = 0;
  for (Eigen::Index m = 1; m < h.size(); ++m)
    if (std::norm(h(m)) > std::norm(h(best))) best = m;
  return best;
}

// ---- noncoherent rate lower bound --------------------------------------------

RateLbResult rate_lb_noncoherent_mc(const Eigen::VectorXcd& h, const SnrSpec& snr,
                                    const RateLbConfig& cfg, const RngStream& rng) {
  if (h.size() < 1 || h.squaredNorm() <= 0.0)
    throw std::invalid_argument("rate_lb_noncoherent_mc: nonzero gain vector required");
  const Eigen::Index M = h.size();
  const double g2 = h.squaredNorm();

  // t = ||Theta h x + w||^2; the phase matrix is unitary on each entry and the
  // noise is circularly symmetric, so t is distributed as ||h x + w||^2.
  std::vector<double> t(cfg.n_samples);
  const std::size_t chunk = 65536;
  const std::size_t n_chunks = (cfg.n_samples + chunk - 1) / chunk;
  for (std::size_t c = 0; c < n_chunks; ++c) {
    RngStream sub = rng.substream(c);
    const std::size_t end = std::min(cfg.n_samples, (c + 1) * chunk);
    for (std::size_t i = c * chunk; i < end; ++i) {
      const double a = std::sqrt(4.0 * snr.rho * sub.gamma_half());
      double acc = 0.0;
      for (Eigen::Index m = 0; m < M; ++m) {
        const double re = std::abs(h(m)) * a + sub.normal();
        const double im = sub.normal();
        acc += re * re + im * im;
      }
      t[i] = acc;
    }
  }
  RateLbResult r;
  r.h_t_nats = stats::histogram_entropy_log_bins(t);

  // h(t|x) deterministically: s = u^2 maps Gamma(1/2,1) onto the Gauss-Hermite
  // weight, E_s[g(s)] = (1/sqrt(pi)) sum w_i g(u_i^2).
  const stats::GaussHermite gh = stats::gauss_hermite(cfg.gh_nodes);
  double cond = 0.0;
  for (int i = 0; i < cfg.gh_nodes; ++i) {
    const double s = gh.nodes[i] * gh.nodes[i];
    cond += gh.weights[i] *
            stats::noncentral_chi2_entropy(2 * static_cast<int>(M), 4.0 * snr.rho * s * g2);
  }
  r.h_t_given_x_nats = cond / std::sqrt(M_PI);
  r.rate_nats = r.h_t_nats - r.h_t_given_x_nats;

  // conservative entropy-estimator standard error: var(-ln f) <= ~4 nats^2
  r.std_error = 2.0 / std::sqrt(static_cast<double>(cfg.n_samples));
  return r;
}

}  // namespace pn
