#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

#include <boost/math/special_functions/gamma.hpp>

#include "qhflux/partition.hpp"
#include "qhflux/plasma.hpp"

namespace qhflux {

static_assert(std::endian::native == std::endian::little, "dump format assumes a little-endian host");

void validate(const PlasmaConfig& cfg) {
  if (cfg.N < 1) throw UsageError("PlasmaConfig: N must be at least 1");
  if (cfg.p < 0 || cfg.mu < 0) throw UsageError("PlasmaConfig: exponents must be nonnegative");
  if (!(cfg.b > 0.0)) throw UsageError("PlasmaConfig: b must be positive");
  if (cfg.steps <= cfg.burn_in) throw UsageError("PlasmaConfig: steps must exceed burn_in");
  if (cfg.burn_in < 0 || cfg.thin < 1) throw UsageError("PlasmaConfig: bad burn-in or thinning");
  if (cfg.proposal_scale < 0.0) throw UsageError("PlasmaConfig: proposal scale must be positive");
}

PlasmaChain::PlasmaChain(const PlasmaConfig& cfg)
    : cfg_(cfg), scale_(cfg.proposal_scale > 0.0 ? cfg.proposal_scale : 1.0 / std::sqrt(cfg.b)), rng_(cfg.seed) {
  validate(cfg_);
  const double R = std::sqrt(static_cast<double>(cfg_.N) / cfg_.b);
  z_.resize(cfg_.N);
  for (auto& z : z_) {
    const double r = R * std::sqrt(uniform_(rng_));
    z = std::polar(r, 2.0 * kPi * uniform_(rng_));
  }
}

double PlasmaChain::log_density(const std::vector<cplx>& z) const {
  double s = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    s -= cfg_.b * std::norm(z[k]);
    for (std::size_t l = k + 1; l < z.size(); ++l) s += 2.0 * cfg_.mu * std::log(std::abs(z[k] - z[l]));
    for (const auto& w : cfg_.holes) s += 2.0 * cfg_.p * std::log(std::abs(z[k] - w));
  }
  return s;
}

double PlasmaChain::log_ratio(const std::vector<cplx>& z, std::size_t k, cplx z_new) const {
  const cplx z_old = z[k];
  double d = -cfg_.b * (std::norm(z_new) - std::norm(z_old));
  if (cfg_.mu != 0)
    for (std::size_t l = 0; l < z.size(); ++l) {
      if (l == k) continue;
      d += cfg_.mu * (std::log(std::norm(z_new - z[l])) - std::log(std::norm(z_old - z[l])));
    }
  if (cfg_.p != 0)
    for (const auto& w : cfg_.holes)
      d += cfg_.p * (std::log(std::norm(z_new - w)) - std::log(std::norm(z_old - w)));
  return d;
}

double PlasmaChain::log_acceptance(const std::vector<cplx>& z, std::size_t k, cplx z_new) const {
  const double d = log_ratio(z, k, z_new);
  if (std::isnan(d)) return -std::numeric_limits<double>::infinity();
  return std::min(0.0, d);
}

long PlasmaChain::sweep() {
  long accepted = 0;
  for (std::size_t k = 0; k < z_.size(); ++k) {
    const double gx = normal_(rng_), gy = normal_(rng_);
    const cplx prop = z_[k] + scale_ * cplx(gx, gy);
    const double la = log_acceptance(z_, k, prop);
    const double u = uniform_(rng_);
    if (la == -std::numeric_limits<double>::infinity()) continue;
    if (la >= 0.0 || std::log(u) < la) {
      z_[k] = prop;
      ++accepted;
    }
  }
  return accepted;
}

PlasmaDiagnostics PlasmaChain::run(const std::function<void(const PlasmaSample&)>& on_sample) {
  PlasmaDiagnostics d;
  long accepted = 0, proposed = 0;
  for (long s = 0; s < cfg_.steps; ++s) {
    const long a = sweep();
    if (s < cfg_.burn_in) continue;
    accepted += a;
    proposed += cfg_.N;
    const long after = s - cfg_.burn_in + 1;
    if (after % cfg_.thin == 0) {
      ++d.samples;
      if (on_sample) {
        PlasmaSample smp;
        smp.positions = z_;
        smp.log_density = log_density(z_);
        smp.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(proposed);
        smp.sweep = s;
        on_sample(smp);
      }
    }
  }
  d.sweeps = cfg_.steps;
  d.acceptance_rate = proposed ? static_cast<double>(accepted) / static_cast<double>(proposed) : 0.0;
  if (d.acceptance_rate < 0.05 || d.acceptance_rate > 0.95) {
    d.tuning_warning = true;
    d.message = "acceptance rate " + std::to_string(d.acceptance_rate) + " outside [0.05, 0.95]";
  }
  return d;
}

PlasmaDiagnostics plasma_mcmc(const PlasmaConfig& cfg, const std::function<void(const PlasmaSample&)>& on_sample) {
  PlasmaChain chain(cfg);
  return chain.run(on_sample);
}

void write_dump_record(std::ostream& os, const PlasmaSample& s) {
  const std::uint64_t n = s.positions.size();
  os.write(reinterpret_cast<const char*>(&n), sizeof n);
  for (const auto& z : s.positions) {
    const double v[2] = {z.real(), z.imag()};
    os.write(reinterpret_cast<const char*>(v), sizeof v);
  }
}

bool read_dump_record(std::istream& is, std::vector<cplx>& positions) {
  std::uint64_t n = 0;
  if (!is.read(reinterpret_cast<char*>(&n), sizeof n)) return false;
  positions.resize(n);
  for (auto& z : positions) {
    double v[2];
    if (!is.read(reinterpret_cast<char*>(v), sizeof v)) return false;
    z = {v[0], v[1]};
  }
  return true;
}

double charpoly_moment_exact(const HoleConfig& cfg) {
  HoleConfig empty{{}, cfg.N, cfg.b};
  return log_partition(cfg).log_value - log_partition(empty).log_value;
}

CharpolyEstimate charpoly_moment_mc(const HoleConfig& cfg, PlasmaConfig mcmc) {
  validate(cfg);
  mcmc.N = cfg.N;
  mcmc.b = cfg.b;
  mcmc.mu = 1;
  mcmc.p = 0;
  mcmc.holes.clear();
  std::vector<double> logs;
  CharpolyEstimate est;
  est.diagnostics = plasma_mcmc(mcmc, [&](const PlasmaSample& s) {
    double v = 0.0;
    for (const auto& w : cfg.w)
      for (const auto& z : s.positions) v += std::log(std::norm(w - z));
    logs.push_back(v);
  });
  est.samples = static_cast<long>(logs.size());
  if (logs.size() < 2) throw PrecisionError("charpoly_moment_mc: too few samples");
  const double m = *std::max_element(logs.begin(), logs.end());
  std::vector<double> x(logs.size());
  for (std::size_t i = 0; i < logs.size(); ++i) x[i] = std::exp(logs[i] - m);
  const double n = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= (n - 1.0);
  // batch means for the autocorrelated chain
  const std::size_t batches = std::min<std::size_t>(32, x.size());
  const std::size_t per = x.size() / batches;
  double bvar = 0.0;
  for (std::size_t k = 0; k < batches; ++k) {
    double bm = 0.0;
    for (std::size_t i = k * per; i < (k + 1) * per; ++i) bm += x[i];
    bm /= static_cast<double>(per);
    bvar += (bm - mean) * (bm - mean);
  }
  bvar /= static_cast<double>(batches - 1);
  double se = std::sqrt(bvar / static_cast<double>(batches));
  se = std::max(se, std::sqrt(var / n));
  est.effective_samples = se > 0.0 ? var / (se * se) : n;
  if (est.effective_samples < 100.0)
    throw PrecisionError("charpoly_moment_mc: fewer than 100 effective samples");
  est.log_estimate = m + std::log(mean);
  est.log_standard_error = m + std::log(se);
  return est;
}

double radial_cdf(long N, double b, double r) {
  if (r <= 0.0) return 0.0;
  const double t = b * r * r;
  double s = 0.0;
  for (long k = 0; k < N; ++k) s += boost::math::gamma_p(static_cast<double>(k + 1), t);
  return s / static_cast<double>(N);
}

RadialComparison compare_radial_density(const std::vector<double>& radii, long N, double b, int bins, double r_max) {
  if (bins < 1 || !(r_max > 0.0)) throw UsageError("compare_radial_density: bad binning");
  RadialComparison c;
  c.edges.resize(bins + 1);
  for (int i = 0; i <= bins; ++i) c.edges[i] = r_max * i / bins;
  c.empirical.assign(bins + 1, 0.0);  // last slot collects r >= r_max
  c.exact.assign(bins + 1, 0.0);
  for (double r : radii) {
    const int k = std::min(bins, static_cast<int>(r / r_max * bins));
    c.empirical[k] += 1.0;
  }
  const double total = static_cast<double>(radii.size());
  for (auto& v : c.empirical) v /= total;
  double prev = 0.0;
  for (int i = 0; i < bins; ++i) {
    const double cur = radial_cdf(N, b, c.edges[i + 1]);
    c.exact[i] = cur - prev;
    prev = cur;
  }
  c.exact[bins] = 1.0 - prev;
  for (int i = 0; i <= bins; ++i) c.l1 += std::abs(c.empirical[i] - c.exact[i]);
  return c;
}

}  // namespace qhflux
