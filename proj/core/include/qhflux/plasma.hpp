#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "qhflux/regime.hpp"

namespace qhflux {

struct PlasmaConfig {
  long N = 1;
  int p = 1;
  int mu = 1;
  double b = 1.0;
  std::vector<cplx> holes;
  long steps = 11000;  // total sweeps, burn-in included
  long burn_in = 1000;
  long thin = 10;
  double proposal_scale = 0.0;  // 0 selects 1/sqrt(b)
  std::uint64_t seed = 1;
};

struct PlasmaSample {
  std::vector<cplx> positions;
  double log_density = 0.0;
  double acceptance_rate = 0.0;
  long sweep = 0;
};

struct PlasmaDiagnostics {
  double acceptance_rate = 0.0;  // after burn-in
  long samples = 0;
  long sweeps = 0;
  bool tuning_warning = false;
  std::string message;
};

class PlasmaChain {
 public:
  explicit PlasmaChain(const PlasmaConfig& cfg);

  const PlasmaConfig& config() const { return cfg_; }
  const std::vector<cplx>& positions() const { return z_; }

  double log_density(const std::vector<cplx>& z) const;
  // log min(1, pi(z')/pi(z)) for moving particle k to z_new
  double log_acceptance(const std::vector<cplx>& z, std::size_t k, cplx z_new) const;
  // one sweep of single-particle updates; returns accepted move count
  long sweep();

  PlasmaDiagnostics run(const std::function<void(const PlasmaSample&)>& on_sample);

 private:
  double log_ratio(const std::vector<cplx>& z, std::size_t k, cplx z_new) const;

  PlasmaConfig cfg_;
  double scale_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::vector<cplx> z_;
};

void validate(const PlasmaConfig& cfg);
PlasmaDiagnostics plasma_mcmc(const PlasmaConfig& cfg, const std::function<void(const PlasmaSample&)>& on_sample);

// little-endian record: uint64 N, then N (re, im) pairs of float64
void write_dump_record(std::ostream& os, const PlasmaSample& s);
bool read_dump_record(std::istream& is, std::vector<cplx>& positions);

struct CharpolyEstimate {
  double log_estimate = 0.0;
  double log_standard_error = 0.0;
  long samples = 0;
  double effective_samples = 0.0;
  PlasmaDiagnostics diagnostics;
};

// E_N[prod_j |Q_N(w_j)|^2] from the hole-free plasma
CharpolyEstimate charpoly_moment_mc(const HoleConfig& cfg, PlasmaConfig mcmc);
// log c_qh(empty)^2 c_qh(w)^{-2}
double charpoly_moment_exact(const HoleConfig& cfg);

// exact fraction of the one-particle density with |z| <= r for the hole-free plasma at mu = p = 1
double radial_cdf(long N, double b, double r);

struct RadialComparison {
  std::vector<double> edges;
  std::vector<double> empirical;  // bin masses
  std::vector<double> exact;
  double l1 = 0.0;
};
RadialComparison compare_radial_density(const std::vector<double>& radii, long N, double b, int bins, double r_max);

}  // namespace qhflux
