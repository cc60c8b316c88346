#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qhflux/regime.hpp"
#include "qhflux/report.hpp"

namespace qhflux {

std::uint64_t splitmix64(std::uint64_t x);
// independent stream seed for one case of a suite
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t case_id);

// 0 falls back to QHFLUX_THREADS, then to the hardware count
unsigned resolve_threads(unsigned requested);
// runs fn(0..count-1) on up to `threads` workers; rethrows the first exception
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

struct SuiteOptions {
  std::uint64_t seed = 1;
  unsigned threads = 0;
  double kappa = 2.0;
  double gamma = 1.0;
};

// uniform in the disk of radius r
cplx sample_disk(std::mt19937_64& rng, double r);
// rejection sampler targeting one regime inside the shrunk disk |y| <= 1 - delta_N
HoleConfig sample_config(std::mt19937_64& rng, long N, std::size_t n, RegimeKind target,
                         const RegimeClassifier& classifier, int max_tries = 100000);

// least-squares slope of log y against log x
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct KernelSuiteParams {
  std::vector<long> Ns{64, 128, 256};
  long n = 2;
  int samples = 1000;
  int max_order = 2;
};
VerificationReport run_kernel_suite(const KernelSuiteParams& p, const SuiteOptions& o);

struct IdentitySuiteParams {
  std::vector<long> Ms{1, 4, 8, 16};
  int points = 4;
};
VerificationReport run_identity_suite(const IdentitySuiteParams& p, const SuiteOptions& o);

struct RegimeSuiteParams {
  // no-merging pairs need 2 delta_N < 2 (1 - delta_N): N >= 128 at kappa = 2
  std::vector<long> Ns{128, 256, 512};
  std::size_t n = 2;
  int configs = 10;
  long sweep_N = 256;
  int sweep_points = 16;
};
VerificationReport run_upsilon_suite(const RegimeSuiteParams& p, const SuiteOptions& o);

struct PotentialSuiteParams {
  std::vector<long> Ns{128, 256, 512};
  std::size_t n = 2;
  int configs = 5;
  long sweep_N = 512;
  int sweep_points = 16;
};
VerificationReport run_potential_suite(const PotentialSuiteParams& p, const SuiteOptions& o);

struct ConsistencySuiteParams {
  long N = 32;
  std::size_t n = 2;
  int configs = 10;
  double kappa = 1.0;  // no-merging configs need 2 delta_N < 1
};
VerificationReport run_consistency_suite(const ConsistencySuiteParams& p, const SuiteOptions& o);

struct GlobalSuiteParams {
  long N = 64;
  std::size_t n = 4;
  int configs = 500;
  double radius = 0.95;
};
VerificationReport run_global_suite(const GlobalSuiteParams& p, const SuiteOptions& o);

VerificationReport run_correction_suite(const SuiteOptions& o);

struct OracleSuiteParams {
  int partition_configs = 20;
  long charpoly_samples = 20000;  // thinned samples per case
  long mcmc_sweeps = 100000;
  bool include_mcmc = true;
};
VerificationReport run_oracle_suite(const OracleSuiteParams& p, const SuiteOptions& o);

struct RemainderVolume {
  long samples = 0;
  long hits = 0;
  double delta = 0.0;
  double volume = 0.0;
  double standard_error = 0.0;
  double constant = 0.0;     // volume / delta^4
  double union_bound = 0.0;  // rigorous upper bound on the volume
};
RemainderVolume remainder_volume(long N, std::size_t n, const RegimeClassifier& classifier, long samples,
                                 std::uint64_t seed);

struct VolumeSuiteParams {
  long N = 256;
  std::size_t n = 3;
  long samples = 2000000;
  double claimed_constant = 100.0;
};
VerificationReport run_volume_suite(const VolumeSuiteParams& p, const SuiteOptions& o);

std::vector<std::string> suite_names();
VerificationReport run_suite(const std::string& name, const SuiteOptions& o);

}  // namespace qhflux
