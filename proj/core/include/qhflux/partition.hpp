#pragma once

#include <vector>

#include "qhflux/kernel.hpp"
#include "qhflux/regime.hpp"

namespace qhflux {

struct PartitionComponents {
  double log_gamma = 0.0;        // log Gamma_N^n
  double gaussian = 0.0;         // b * sum |w_j|^2
  double vandermonde = 0.0;      // -2 log |Delta(w)|
  double log_upsilon = 0.0;      // log Upsilon_N(w)
};

struct PartitionValue {
  double log_value = 0.0;  // log c_qh^{-2}(w)
  PartitionComponents components;
};

inline KernelSpec kernel_spec(const HoleConfig& cfg) {
  return {cfg.b, cfg.N + static_cast<long>(cfg.n())};
}

void validate(const HoleConfig& cfg);
bool has_coincident_points(const std::vector<cplx>& w);
void require_distinct(const std::vector<cplx>& w);

// [(pi/b) K_{N+n}(w_i, w_k)]
ComplexMatrix upsilon_matrix(const HoleConfig& cfg);

double upsilon(const HoleConfig& cfg);
double log_upsilon(const HoleConfig& cfg);

// d^alpha_w dbar^beta_w Upsilon with |alpha| + |beta| <= 2
cplx upsilon_derivative(const HoleConfig& cfg, const std::vector<int>& alpha, const std::vector<int>& beta);

struct UpsilonLogDerivatives {
  double upsilon = 0.0;
  cplx d = 0.0;        // d_{w_j} log Upsilon
  double ddbar = 0.0;  // d_{w_j} d_{wbar_j} log Upsilon
};
UpsilonLogDerivatives upsilon_log_derivatives(const HoleConfig& cfg, std::size_t j);

double log_gamma_normalization(long N, long n, double b);
PartitionValue log_partition(const HoleConfig& cfg);

// Theta(z|w) and the polarized Theta(zeta, z|w)
double theta(const HoleConfig& cfg, cplx z);
cplx theta_polarized(const HoleConfig& cfg, cplx zeta, cplx z);

double upsilon_prediction(const HoleConfig& cfg, const Regime& regime);

}  // namespace qhflux
