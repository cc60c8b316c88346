#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "qhflux/monomial.hpp"
#include "qhflux/plasma.hpp"
#include "qhflux/regime.hpp"

namespace qhflux {

// log c_qh(w)^{-2} by exact term-wise Gaussian integration; N <= 4, n <= 2
double partition_exact(const HoleConfig& cfg);
MonomialPolynomial qh_polynomial(const HoleConfig& cfg);

// A (y - c)^power exp(-|y - c|^2 / (2 width^2) + i k.y)
struct TestFunction {
  cplx center{0.0, 0.0};
  double width = 1.0;
  cplx amplitude{1.0, 0.0};
  Vec2 wavevector{0.0, 0.0};
  int power = 0;

  cplx value(cplx y) const;
  std::array<cplx, 2> gradient(cplx y) const;
  bool is_zero() const { return amplitude == cplx(0.0, 0.0); }
};
TestFunction gaussian_test_function(cplx center, double width, Vec2 wavevector = {0.0, 0.0});

// m-point density of the Slater determinant of orbitals `ks`: det[gamma1(x_i, x_j)] / m!
double slater_density(double b, const std::vector<long>& ks, const std::vector<cplx>& points);
// same quantity from C(N, m) times the |Slater|^2 marginal, by monomial expansion; N <= 4
double slater_density_bruteforce(double b, const std::vector<long>& ks, const std::vector<cplx>& points);

struct DeltaCheckResult {
  double quadratic_form = 0.0;   // <Psi|delta|Psi>
  double diagonal_integral = 0.0;  // int |u phi_k|^2
  double quadratic_residual = 0.0;
  double projector_residual = 0.0;  // sup |delta^2 Psi - (b/pi) delta Psi|
};
QuadratureGrid default_delta_grid(double b, long k, const TestFunction& u, int order = 16, int panels = 4);
DeltaCheckResult delta_check(double b, long k, const TestFunction& u, const QuadratureGrid& grid,
                             int sample_points = 64, std::uint64_t seed = 1);

struct EnergyIdentityGrid {
  double half_width = 0.0;  // 0 selects 8 widths of the test function
  int order = 24;
  int panels = 4;
};
struct EnergyIdentityResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  // |lhs - rhs| / |lhs|, 0 when both vanish
  std::size_t nodes = 0;
};
// cfg.w only fixes n = 1; the tracer position is the integration variable
EnergyIdentityResult energy_identity_check(const HoleConfig& cfg, double q, const TestFunction& phi,
                                           const EnergyIdentityGrid& grid = {});

}  // namespace qhflux
