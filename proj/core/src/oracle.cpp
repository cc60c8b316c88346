#include <algorithm>
#include <cmath>
#include <random>

#include "qhflux/oracle.hpp"
#include "qhflux/partition.hpp"
#include "qhflux/potentials.hpp"

namespace qhflux {

namespace {

void guard_size(const HoleConfig& cfg) {
  if (cfg.N > 4 || cfg.n() > 2) throw ResourceError("monomial expansion limited to N <= 4, n <= 2");
}

double log_orbital_norm2(double b, long k) {
  return (k + 1) * std::log(b) - std::log(kPi) - log_factorial(k);
}

}  // namespace

MonomialPolynomial qh_polynomial(const HoleConfig& cfg) {
  validate(cfg);
  guard_size(cfg);
  const int N = static_cast<int>(cfg.N);
  return hole_factor(N, cfg.w) * MonomialPolynomial::vandermonde(N);
}

double partition_exact(const HoleConfig& cfg) {
  const MonomialPolynomial p = qh_polynomial(cfg);
  return std::log(gaussian_inner(p, p, cfg.b).real());
}

cplx TestFunction::value(cplx y) const {
  const cplx d = y - center;
  const double ph = wavevector[0] * y.real() + wavevector[1] * y.imag();
  cplx v = amplitude * std::exp(cplx(-std::norm(d) / (2.0 * width * width), ph));
  for (int p = 0; p < power; ++p) v *= d;
  return v;
}

std::array<cplx, 2> TestFunction::gradient(cplx y) const {
  const cplx d = y - center;
  const double s2 = width * width;
  const double ph = wavevector[0] * y.real() + wavevector[1] * y.imag();
  const cplx g = amplitude * std::exp(cplx(-std::norm(d) / (2.0 * s2), ph));
  cplx mono{1.0, 0.0}, dmono{0.0, 0.0};
  for (int p = 0; p < power; ++p) {
    dmono = dmono * d + mono;
    mono *= d;
  }
  const cplx v = g * mono;
  const cplx I{0.0, 1.0};
  return {v * (-d.real() / s2 + I * wavevector[0]) + g * dmono,
          v * (-d.imag() / s2 + I * wavevector[1]) + I * g * dmono};
}

TestFunction gaussian_test_function(cplx center, double width, Vec2 wavevector) {
  if (!(width > 0.0)) throw UsageError("test function width must be positive");
  TestFunction f;
  f.center = center;
  f.width = width;
  f.wavevector = wavevector;
  // unit L^2 norm
  f.amplitude = 1.0 / (std::sqrt(kPi) * width);
  return f;
}

double slater_density(double b, const std::vector<long>& ks, const std::vector<cplx>& points) {
  const std::size_t m = points.size(), N = ks.size();
  if (m > N) throw UsageError("slater_density: more points than orbitals");
  if (m == 0) return 1.0;
  std::vector<std::vector<cplx>> u(m, std::vector<cplx>(N));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < N; ++k) u[i][k] = orbital(b, ks[k], points[i]);
  ComplexMatrix g(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      cplx s{0.0, 0.0};
      for (std::size_t k = 0; k < N; ++k) s += u[i][k] * std::conj(u[j][k]);
      g(i, j) = s;
    }
  double det;
  try {
    det = lu_factor(g).determinant().to_complex().real();
  } catch (const SingularMatrixError&) {
    return 0.0;
  }
  return det / std::exp(log_factorial(static_cast<long>(m)));
}

double slater_density_bruteforce(double b, const std::vector<long>& ks, const std::vector<cplx>& points) {
  const int N = static_cast<int>(ks.size()), m = static_cast<int>(points.size());
  if (m > N) throw UsageError("slater_density: more points than orbitals");
  if (N > 4) throw ResourceError("brute-force Slater marginal limited to N <= 4");
  std::vector<int> deg(ks.begin(), ks.end());
  const MonomialPolynomial p = MonomialPolynomial::leibniz(deg);
  double lognorm = 0.0;
  for (long k : ks) lognorm += log_orbital_norm2(b, k);
  // C(N, m) / N!
  lognorm += -log_factorial(m) - log_factorial(N - m);
  return std::exp(lognorm) * gaussian_marginal(p, points, b);
}

QuadratureGrid default_delta_grid(double b, long k, const TestFunction& u, int order, int panels) {
  const double ell = 1.0 / std::sqrt(b);
  const double orb = std::sqrt(static_cast<double>(k) / b) + 8.0 * ell;
  const double half = std::max(orb, std::abs(u.center) + 6.0 * u.width + 3.0 * ell);
  return cartesian_grid({0.0, 0.0}, half, order, panels);
}

DeltaCheckResult delta_check(double b, long k, const TestFunction& u, const QuadratureGrid& grid, int sample_points,
                             std::uint64_t seed) {
  if (!(b > 0.0) || k < 0) throw UsageError("delta_check: bad parameters");
  DeltaCheckResult r;
  const std::size_t n = grid.size();
  std::vector<cplx> phi(n), uu(n);
  for (std::size_t i = 0; i < n; ++i) {
    phi[i] = orbital(b, k, grid.nodes[i]);
    uu[i] = u.value(grid.nodes[i]);
  }
  // <u phi_k | delta | u phi_k> = int conj(u(w)) u(w) phi_k(w) [int conj(phi_k(z)) K_inf(z, w) dz] dw
  const double c = b / kPi;
  cplx q{0.0, 0.0};
  double diag = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    const cplx w = grid.nodes[a];
    const double wa = grid.weights[a];
    diag += wa * std::norm(uu[a] * phi[a]);
    if (std::norm(uu[a]) == 0.0) continue;
    cplx inner{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      const cplx z = grid.nodes[i];
      const cplx kz = c * std::exp(-0.5 * b * (std::norm(z) + std::norm(w)) + b * z * std::conj(w));
      inner += grid.weights[i] * std::conj(phi[i]) * kz;
    }
    q += wa * std::norm(uu[a]) * phi[a] * inner;
  }
  r.quadratic_form = q.real();
  r.diagonal_integral = diag;
  r.quadratic_residual = std::abs(q - diag);

  const KernelSpec spec{b, 1};
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  const double spread = std::abs(u.center) + 2.0 * u.width;
  for (int s = 0; s < sample_points; ++s) {
    const cplx y = u.center + u.width * cplx(nd(rng), nd(rng));
    const cplx x = y + spread * cplx(nd(rng), nd(rng)) * 0.5;
    const cplx psi_yy = u.value(y) * orbital(b, k, y);
    const cplx k_xy = kernel_infty(spec, x, y).to_complex();
    const cplx dpsi = psi_yy * k_xy;
    // (delta Psi)(y; y) = Psi(y; y) K_inf(y, y)
    const cplx dpsi_yy = psi_yy * kernel_infty(spec, y, y).to_complex();
    const cplx d2psi = dpsi_yy * k_xy;
    r.projector_residual = std::max(r.projector_residual, std::abs(d2psi - c * dpsi));
  }
  return r;
}

EnergyIdentityResult energy_identity_check(const HoleConfig& cfg, double q, const TestFunction& phi,
                                           const EnergyIdentityGrid& g) {
  validate(cfg);
  if (cfg.n() != 1) throw UsageError("energy identity check needs exactly one tracer");
  guard_size(cfg);
  EnergyIdentityResult res;
  if (phi.is_zero()) return res;
  const int N = static_cast<int>(cfg.N);
  const double b = cfg.b;
  const double half = g.half_width > 0.0 ? g.half_width : 8.0 * phi.width + phi.power * phi.width;
  const QuadratureGrid grid = cartesian_grid(phi.center, half, g.order, g.panels);
  res.nodes = grid.size();
  const MonomialPolynomial vdm = MonomialPolynomial::vandermonde(N);
  const cplx I{0.0, 1.0};
  const std::array<cplx, 2> e{cplx(1.0, 0.0), I};
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t node = 0; node < grid.size(); ++node) {
    const cplx y = grid.nodes[node];
    const double wt = grid.weights[node];
    const cplx f = phi.value(y);
    const std::array<cplx, 2> df = phi.gradient(y);
    const Vec2 yp = perp(to_vec2(y));

    // exact z-integrals of the bath factor and its w-derivative
    const MonomialPolynomial P = hole_factor(N, {y}) * vdm;
    const MonomialPolynomial dP = hole_factor(N, {y}, 0) * vdm;
    const double n2 = gaussian_inner(P, P, b).real();
    const cplx x1 = gaussian_inner(P, dP, b);
    const double x2 = gaussian_inner(dP, dP, b).real();
    const std::array<double, 2> dlog{2.0 * x1.real() / n2, -2.0 * x1.imag() / n2};
    double l = 0.0;
    for (int a = 0; a < 2; ++a) {
      const cplx D = -I * df[a] - q * b * yp[a] * f + 0.5 * I * f * dlog[a];
      const cplx E = -I * f * e[a];
      l += (std::norm(D) * n2 + std::norm(E) * x2 + 2.0 * (std::conj(D) * E * x1).real()) / n2;
    }
    lhs += wt * l;

    HoleConfig at{{y}, cfg.N, b};
    const EmergentField fld = emergent_field_derivative(at, 0);
    double r = std::norm(f) * fld.V;
    for (int a = 0; a < 2; ++a) r += std::norm(-I * df[a] + fld.A[a] * f - q * b * yp[a] * f);
    rhs += wt * r;
  }
  res.lhs = lhs;
  res.rhs = rhs;
  res.residual = (lhs == 0.0 && rhs == 0.0) ? 0.0 : std::abs(lhs - rhs) / std::abs(lhs);
  return res;
}

}  // namespace qhflux
