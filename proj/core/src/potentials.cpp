#include <cmath>

#include "qhflux/potentials.hpp"

namespace qhflux {

Vec2 ab_sum(const std::vector<cplx>& y, std::size_t j) {
  if (j >= y.size()) throw UsageError("tracer index out of range");
  Vec2 s{0.0, 0.0};
  for (std::size_t l = 0; l < y.size(); ++l) {
    if (l == j) continue;
    const cplx d = y[j] - y[l];
    const double r2 = std::norm(d);
    if (!(std::sqrt(r2) >= 1e-12)) throw SingularConfigurationError("Aharonov-Bohm sum: tracers closer than 1e-12");
    const Vec2 p = perp(to_vec2(d));
    s[0] += p[0] / r2;
    s[1] += p[1] / r2;
  }
  return s;
}

EmergentField emergent_field_derivative(const HoleConfig& cfg, std::size_t j) {
  validate(cfg);
  require_distinct(cfg.w);
  if (j >= cfg.n()) throw UsageError("tracer index out of range");
  const UpsilonLogDerivatives ld = upsilon_log_derivatives(cfg, j);
  EmergentField f;
  f.j = j;
  f.method = FieldMethod::derivative;
  f.A_upsilon = {ld.d.imag(), ld.d.real()};
  f.V_upsilon = 2.0 * ld.ddbar;
  const Vec2 yp = perp(to_vec2(cfg.w[j]));
  const Vec2 ab = ab_sum(cfg.w, j);
  f.A = {cfg.b * yp[0] - ab[0] + f.A_upsilon[0], cfg.b * yp[1] - ab[1] + f.A_upsilon[1]};
  f.V = 2.0 * cfg.b + f.V_upsilon;
  return f;
}

QuadratureGrid field_grid(const HoleConfig& cfg, std::size_t j, const IntegralGrids& g) {
  const double ell = 1.0 / std::sqrt(cfg.b);
  const double M = static_cast<double>(kernel_spec(cfg).M);
  PolarGridSpec s;
  s.center = cfg.w[j];
  s.r_max = std::abs(cfg.w[j]) + std::sqrt(M / cfg.b) + g.margin * ell;
  s.r_min = g.r_min;
  s.max_panel_width = g.panel_width * ell;
  s.order = g.order;
  s.angular = g.angular;
  return polar_grid(s);
}

EmergentField emergent_field_integral(const HoleConfig& cfg, std::size_t j, const IntegralGrids& grids) {
  validate(cfg);
  require_distinct(cfg.w);
  if (j >= cfg.n()) throw UsageError("tracer index out of range");
  const double b = cfg.b;
  const std::size_t n = cfg.n();
  const long M = kernel_spec(cfg).M;
  const std::size_t m = static_cast<std::size_t>(M);

  // orbital values at the holes and the projector P = I - Phi^H G^{-1} Phi
  std::vector<std::vector<cplx>> phi_w(n);
  for (std::size_t i = 0; i < n; ++i) orbitals(b, M, cfg.w[i], phi_w[i]);
  ComplexMatrix G(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      cplx s{0.0, 0.0};
      for (std::size_t q = 0; q < m; ++q) s += phi_w[i][q] * std::conj(phi_w[k][q]);
      G(i, k) = s;
    }
  ComplexMatrix Ginv;
  try {
    Ginv = lu_factor(G).inverse();
  } catch (const SingularMatrixError&) {
    throw SingularConfigurationError("kernel matrix is numerically singular");
  }
  std::vector<cplx> P(m * m);
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t l = 0; l < m; ++l) {
      cplx c{0.0, 0.0};
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t q = 0; q < n; ++q) c += std::conj(phi_w[i][k]) * Ginv(i, q) * phi_w[q][l];
      P[k * m + l] = (k == l ? 1.0 : 0.0) - c;
    }

  const QuadratureGrid grid = field_grid(cfg, j, grids);
  const cplx c = cfg.w[j];
  const bool pairwise = grids.double_method == DoubleIntegralMethod::pairwise;
  if (pairwise && grid.size() > grids.pairwise_budget)
    throw ResourceError("double-integral grid budget exceeded");

  cplx a_int{0.0, 0.0};
  double v1 = 0.0;
  std::vector<cplx> amat(pairwise ? 0 : m * m, cplx{0.0, 0.0});
  std::vector<cplx> phi, y(m);
  // pairwise route keeps q(z) = P^T phi(z) and g(z) w(z) per node
  std::vector<cplx> qz, gw;
  std::vector<cplx> phis;
  if (pairwise) {
    qz.resize(grid.size() * m);
    phis.resize(grid.size() * m);
    gw.resize(grid.size());
  }
  for (std::size_t node = 0; node < grid.size(); ++node) {
    const cplx z = grid.nodes[node];
    const double wt = grid.weights[node];
    orbitals(b, M, z, phi);
    // y = P conj(phi)
    for (std::size_t k = 0; k < m; ++k) {
      cplx s{0.0, 0.0};
      for (std::size_t l = 0; l < m; ++l) s += P[k * m + l] * std::conj(phi[l]);
      y[k] = s;
    }
    double kt = 0.0;
    for (std::size_t k = 0; k < m; ++k) kt += (phi[k] * y[k]).real();
    const cplx g = 1.0 / (c - z);
    a_int += wt * kt * g;
    v1 += wt * kt * std::norm(g);
    if (!std::isfinite(kt) || !std::isfinite(g.real()))
      throw IntegrationError(node, "non-finite field integrand");
    if (pairwise) {
      for (std::size_t l = 0; l < m; ++l) {
        cplx s{0.0, 0.0};
        for (std::size_t k = 0; k < m; ++k) s += P[k * m + l] * phi[k];
        qz[node * m + l] = s;
        phis[node * m + l] = phi[l];
      }
      gw[node] = wt * g;
    } else {
      const cplx wg = wt * g;
      for (std::size_t k = 0; k < m; ++k) {
        const cplx pk = wg * phi[k];
        cplx* row = &amat[k * m];
        for (std::size_t l = 0; l < m; ++l) row[l] += pk * std::conj(phi[l]);
      }
    }
  }

  double dbl = 0.0;
  if (pairwise) {
    // sum over node pairs of |Ktilde(z, zeta)|^2 g(z) conj(g(zeta))
    cplx s{0.0, 0.0};
    for (std::size_t a = 0; a < grid.size(); ++a) {
      const cplx* qa = &qz[a * m];
      cplx inner{0.0, 0.0};
      for (std::size_t bnode = 0; bnode < grid.size(); ++bnode) {
        const cplx* pb = &phis[bnode * m];
        cplx kt{0.0, 0.0};
        for (std::size_t l = 0; l < m; ++l) kt += qa[l] * std::conj(pb[l]);
        inner += std::norm(kt) * std::conj(gw[bnode]);
      }
      s += gw[a] * inner;
    }
    dbl = s.real();
  } else {
    // sum_{k,m} A_{km} (P conj(A) P^H)_{km}
    std::vector<cplx> t(m * m, cplx{0.0, 0.0}), u(m * m, cplx{0.0, 0.0});
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t q = 0; q < m; ++q) {
        const cplx pkq = P[k * m + q];
        for (std::size_t p = 0; p < m; ++p) t[k * m + p] += pkq * std::conj(amat[q * m + p]);
      }
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t p = 0; p < m; ++p) {
        const cplx tkp = t[k * m + p];
        for (std::size_t q = 0; q < m; ++q) u[k * m + q] += tkp * std::conj(P[q * m + p]);
      }
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < m * m; ++i) s += amat[i] * u[i];
    dbl = s.real();
  }

  EmergentField f;
  f.j = j;
  f.method = FieldMethod::integral;
  f.A = {a_int.imag(), a_int.real()};
  f.V = 2.0 * v1 - 2.0 * dbl;
  const Vec2 yp = perp(to_vec2(c));
  const Vec2 ab = ab_sum(cfg.w, j);
  f.A_upsilon = {f.A[0] - b * yp[0] + ab[0], f.A[1] - b * yp[1] + ab[1]};
  f.V_upsilon = f.V - 2.0 * b;
  return f;
}

Vec2 correction_a(const Vec2& y) {
  const double u = y[0] * y[0] + y[1] * y[1];
  if (u == 0.0) throw DomainError("correction_a is singular at y = 0");
  const double s = u < 1.0 ? 1.0 / std::expm1(u) : std::exp(-u) / (-std::expm1(-u));
  const Vec2 p = perp(y);
  return {p[0] * s, p[1] * s};
}

double correction_v(const Vec2& y) {
  const double u = y[0] * y[0] + y[1] * y[1];
  if (u < 0.1) {
    // -2 d/du [u/(e^u - 1)] from the Bernoulli series
    const double u2 = u * u, u3 = u2 * u;
    return 1.0 - u / 3.0 + u3 / 90.0 - u3 * u2 / 2520.0 + u3 * u3 * u / 75600.0;
  }
  const double e = std::exp(-u);
  const double d = std::expm1(-u);
  return 2.0 * e * (e - 1.0 + u) / (d * d);
}

RefinedFields refined_fields(const HoleConfig& cfg, std::size_t j) {
  validate(cfg);
  require_distinct(cfg.w);
  if (j >= cfg.n()) throw UsageError("tracer index out of range");
  const double b = cfg.b, sb = std::sqrt(b);
  RefinedFields r;
  const Vec2 yp = perp(to_vec2(cfg.w[j]));
  r.A = {b * yp[0], b * yp[1]};
  r.V = 2.0 * b;
  const Vec2 ab = ab_sum(cfg.w, j);
  r.A[0] -= ab[0];
  r.A[1] -= ab[1];
  for (std::size_t l = 0; l < cfg.n(); ++l) {
    if (l == j) continue;
    const cplx d = sb * (cfg.w[j] - cfg.w[l]);
    const Vec2 a = correction_a(to_vec2(d));
    r.A[0] += sb * a[0];
    r.A[1] += sb * a[1];
    r.V -= b * correction_v(to_vec2(-d));
  }
  return r;
}

EmergentField asymptotic_prediction(const HoleConfig& cfg, std::size_t j, const Regime& regime) {
  validate(cfg);
  if (j >= cfg.n()) throw UsageError("tracer index out of range");
  const double b = cfg.b, sb = std::sqrt(b);
  EmergentField f;
  f.j = j;
  const Vec2 yp = perp(to_vec2(cfg.w[j]));
  const Vec2 ab = ab_sum(cfg.w, j);
  f.A = {b * yp[0] - ab[0], b * yp[1] - ab[1]};
  f.V = 2.0 * b;
  switch (regime.kind) {
    case RegimeKind::no_merging:
      break;
    case RegimeKind::single_merging: {
      if (regime.i >= cfg.n() || regime.j >= cfg.n()) throw UsageError("merging pair out of range");
      if (j == regime.i || j == regime.j) {
        const std::size_t other = (j == regime.i) ? regime.j : regime.i;
        const Vec2 d = to_vec2(sb * (cfg.w[j] - cfg.w[other]));
        const Vec2 a = correction_a(d);
        f.A_upsilon = {sb * a[0], sb * a[1]};
        f.V_upsilon = -b * correction_v(d);
        f.A[0] += f.A_upsilon[0];
        f.A[1] += f.A_upsilon[1];
        f.V += f.V_upsilon;
      }
      break;
    }
    default:
      throw UsageError("no field prediction for regime " + regime.name());
  }
  return f;
}

}  // namespace qhflux
