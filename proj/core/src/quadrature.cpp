#include <cmath>
#include <string>

#include "qhflux/numeric.hpp"

namespace qhflux {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw UsageError("gauss_legendre needs at least one node");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

double QuadratureGrid::total_weight() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

namespace {

void panel_rule(double a, double b, int panels, int order, std::vector<double>& x, std::vector<double>& w) {
  std::vector<double> gx, gw;
  gauss_legendre(order, gx, gw);
  x.clear();
  w.clear();
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    for (int i = 0; i < order; ++i) {
      x.push_back(lo + 0.5 * h * (gx[i] + 1.0));
      w.push_back(0.5 * h * gw[i]);
    }
  }
}

}  // namespace

QuadratureGrid cartesian_grid(cplx center, double half_width, int order, int panels) {
  if (half_width <= 0.0 || order < 1 || panels < 1) throw UsageError("cartesian_grid: bad parameters");
  std::vector<double> x, w;
  panel_rule(-half_width, half_width, panels, order, x, w);
  QuadratureGrid g;
  g.scheme = GridScheme::cartesian_tensor;
  g.center = center;
  g.nodes.reserve(x.size() * x.size());
  g.weights.reserve(x.size() * x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) {
      g.nodes.push_back(center + cplx(x[i], x[j]));
      g.weights.push_back(w[i] * w[j]);
    }
  return g;
}

QuadratureGrid default_cartesian_grid(double b, double radius_scale, int order, int panels) {
  if (b <= 0.0) throw UsageError("default_cartesian_grid: b must be positive");
  return cartesian_grid({0.0, 0.0}, radius_scale + 8.0 / std::sqrt(b), order, panels);
}

QuadratureGrid polar_grid(const PolarGridSpec& s) {
  if (s.r_max <= 0.0 || s.order < 1 || s.angular < 1 || s.r_min <= 0.0 || s.growth <= 1.0 ||
      s.max_panel_width <= 0.0)
    throw UsageError("polar_grid: bad parameters");
  std::vector<double> edges{0.0};
  double r = std::min(s.r_min, s.r_max);
  edges.push_back(r);
  while (r < s.r_max) {
    const double next = std::min(r + std::min(r * (s.growth - 1.0), s.max_panel_width), s.r_max);
    if (s.r_max - next < 1e-3 * (next - r)) {
      edges.push_back(s.r_max);
      break;
    }
    edges.push_back(next);
    r = next;
  }
  std::vector<double> gx, gw;
  gauss_legendre(s.order, gx, gw);
  QuadratureGrid g;
  g.scheme = GridScheme::polar_centered;
  g.center = s.center;
  g.angular_count = s.angular;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double lo = edges[p], hi = edges[p + 1], h = hi - lo;
    for (int i = 0; i < s.order; ++i) {
      const double rr = lo + 0.5 * h * (gx[i] + 1.0);
      g.ring_radii.push_back(rr);
      g.ring_weights.push_back(0.5 * h * gw[i] * rr);
    }
  }
  const double dth = 2.0 * kPi / s.angular;
  g.nodes.reserve(g.ring_radii.size() * s.angular);
  g.weights.reserve(g.ring_radii.size() * s.angular);
  for (std::size_t i = 0; i < g.ring_radii.size(); ++i)
    for (int k = 0; k < s.angular; ++k) {
      g.nodes.push_back(s.center + std::polar(g.ring_radii[i], (k + 0.5) * dth));
      g.weights.push_back(g.ring_weights[i] * dth);
    }
  return g;
}

cplx integrate2d(const QuadratureGrid& grid, const std::function<cplx(cplx)>& f) {
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    const cplx v = f(grid.nodes[i]);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw IntegrationError(i, "non-finite integrand at node " + std::to_string(i));
    s += grid.weights[i] * v;
  }
  return s;
}

double integrate2d_real(const QuadratureGrid& grid, const std::function<double(cplx)>& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    const double v = f(grid.nodes[i]);
    if (!std::isfinite(v)) throw IntegrationError(i, "non-finite integrand at node " + std::to_string(i));
    s += grid.weights[i] * v;
  }
  return s;
}

}  // namespace qhflux
