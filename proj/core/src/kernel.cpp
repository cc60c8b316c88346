#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "qhflux/kernel.hpp"

namespace qhflux {

void validate(const KernelSpec& spec) {
  if (!(spec.b > 0.0) || !std::isfinite(spec.b)) throw UsageError("KernelSpec: b must be positive");
  if (spec.M < 1) throw UsageError("KernelSpec: M must be at least 1");
}

namespace {

constexpr double kRescale = 1e130;
const double kLogRescale = std::log(kRescale);
constexpr double kBadCondition = 1e2;

struct SeriesSum {
  LogComplex value;
  double log_abs = -std::numeric_limits<double>::infinity();  // log of sum of |terms|
};

cplx unit_power(cplx u, long k) {
  cplx r{1.0, 0.0};
  while (k > 0) {
    if (k & 1) r *= u;
    u *= u;
    k >>= 1;
  }
  return r;
}

// sum_{i in [i0, i1)} weight(i) x^i / i!, i1 < 0 meaning infinity; scaled recurrence
template <class W>
SeriesSum exp_series(cplx x, long i0, long i1, W&& weight) {
  SeriesSum out;
  if (i1 >= 0 && i1 <= i0) return out;
  const double ax = std::abs(x);
  if (ax == 0.0) {
    if (i0 == 0) {
      const double w0 = weight(0L);
      out.value = LogComplex::from(cplx(w0, 0.0));
      out.log_abs = std::log(std::abs(w0));
    }
    return out;
  }
  double L = 0.0;
  cplx t{1.0, 0.0};
  if (i0 > 0) {
    L = static_cast<double>(i0) * std::log(ax) - log_factorial(i0);
    t = unit_power(x / ax, i0);
  }
  cplx s{0.0, 0.0};
  double abs_s = 0.0;
  const long cap = i1 >= 0 ? i1 : i0 + static_cast<long>(10.0 * ax) + 2000;
  for (long i = i0; i < cap; ++i) {
    const cplx term = t * weight(i);
    s += term;
    const double at = std::abs(term);
    abs_s += at;
    const double ratio = ax / static_cast<double>(i + 1);
    if (ratio < 0.9 && at <= 1e-18 * abs_s) break;
    t *= x / static_cast<double>(i + 1);
    const double mt = std::abs(t);
    if (mt == 0.0) break;
    if (mt > kRescale) {
      t /= kRescale;
      s /= kRescale;
      abs_s /= kRescale;
      L += kLogRescale;
    }
  }
  if (abs_s == 0.0) return out;
  out.log_abs = L + std::log(abs_s);
  const double as = std::abs(s);
  if (as <= 64.0 * std::numeric_limits<double>::epsilon() * abs_s) {
    out.value = LogComplex::zero();
  } else {
    out.value = LogComplex(L + std::log(as), std::arg(s));
  }
  return out;
}

double log_condition(const SeriesSum& s) {
  if (s.value.is_zero()) return std::numeric_limits<double>::infinity();
  return s.log_abs - s.value.log_mag;
}

double log_prefactor(const KernelSpec& spec, cplx z, cplx w) {
  return std::log(spec.b / kPi) - 0.5 * spec.b * (std::norm(z) + std::norm(w));
}

LogComplex log_pow(cplx z, int k) {
  if (k == 0) return LogComplex::from_log_real(0.0);
  if (z == 0.0) return LogComplex::zero();
  return LogComplex(k * std::log(std::abs(z)), k * std::arg(z));
}

double falling(double x, int r) {
  double p = 1.0;
  for (int i = 0; i < r; ++i) p *= (x - i);
  return p;
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void check_order(const DerivOrder& o) {
  for (int v : o.a)
    if (v < 0) throw UsageError("negative derivative order");
  if (o.total() > kMaxDerivOrder) throw UsageError("derivative order above supported range");
}

// one (r, r') contribution of the term-wise differentiated series, restricted to j in [j_lo, j_hi)
struct Piece {
  LogComplex value;
  double log_abs = -std::numeric_limits<double>::infinity();
};

Piece derivative_piece(const KernelSpec& spec, cplx z, cplx w, const DerivOrder& o, int r, int rp, long j_lo,
                       long j_hi) {
  const int a1 = o.a[0], a2 = o.a[1], a3 = o.a[2], a4 = o.a[3];
  const int d1 = r - a1, d2 = rp - a4;
  const int d = std::max({0, d1, d2});
  const double b = spec.b;
  const cplx x = b * z * std::conj(w);
  const long i_lo = std::max<long>(0, j_lo - d);
  const long i_hi = j_hi < 0 ? -1 : j_hi - d;
  Piece out;
  if (i_hi >= 0 && i_hi <= i_lo) return out;
  auto weight = [&](long i) {
    const double id = static_cast<double>(i);
    double v = falling(id + d + a1, r) * falling(id + d + a4, rp);
    for (int k = 1; k <= d; ++k) v /= (id + k);
    return v;
  };
  const SeriesSum s = exp_series(x, i_lo, i_hi, weight);
  if (s.value.is_zero() && s.log_abs == -std::numeric_limits<double>::infinity()) return out;
  LogComplex pre = LogComplex::from_log_real((d + 1) * std::log(b) - std::log(kPi) -
                                             0.5 * b * (std::norm(z) + std::norm(w)));
  pre *= LogComplex::from(cplx(binom(a2, r) * binom(a3, rp), 0.0));
  pre *= log_pow(cplx(-0.5 * b, 0.0), a1 + a4);
  pre *= log_pow(-0.5 * b * std::conj(z), a2 - r);
  pre *= log_pow(-0.5 * b * w, a3 - rp);
  pre *= log_pow(z, d - d1);
  pre *= log_pow(std::conj(w), d - d2);
  if (pre.is_zero()) return out;
  out.value = pre * s.value;
  out.log_abs = pre.log_mag + s.log_abs;
  return out;
}

Piece derivative_range(const KernelSpec& spec, cplx z, cplx w, const DerivOrder& o, long j_lo, long j_hi) {
  std::vector<LogComplex> vals;
  double log_abs = -std::numeric_limits<double>::infinity();
  for (int r = 0; r <= o.a[1]; ++r)
    for (int rp = 0; rp <= o.a[2]; ++rp) {
      const Piece p = derivative_piece(spec, z, w, o, r, rp, j_lo, j_hi);
      if (!p.value.is_zero()) vals.push_back(p.value);
      log_abs = log_add(log_abs, p.log_abs);
    }
  Piece out;
  out.log_abs = log_abs;
  if (!vals.empty()) out.value = log_sum(vals);
  return out;
}

// polynomial in (zbar, z, wbar, w) multiplying K_inf after differentiation
struct Poly4 {
  std::vector<std::pair<std::array<int, 4>, cplx>> terms;

  void add(std::array<int, 4> e, cplx c) {
    for (auto& t : terms)
      if (t.first == e) {
        t.second += c;
        return;
      }
    terms.emplace_back(e, c);
  }

  Poly4 derivative(int var, double b) const {
    static const std::array<std::vector<std::pair<std::array<int, 4>, double>>, 4> dF = {{
        {{{0, 1, 0, 0}, -0.5}},
        {{{0, 0, 1, 0}, 1.0}, {{1, 0, 0, 0}, -0.5}},
        {{{0, 1, 0, 0}, 1.0}, {{0, 0, 0, 1}, -0.5}},
        {{{0, 0, 1, 0}, -0.5}},
    }};
    Poly4 out;
    for (const auto& [e, c] : terms) {
      if (e[var] > 0) {
        auto e2 = e;
        e2[var] -= 1;
        out.add(e2, c * static_cast<double>(e[var]));
      }
      for (const auto& [f, fc] : dF[var]) {
        auto e2 = e;
        for (int k = 0; k < 4; ++k) e2[k] += f[k];
        out.add(e2, c * (fc * b));
      }
    }
    return out;
  }

  cplx eval(cplx z, cplx w) const {
    const std::array<cplx, 4> v{std::conj(z), z, std::conj(w), w};
    cplx s{0.0, 0.0};
    for (const auto& [e, c] : terms) {
      cplx m = c;
      for (int k = 0; k < 4; ++k)
        for (int p = 0; p < e[k]; ++p) m *= v[k];
      s += m;
    }
    return s;
  }
};

LogComplex infty_derivative(const KernelSpec& spec, cplx z, cplx w, const DerivOrder& o) {
  Poly4 p;
  p.add({0, 0, 0, 0}, 1.0);
  for (int var = 0; var < 4; ++var)
    for (int k = 0; k < o.a[var]; ++k) p = p.derivative(var, spec.b);
  return LogComplex::from(p.eval(z, w)) * kernel_infty(spec, z, w);
}

}  // namespace

LogComplex kernel_infty(const KernelSpec& spec, cplx z, cplx w) {
  validate(spec);
  const double b = spec.b;
  const cplx e = -0.5 * b * (std::norm(z) + std::norm(w) - 2.0 * z * std::conj(w));
  return LogComplex(std::log(b / kPi) + e.real(), e.imag());
}

LogComplex kernel_tail(const KernelSpec& spec, cplx z, cplx w) {
  validate(spec);
  const cplx x = spec.b * z * std::conj(w);
  const SeriesSum t = exp_series(x, spec.M, -1, [](long) { return 1.0; });
  return LogComplex::from_log_real(log_prefactor(spec, z, w)) * t.value;
}

LogComplex kernel_eval(const KernelSpec& spec, cplx z, cplx w) {
  validate(spec);
  const cplx x = spec.b * z * std::conj(w);
  const auto one = [](long) { return 1.0; };
  SeriesSum direct = exp_series(x, 0, spec.M, one);
  const double cond = log_condition(direct);
  LogComplex s = direct.value;
  if (cond > std::log(kBadCondition)) {
    // complement route: e^x minus the tail
    const SeriesSum tail = exp_series(x, spec.M, -1, one);
    const LogComplex ex(x.real(), x.imag());
    const LogComplex parts[2] = {ex, -tail.value};
    const LogComplex alt = log_sum(parts);
    if (!alt.is_zero()) {
      const double alt_cond = log_add(ex.log_mag, tail.log_abs) - alt.log_mag;
      if (alt_cond < cond) s = alt;
    }
  }
  return LogComplex::from_log_real(log_prefactor(spec, z, w)) * s;
}

cplx kernel_derivative(const KernelSpec& spec, cplx z, cplx w, const DerivOrder& order, KernelKind which) {
  validate(spec);
  check_order(order);
  if (which == KernelKind::infinite) return infty_derivative(spec, z, w, order).to_complex();
  if (order.total() == 0) return kernel_eval(spec, z, w).to_complex();
  const Piece direct = derivative_range(spec, z, w, order, 0, spec.M);
  const double cond =
      direct.value.is_zero() ? std::numeric_limits<double>::infinity() : direct.log_abs - direct.value.log_mag;
  LogComplex best = direct.value;
  if (cond > std::log(kBadCondition)) {
    const Piece tail = derivative_range(spec, z, w, order, spec.M, -1);
    const LogComplex inf = infty_derivative(spec, z, w, order);
    const LogComplex parts[2] = {inf, -tail.value};
    const LogComplex alt = log_sum(parts);
    if (!alt.is_zero()) {
      const double alt_cond = log_add(inf.log_mag, tail.log_abs) - alt.log_mag;
      if (alt_cond < cond) best = alt;
    } else if (inf.is_zero() && tail.value.is_zero()) {
      best = alt;
    }
  }
  return best.to_complex();
}

cplx kernel_tail_derivative(const KernelSpec& spec, cplx z, cplx w, const DerivOrder& order) {
  validate(spec);
  check_order(order);
  return derivative_range(spec, z, w, order, spec.M, -1).value.to_complex();
}

double kernel_diagonal(const KernelSpec& spec, cplx z) { return kernel_eval(spec, z, z).real(); }

namespace {

// log of t^k e^{-t} / k!
double log_poisson(long k, double t) {
  if (k < 0) return -std::numeric_limits<double>::infinity();
  if (t == 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  return k * std::log(t) - t - log_factorial(k);
}

}  // namespace

cplx kernel_diagonal_derivative(const KernelSpec& spec, cplx z, int holo, int anti, KernelKind which) {
  validate(spec);
  if (holo < 0 || anti < 0 || holo + anti > 2) throw UsageError("diagonal derivative order above 2");
  if (which == KernelKind::infinite) return (holo + anti == 0) ? cplx(spec.b / kPi, 0.0) : cplx(0.0, 0.0);
  if (holo + anti == 0) return {kernel_diagonal(spec, z), 0.0};
  const double b = spec.b, u = std::norm(z), t = b * u;
  const long M = spec.M;
  const double pm1 = std::exp(log_poisson(M - 1, t));
  const double pm2 = std::exp(log_poisson(M - 2, t));
  const double d1 = -(b * b / kPi) * pm1;
  const double d2 = -(b * b * b / kPi) * (pm2 - pm1);
  if (holo == 1 && anti == 0) return std::conj(z) * d1;
  if (holo == 0 && anti == 1) return z * d1;
  if (holo == 2) return std::conj(z) * std::conj(z) * d2;
  if (anti == 2) return z * z * d2;
  return {d1 + u * d2, 0.0};
}

cplx orbital(double b, long k, cplx z) {
  if (k < 0) throw UsageError("negative orbital index");
  const double lm = 0.5 * ((k + 1) * std::log(b) - std::log(kPi) - log_factorial(k)) - 0.5 * b * std::norm(z);
  return (LogComplex::from_log_real(lm) * log_pow(z, static_cast<int>(k))).to_complex();
}

void orbitals(double b, long count, cplx z, std::vector<cplx>& out) {
  out.resize(count);
  if (count == 0) return;
  // recurrence phi_{k+1} = phi_k * sqrt(b/(k+1)) z, started in log scale to dodge underflow
  const double az = std::abs(z);
  if (az == 0.0) {
    std::fill(out.begin(), out.end(), cplx(0.0, 0.0));
    out[0] = orbital(b, 0, z);
    return;
  }
  const cplx u = z / az;
  cplx ph{1.0, 0.0};
  for (long k = 0; k < count; ++k) {
    const double lm = 0.5 * ((k + 1) * std::log(b) - std::log(kPi) - log_factorial(k)) - 0.5 * b * az * az +
                      k * std::log(az);
    out[k] = std::exp(lm) * ph;
    ph *= u;
  }
}

double log_kernel_tail_bound(double N, cplx z, cplx w) {
  const double x = std::abs(z * std::conj(w));
  if (x >= 1.0) throw DomainError("kernel_tail_bound requires |z conj(w)| < 1");
  const auto phi = [](double v) {
    if (v == 0.0) return std::numeric_limits<double>::infinity();
    return v - std::log(v) - 1.0;
  };
  const double e = phi(std::norm(z)) + phi(std::norm(w));
  if (std::isinf(e)) return -std::numeric_limits<double>::infinity();
  return -std::log(kPi) + 0.5 * std::log(5.0 * N / (4.0 * kPi)) - std::log1p(-x) - 0.5 * N * e;
}

double kernel_tail_bound(double N, cplx z, cplx w) { return std::exp(log_kernel_tail_bound(N, z, w)); }

double reproducing_residual(const KernelSpec& spec, cplx z, cplx w, const QuadratureGrid& grid) {
  const cplx lhs = integrate2d(grid, [&](cplx x) {
    return (kernel_eval(spec, z, x) * kernel_eval(spec, x, w)).to_complex();
  });
  const cplx k = kernel_eval(spec, z, w).to_complex();
  return std::abs(lhs - k) / std::abs(k);
}

double kernel_trace(const KernelSpec& spec, const QuadratureGrid& grid) {
  return integrate2d_real(grid, [&](cplx x) { return kernel_diagonal(spec, x); });
}

double kernel_hilbert_schmidt(const KernelSpec& spec, const QuadratureGrid& grid) {
  validate(spec);
  const std::size_t m = static_cast<std::size_t>(spec.M);
  // |K|^2 summed over node pairs equals sum |G_qr|^2 with G the quadrature Gram matrix
  std::vector<cplx> gram(m * m, cplx{0.0, 0.0}), row;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    orbitals(spec.b, spec.M, grid.nodes[i], row);
    const double wt = grid.weights[i];
    for (std::size_t q = 0; q < m; ++q) {
      const cplx a = wt * std::conj(row[q]);
      for (std::size_t r = 0; r < m; ++r) gram[q * m + r] += a * row[r];
    }
  }
  double s = 0.0;
  for (const auto& g : gram) s += std::norm(g);
  return s;
}

}  // namespace qhflux
