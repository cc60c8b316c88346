#include <cmath>
#include <string>

#include "qhflux/partition.hpp"

namespace qhflux {

void validate(const HoleConfig& cfg) {
  if (cfg.N < 0) throw UsageError("HoleConfig: N must be nonnegative");
  if (!(cfg.b > 0.0)) throw UsageError("HoleConfig: b must be positive");
  if (cfg.N + static_cast<long>(cfg.n()) < 1) throw UsageError("HoleConfig: N + n must be positive");
  for (const auto& w : cfg.w)
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) throw UsageError("HoleConfig: non-finite position");
}

bool has_coincident_points(const std::vector<cplx>& w) {
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = i + 1; j < w.size(); ++j)
      if (w[i] == w[j]) return true;
  return false;
}

void require_distinct(const std::vector<cplx>& w) {
  if (has_coincident_points(w)) throw SingularConfigurationError("hole positions must be pairwise distinct");
}

ComplexMatrix upsilon_matrix(const HoleConfig& cfg) {
  validate(cfg);
  const KernelSpec ks = kernel_spec(cfg);
  const std::size_t n = cfg.n();
  ComplexMatrix m(n);
  const double scale = kPi / cfg.b;
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = scale * kernel_diagonal(ks, cfg.w[i]);
    for (std::size_t k = i + 1; k < n; ++k) {
      const cplx v = scale * kernel_eval(ks, cfg.w[i], cfg.w[k]).to_complex();
      m(i, k) = v;
      m(k, i) = std::conj(v);
    }
  }
  return m;
}

double log_upsilon(const HoleConfig& cfg) {
  if (cfg.n() == 0) return 0.0;
  try {
    const LogComplex d = lu_factor(upsilon_matrix(cfg)).determinant();
    if (d.is_zero() || std::cos(d.phase) <= 0.0) return -std::numeric_limits<double>::infinity();
    return d.log_mag + std::log(std::cos(d.phase));
  } catch (const SingularMatrixError&) {
    return -std::numeric_limits<double>::infinity();
  }
}

double upsilon(const HoleConfig& cfg) {
  if (cfg.n() == 0) return 1.0;
  if (has_coincident_points(cfg.w)) return 0.0;
  const double v = std::exp(log_upsilon(cfg));
  return std::min(1.0, std::max(0.0, v));
}

namespace {

struct Op {
  std::size_t var;
  bool anti;
};

// derivative of entry (i, k) of the unscaled kernel matrix under a list of at most two ops
cplx entry_derivative(const HoleConfig& cfg, const KernelSpec& ks, std::size_t i, std::size_t k,
                      const std::vector<Op>& ops) {
  if (i == k) {
    int holo = 0, anti = 0;
    for (const auto& op : ops) {
      if (op.var != i) return 0.0;
      (op.anti ? anti : holo) += 1;
    }
    return kernel_diagonal_derivative(ks, cfg.w[i], holo, anti, KernelKind::truncated);
  }
  DerivOrder o;
  for (const auto& op : ops) {
    if (op.var == i)
      o.a[op.anti ? 0 : 1] += 1;
    else if (op.var == k)
      o.a[op.anti ? 2 : 3] += 1;
    else
      return 0.0;
  }
  return kernel_derivative(ks, cfg.w[i], cfg.w[k], o, KernelKind::truncated);
}

ComplexMatrix derivative_matrix(const HoleConfig& cfg, const std::vector<Op>& ops) {
  const KernelSpec ks = kernel_spec(cfg);
  const std::size_t n = cfg.n();
  const double scale = kPi / cfg.b;
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) m(i, k) = scale * entry_derivative(cfg, ks, i, k, ops);
  return m;
}

struct Factored {
  ComplexMatrix inv;
  cplx det;
};

Factored factor_config(const HoleConfig& cfg) {
  require_distinct(cfg.w);
  try {
    const auto f = lu_factor(upsilon_matrix(cfg));
    return {f.inverse(), f.determinant().to_complex()};
  } catch (const SingularMatrixError&) {
    throw SingularConfigurationError("Upsilon matrix is numerically singular");
  }
}

}  // namespace

cplx upsilon_derivative(const HoleConfig& cfg, const std::vector<int>& alpha, const std::vector<int>& beta) {
  validate(cfg);
  const std::size_t n = cfg.n();
  if (alpha.size() != n || beta.size() != n) throw UsageError("upsilon_derivative: order tuples must have length n");
  std::vector<Op> ops;
  for (std::size_t j = 0; j < n; ++j) {
    if (alpha[j] < 0 || beta[j] < 0) throw UsageError("upsilon_derivative: negative order");
    for (int k = 0; k < alpha[j]; ++k) ops.push_back({j, false});
    for (int k = 0; k < beta[j]; ++k) ops.push_back({j, true});
  }
  if (ops.size() > 2) throw UsageError("upsilon_derivative supports total order <= 2");
  if (n == 0) return ops.empty() ? 1.0 : 0.0;
  if (ops.empty()) {
    if (has_coincident_points(cfg.w)) return 0.0;
    return upsilon(cfg);
  }
  const Factored f = factor_config(cfg);
  if (ops.size() == 1) return f.det * trace_product(f.inv, derivative_matrix(cfg, ops));
  const ComplexMatrix ia = f.inv * derivative_matrix(cfg, {ops[0]});
  const ComplexMatrix ib = f.inv * derivative_matrix(cfg, {ops[1]});
  const cplx t2 = trace_product(f.inv, derivative_matrix(cfg, ops));
  return f.det * (t2 + trace(ia) * trace(ib) - trace_product(ia, ib));
}

UpsilonLogDerivatives upsilon_log_derivatives(const HoleConfig& cfg, std::size_t j) {
  validate(cfg);
  if (j >= cfg.n()) throw UsageError("tracer index out of range");
  const Factored f = factor_config(cfg);
  UpsilonLogDerivatives out;
  out.upsilon = f.det.real();
  if (!(out.upsilon >= 1e-280))
    throw DegenerateConfigurationError("Upsilon below 1e-280: merging too deep for double range");
  const Op d{j, false}, db{j, true};
  const ComplexMatrix ia = f.inv * derivative_matrix(cfg, {d});
  const ComplexMatrix ib = f.inv * derivative_matrix(cfg, {db});
  out.d = trace(ia);
  out.ddbar = (trace_product(f.inv, derivative_matrix(cfg, {d, db})) - trace_product(ia, ib)).real();
  return out;
}

double log_gamma_normalization(long N, long n, double b) {
  const long m = N + n;
  return log_factorial(N) + N * std::log(kPi) + log_superfactorial(m - 1) +
         (static_cast<double>(n) - 0.5 * static_cast<double>(m) * static_cast<double>(m + 1)) * std::log(b);
}

PartitionValue log_partition(const HoleConfig& cfg) {
  validate(cfg);
  require_distinct(cfg.w);
  PartitionValue v;
  auto& c = v.components;
  c.log_gamma = log_gamma_normalization(cfg.N, static_cast<long>(cfg.n()), cfg.b);
  for (const auto& w : cfg.w) c.gaussian += cfg.b * std::norm(w);
  for (std::size_t i = 0; i < cfg.n(); ++i)
    for (std::size_t j = i + 1; j < cfg.n(); ++j) c.vandermonde -= 2.0 * std::log(std::abs(cfg.w[j] - cfg.w[i]));
  c.log_upsilon = log_upsilon(cfg);
  if (!std::isfinite(c.log_upsilon)) throw SingularConfigurationError("Upsilon vanishes numerically");
  v.log_value = c.log_gamma + c.gaussian + c.vandermonde + c.log_upsilon;
  return v;
}

namespace {

struct ThetaSystem {
  LuFactorization lu;
  KernelSpec ks;
};

ThetaSystem theta_system(const HoleConfig& cfg) {
  validate(cfg);
  require_distinct(cfg.w);
  const KernelSpec ks = kernel_spec(cfg);
  const std::size_t n = cfg.n();
  ComplexMatrix g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) g(i, k) = kernel_eval(ks, cfg.w[i], cfg.w[k]).to_complex();
  try {
    return {lu_factor(g), ks};
  } catch (const SingularMatrixError&) {
    throw SingularConfigurationError("kernel matrix is numerically singular");
  }
}

std::vector<cplx> kernel_column(const HoleConfig& cfg, const KernelSpec& ks, cplx z) {
  std::vector<cplx> a(cfg.n());
  for (std::size_t i = 0; i < cfg.n(); ++i) a[i] = kernel_eval(ks, cfg.w[i], z).to_complex();
  return a;
}

}  // namespace

cplx theta_polarized(const HoleConfig& cfg, cplx zeta, cplx z) {
  if (cfg.n() == 0) return 0.0;
  const ThetaSystem sys = theta_system(cfg);
  const auto az = kernel_column(cfg, sys.ks, z);
  const auto azeta = kernel_column(cfg, sys.ks, zeta);
  const auto x = sys.lu.solve(az);
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < cfg.n(); ++i) s += std::conj(azeta[i]) * x[i];
  return s;
}

double theta(const HoleConfig& cfg, cplx z) { return theta_polarized(cfg, z, z).real(); }

double upsilon_prediction(const HoleConfig& cfg, const Regime& regime) {
  switch (regime.kind) {
    case RegimeKind::no_merging:
      return 1.0;
    case RegimeKind::single_merging: {
      if (regime.i >= cfg.n() || regime.j >= cfg.n()) throw UsageError("merging pair out of range");
      return -std::expm1(-cfg.b * std::norm(cfg.w[regime.i] - cfg.w[regime.j]));
    }
    default:
      throw UsageError("no Upsilon prediction for regime " + regime.name());
  }
}

}  // namespace qhflux
