#include <algorithm>
#include <cmath>
#include <string>

#include "qhflux/numeric.hpp"

namespace qhflux {

double normalize_phase(double phase) {
  if (!std::isfinite(phase)) return 0.0;
  double p = std::remainder(phase, 2.0 * kPi);
  if (p <= -kPi) p += 2.0 * kPi;
  return p;
}

LogComplex::LogComplex(double lm, double ph) : log_mag(lm), phase(normalize_phase(ph)) {
  if (is_zero()) phase = 0.0;
}

LogComplex LogComplex::from(cplx z) {
  const double a = std::abs(z);
  if (a == 0.0) return zero();
  return {std::log(a), std::arg(z)};
}

cplx LogComplex::to_complex() const {
  if (is_zero()) return {0.0, 0.0};
  return std::polar(std::exp(log_mag), phase);
}

LogComplex LogComplex::operator-() const {
  if (is_zero()) return zero();
  return {log_mag, phase + kPi};
}

LogComplex& LogComplex::operator*=(const LogComplex& o) {
  if (is_zero() || o.is_zero()) {
    *this = zero();
    return *this;
  }
  log_mag += o.log_mag;
  phase = normalize_phase(phase + o.phase);
  return *this;
}

LogComplex& LogComplex::operator/=(const LogComplex& o) {
  if (o.is_zero()) throw DomainError("LogComplex division by zero");
  if (is_zero()) return *this;
  log_mag -= o.log_mag;
  phase = normalize_phase(phase - o.phase);
  return *this;
}

LogComplex log_sum(std::span<const LogComplex> terms) {
  if (terms.empty()) throw UsageError("log_sum of an empty list");
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& t : terms) m = std::max(m, t.log_mag);
  if (m == -std::numeric_limits<double>::infinity()) return LogComplex::zero();
  cplx s{0.0, 0.0};
  double mags = 0.0;
  for (const auto& t : terms) {
    if (t.is_zero()) continue;
    const double r = std::exp(t.log_mag - m);
    s += std::polar(r, t.phase);
    mags += r;
  }
  const double a = std::abs(s);
  if (a <= 64.0 * std::numeric_limits<double>::epsilon() * mags) return LogComplex::zero();
  return {m + std::log(a), std::arg(s)};
}

double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), a_(dim * dim) {}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& o) const {
  if (o.dim_ != dim_) throw UsageError("matrix dimension mismatch");
  ComplexMatrix r(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t k = 0; k < dim_; ++k) {
      const cplx a = (*this)(i, k);
      for (std::size_t j = 0; j < dim_; ++j) r(i, j) += a * o(k, j);
    }
  return r;
}

cplx trace(const ComplexMatrix& m) {
  cplx t{0.0, 0.0};
  for (std::size_t i = 0; i < m.dim(); ++i) t += m(i, i);
  return t;
}

cplx trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  cplx t{0.0, 0.0};
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t k = 0; k < a.dim(); ++k) t += a(i, k) * b(k, i);
  return t;
}

LuFactorization lu_factor(const ComplexMatrix& m) {
  const std::size_t n = m.dim();
  if (n == 0) throw UsageError("lu_factor of an empty matrix");
  LuFactorization f;
  f.lu_ = m;
  f.perm_.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.perm_[i] = i;
  auto& a = f.lu_;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(a(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (!(best >= kSingularPivot))
      throw SingularMatrixError(k, "singular matrix: pivot " + std::to_string(k) + " below threshold");
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      std::swap(f.perm_[k], f.perm_[p]);
      f.parity_ = -f.parity_;
    }
    const cplx piv = a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx l = a(i, k) / piv;
      a(i, k) = l;
      if (l == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= l * a(k, j);
    }
  }
  return f;
}

LogComplex LuFactorization::determinant() const {
  LogComplex d = LogComplex::from_log_real(0.0);
  if (parity_ < 0) d = -d;
  for (std::size_t i = 0; i < dim(); ++i) d *= LogComplex::from(lu_(i, i));
  return d;
}

std::vector<cplx> LuFactorization::solve(std::span<const cplx> rhs) const {
  const std::size_t n = dim();
  if (rhs.size() != n) throw UsageError("solve: right-hand side size mismatch");
  std::vector<cplx> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    cplx s = rhs[perm_[i]];
    for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
    x[i] = s;
  }
  for (std::size_t ii = n; ii-- > 0;) {
    cplx s = x[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= lu_(ii, j) * x[j];
    x[ii] = s / lu_(ii, ii);
  }
  return x;
}

ComplexMatrix LuFactorization::inverse() const {
  const std::size_t n = dim();
  ComplexMatrix inv(n);
  std::vector<cplx> e(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(e.begin(), e.end(), cplx{0.0, 0.0});
    e[j] = 1.0;
    const auto col = solve(e);
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return inv;
}

ComplexMatrix LuFactorization::lower() const {
  ComplexMatrix l(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    l(i, i) = 1.0;
    for (std::size_t j = 0; j < i; ++j) l(i, j) = lu_(i, j);
  }
  return l;
}

ComplexMatrix LuFactorization::upper() const {
  ComplexMatrix u(dim());
  for (std::size_t i = 0; i < dim(); ++i)
    for (std::size_t j = i; j < dim(); ++j) u(i, j) = lu_(i, j);
  return u;
}

namespace {

struct FactorialTables {
  std::vector<double> logfact;
  std::vector<double> cumulative;
  FactorialTables() : logfact(kLogFactorialTable + 1), cumulative(kLogFactorialTable + 1) {
    logfact[0] = 0.0;
    cumulative[0] = 0.0;
    for (long k = 1; k <= kLogFactorialTable; ++k) {
      logfact[k] = std::lgamma(static_cast<double>(k) + 1.0);
      cumulative[k] = cumulative[k - 1] + logfact[k];
    }
  }
};

const FactorialTables& tables() {
  static const FactorialTables t;
  return t;
}

}  // namespace

double log_factorial(long k) {
  if (k < 0) throw DomainError("log_factorial of a negative integer");
  if (k <= kLogFactorialTable) return tables().logfact[k];
  return std::lgamma(static_cast<double>(k) + 1.0);
}

double log_superfactorial(long m) {
  if (m < 0) throw DomainError("log_superfactorial of a negative integer");
  if (m <= kLogFactorialTable) return tables().cumulative[m];
  double s = tables().cumulative[kLogFactorialTable];
  for (long k = kLogFactorialTable + 1; k <= m; ++k) s += log_factorial(k);
  return s;
}

}  // namespace qhflux
