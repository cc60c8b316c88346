#include <algorithm>
#include <cmath>
#include <numeric>

#include "qhflux/monomial.hpp"

namespace qhflux {

MonomialPolynomial MonomialPolynomial::constant(int nvars, cplx c) {
  MonomialPolynomial p(nvars);
  p.add(Exponents(nvars, 0), c);
  return p;
}

MonomialPolynomial MonomialPolynomial::leibniz(const std::vector<int>& degrees) {
  const int n = static_cast<int>(degrees.size());
  MonomialPolynomial p(n);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    Exponents e(n);
    for (int j = 0; j < n; ++j) e[j] = degrees[perm[j]];
    p.add(e, (inversions % 2) ? -1.0 : 1.0);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return p;
}

MonomialPolynomial MonomialPolynomial::vandermonde(int nvars) {
  std::vector<int> deg(nvars);
  std::iota(deg.begin(), deg.end(), 0);
  // det[z_k^j] = prod_{k<l}(z_l - z_k)
  const double sign = ((nvars * (nvars - 1) / 2) % 2) ? -1.0 : 1.0;
  return leibniz(deg).scaled(sign);
}

void MonomialPolynomial::add(const Exponents& e, cplx c) {
  if (static_cast<int>(e.size()) != nvars_) throw UsageError("monomial arity mismatch");
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    if (c != 0.0) terms_.emplace(e, c);
    return;
  }
  it->second += c;
}

MonomialPolynomial MonomialPolynomial::times_linear(int k, cplx a) const {
  MonomialPolynomial r(nvars_);
  for (const auto& [e, c] : terms_) {
    r.add(e, a * c);
    auto e2 = e;
    e2[k] += 1;
    r.add(e2, -c);
  }
  return r;
}

MonomialPolynomial MonomialPolynomial::operator*(const MonomialPolynomial& o) const {
  if (o.nvars_ != nvars_) throw UsageError("monomial arity mismatch");
  MonomialPolynomial r(nvars_);
  for (const auto& [e1, c1] : terms_)
    for (const auto& [e2, c2] : o.terms_) {
      Exponents e(nvars_);
      for (int k = 0; k < nvars_; ++k) e[k] = e1[k] + e2[k];
      r.add(e, c1 * c2);
    }
  return r;
}

MonomialPolynomial MonomialPolynomial::operator+(const MonomialPolynomial& o) const {
  if (o.nvars_ != nvars_) throw UsageError("monomial arity mismatch");
  MonomialPolynomial r = *this;
  for (const auto& [e, c] : o.terms_) r.add(e, c);
  return r;
}

MonomialPolynomial MonomialPolynomial::scaled(cplx c) const {
  MonomialPolynomial r(nvars_);
  for (const auto& [e, v] : terms_) r.add(e, v * c);
  return r;
}

cplx MonomialPolynomial::evaluate(const std::vector<cplx>& z) const {
  if (static_cast<int>(z.size()) != nvars_) throw UsageError("monomial arity mismatch");
  cplx s{0.0, 0.0};
  for (const auto& [e, c] : terms_) {
    cplx m = c;
    for (int k = 0; k < nvars_; ++k)
      for (int p = 0; p < e[k]; ++p) m *= z[k];
    s += m;
  }
  return s;
}

double gaussian_moment(int a, double b) {
  return kPi * std::exp(log_factorial(a) - (a + 1) * std::log(b));
}

cplx gaussian_inner(const MonomialPolynomial& p, const MonomialPolynomial& q, double b) {
  cplx s{0.0, 0.0};
  for (const auto& [e, c] : p.terms()) {
    auto it = q.terms().find(e);
    if (it == q.terms().end()) continue;
    double m = 1.0;
    for (int a : e) m *= gaussian_moment(a, b);
    s += std::conj(c) * it->second * m;
  }
  return s;
}

double gaussian_marginal(const MonomialPolynomial& p, const std::vector<cplx>& fixed, double b) {
  const int nf = static_cast<int>(fixed.size());
  if (nf > p.nvars()) throw UsageError("more pinned points than variables");
  // group coefficients by the exponents of the integrated variables
  std::map<std::vector<int>, cplx> groups;
  for (const auto& [e, c] : p.terms()) {
    cplx v = c;
    for (int k = 0; k < nf; ++k)
      for (int q = 0; q < e[k]; ++q) v *= fixed[k];
    groups[std::vector<int>(e.begin() + nf, e.end())] += v;
  }
  double s = 0.0;
  for (const auto& [e, v] : groups) {
    double m = 1.0;
    for (int a : e) m *= gaussian_moment(a, b);
    s += std::norm(v) * m;
  }
  double g = 0.0;
  for (const auto& x : fixed) g += std::norm(x);
  return s * std::exp(-b * g);
}

MonomialPolynomial hole_factor(int N, const std::vector<cplx>& w, int derivative_of) {
  MonomialPolynomial p = MonomialPolynomial::constant(N, 1.0);
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (static_cast<int>(j) == derivative_of) continue;
    for (int k = 0; k < N; ++k) p = p.times_linear(k, w[j]);
  }
  if (derivative_of < 0) return p;
  const cplx wj = w.at(derivative_of);
  MonomialPolynomial d(N);
  for (int l = 0; l < N; ++l) {
    MonomialPolynomial t = MonomialPolynomial::constant(N, 1.0);
    for (int k = 0; k < N; ++k)
      if (k != l) t = t.times_linear(k, wj);
    d = d + t;
  }
  return p * d;
}

}  // namespace qhflux
