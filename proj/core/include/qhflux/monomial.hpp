#pragma once

#include <map>
#include <vector>

#include "qhflux/numeric.hpp"

namespace qhflux {

// sparse polynomial in z_1..z_nvars with complex coefficients
class MonomialPolynomial {
 public:
  using Exponents = std::vector<int>;

  MonomialPolynomial() = default;
  explicit MonomialPolynomial(int nvars) : nvars_(nvars) {}
  static MonomialPolynomial constant(int nvars, cplx c);
  // sum over permutations s of sgn(s) prod_j z_j^{degrees[s(j)]}
  static MonomialPolynomial leibniz(const std::vector<int>& degrees);
  // prod_{k<l} (z_k - z_l)
  static MonomialPolynomial vandermonde(int nvars);

  int nvars() const { return nvars_; }
  const std::map<Exponents, cplx>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  void add(const Exponents& e, cplx c);
  MonomialPolynomial times_linear(int k, cplx a) const;  // * (a - z_k)
  MonomialPolynomial operator*(const MonomialPolynomial& o) const;
  MonomialPolynomial operator+(const MonomialPolynomial& o) const;
  MonomialPolynomial scaled(cplx c) const;

  cplx evaluate(const std::vector<cplx>& z) const;

 private:
  int nvars_ = 0;
  std::map<Exponents, cplx> terms_;
};

// integral of z^a zbar^a e^{-b|z|^2} over C
double gaussian_moment(int a, double b);

// <p, q> = int conj(p) q e^{-b sum |z|^2} dz
cplx gaussian_inner(const MonomialPolynomial& p, const MonomialPolynomial& q, double b);

// int |p|^2 e^{-b sum|z|^2} over the last nvars - fixed.size() variables, with the
// leading variables pinned at `fixed`; includes e^{-b sum |fixed|^2}
double gaussian_marginal(const MonomialPolynomial& p, const std::vector<cplx>& fixed, double b);

// prod_{j,k} (w_j - z_k); with `derivative_of` set, its d/dw_j
MonomialPolynomial hole_factor(int N, const std::vector<cplx>& w, int derivative_of = -1);

}  // namespace qhflux
