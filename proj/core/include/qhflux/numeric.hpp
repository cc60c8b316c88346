#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "qhflux/errors.hpp"

namespace qhflux {

using cplx = std::complex<double>;
using Vec2 = std::array<double, 2>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

inline cplx to_cplx(const Vec2& y) { return {y[0], y[1]}; }
inline Vec2 to_vec2(cplx z) { return {z.real(), z.imag()}; }
inline Vec2 perp(const Vec2& x) { return {-x[1], x[0]}; }

// exp(log_mag + i*phase); log_mag == -inf encodes an exact zero
struct LogComplex {
  double log_mag = -std::numeric_limits<double>::infinity();
  double phase = 0.0;

  LogComplex() = default;
  LogComplex(double lm, double ph);

  static LogComplex zero() { return {}; }
  static LogComplex from_log_real(double lm) { return {lm, 0.0}; }
  static LogComplex from(cplx z);

  bool is_zero() const { return log_mag == -std::numeric_limits<double>::infinity(); }
  cplx to_complex() const;
  double real() const { return to_complex().real(); }

  LogComplex conj() const { return is_zero() ? zero() : LogComplex(log_mag, -phase); }
  LogComplex operator-() const;
  LogComplex& operator*=(const LogComplex& o);
  LogComplex& operator/=(const LogComplex& o);
  friend LogComplex operator*(LogComplex a, const LogComplex& b) { return a *= b; }
  friend LogComplex operator/(LogComplex a, const LogComplex& b) { return a /= b; }
};

double normalize_phase(double phase);

// shift-and-sum; cancellation below rounding of the summed magnitudes gives zero
LogComplex log_sum(std::span<const LogComplex> terms);
inline LogComplex operator+(const LogComplex& a, const LogComplex& b) {
  const LogComplex t[2] = {a, b};
  return log_sum(t);
}

// log(exp(a) + exp(b)) for reals
double log_add(double a, double b);

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t dim);
  static ComplexMatrix identity(std::size_t dim);

  std::size_t dim() const { return dim_; }
  cplx& operator()(std::size_t i, std::size_t j) { return a_[i * dim_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }
  const std::vector<cplx>& entries() const { return a_; }

  ComplexMatrix operator*(const ComplexMatrix& o) const;

 private:
  std::size_t dim_ = 0;
  std::vector<cplx> a_;
};

cplx trace(const ComplexMatrix& m);
// tr(A B) without forming the product
cplx trace_product(const ComplexMatrix& a, const ComplexMatrix& b);

class LuFactorization {
 public:
  std::size_t dim() const { return lu_.dim(); }
  LogComplex determinant() const;
  std::vector<cplx> solve(std::span<const cplx> rhs) const;
  ComplexMatrix inverse() const;
  ComplexMatrix lower() const;
  ComplexMatrix upper() const;
  // row i of P*A is row perm()[i] of A
  const std::vector<std::size_t>& permutation() const { return perm_; }

 private:
  friend LuFactorization lu_factor(const ComplexMatrix& m);
  ComplexMatrix lu_;
  std::vector<std::size_t> perm_;
  int parity_ = 1;
};

inline constexpr double kSingularPivot = 1e-300;

LuFactorization lu_factor(const ComplexMatrix& m);

// log k! from a cumulative table (lgamma beyond it)
double log_factorial(long k);
// sum_{k=1}^{m} log k!
double log_superfactorial(long m);
inline constexpr long kLogFactorialTable = 1100;

// Gauss-Legendre nodes and weights on [-1, 1]
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

enum class GridScheme { cartesian_tensor, polar_centered };

struct QuadratureGrid {
  std::vector<cplx> nodes;
  std::vector<double> weights;
  GridScheme scheme = GridScheme::cartesian_tensor;
  cplx center{0.0, 0.0};
  // polar only: radial nodes and their r*dr weights, angular count
  std::vector<double> ring_radii;
  std::vector<double> ring_weights;
  int angular_count = 0;

  std::size_t size() const { return nodes.size(); }
  double total_weight() const;
};

// square [c - h, c + h]^2, `panels` Gauss-Legendre panels of `order` points per axis
QuadratureGrid cartesian_grid(cplx center, double half_width, int order, int panels = 1);
// square covering the disk of radius radius_scale + 8/sqrt(b)
QuadratureGrid default_cartesian_grid(double b, double radius_scale = 1.0, int order = 24, int panels = 4);

struct PolarGridSpec {
  cplx center{0.0, 0.0};
  double r_max = 1.0;
  double r_min = 1e-8;
  // ring panels grow geometrically from r_min until they reach this width
  double max_panel_width = 0.1;
  double growth = 2.0;
  int order = 8;
  int angular = 64;
};

QuadratureGrid polar_grid(const PolarGridSpec& spec);

cplx integrate2d(const QuadratureGrid& grid, const std::function<cplx(cplx)>& f);
double integrate2d_real(const QuadratureGrid& grid, const std::function<double(cplx)>& f);

// central second-order differences, one coordinate at a time
template <class F>
auto finite_diff_gradient(F&& f, std::vector<double> x, double h) {
  using R = decltype(f(x));
  std::vector<R> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    x[i] = xi + h;
    const R fp = f(x);
    x[i] = xi - h;
    const R fm = f(x);
    x[i] = xi;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

}  // namespace qhflux
