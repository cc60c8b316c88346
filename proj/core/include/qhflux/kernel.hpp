#pragma once

#include <array>

#include "qhflux/numeric.hpp"

namespace qhflux {

struct KernelSpec {
  double b = 1.0;
  long M = 1;  // number of orbitals: K_M sums j = 0..M-1
};

void validate(const KernelSpec& spec);

// orders in (zbar, z, wbar, w)
struct DerivOrder {
  std::array<int, 4> a{0, 0, 0, 0};
  int total() const { return a[0] + a[1] + a[2] + a[3]; }
};
inline constexpr int kMaxDerivOrder = 4;

enum class KernelKind { truncated, infinite };

LogComplex kernel_eval(const KernelSpec& spec, cplx z, cplx w);
LogComplex kernel_infty(const KernelSpec& spec, cplx z, cplx w);
// K_inf - K_M summed directly over j >= M
LogComplex kernel_tail(const KernelSpec& spec, cplx z, cplx w);

cplx kernel_derivative(const KernelSpec& spec, cplx z, cplx w, const DerivOrder& order, KernelKind which);
cplx kernel_tail_derivative(const KernelSpec& spec, cplx z, cplx w, const DerivOrder& order);

// derivatives of z -> K(z, z): `holo` powers of d/dz, `anti` powers of d/dzbar, holo + anti <= 2
double kernel_diagonal(const KernelSpec& spec, cplx z);
cplx kernel_diagonal_derivative(const KernelSpec& spec, cplx z, int holo, int anti, KernelKind which);

// one-body orbital phi_k(z) = sqrt(b^{k+1}/(pi k!)) z^k exp(-b|z|^2/2)
cplx orbital(double b, long k, cplx z);
// phi_0..phi_{count-1} at z
void orbitals(double b, long count, cplx z, std::vector<cplx>& out);

double log_kernel_tail_bound(double N, cplx z, cplx w);
double kernel_tail_bound(double N, cplx z, cplx w);

double reproducing_residual(const KernelSpec& spec, cplx z, cplx w, const QuadratureGrid& grid);
double kernel_trace(const KernelSpec& spec, const QuadratureGrid& grid);
double kernel_hilbert_schmidt(const KernelSpec& spec, const QuadratureGrid& grid);

}  // namespace qhflux
