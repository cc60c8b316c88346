#include <cmath>
#include <random>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <doctest.h>

#include "qhflux/kernel.hpp"

using namespace qhflux;
namespace mp = boost::multiprecision;

namespace {

cplx sample_disk(std::mt19937_64& rng, double r) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double rad = r * std::sqrt(u(rng)), th = 2.0 * kPi * u(rng);
  return std::polar(rad, th);
}

// 50-digit reference: (b/pi) e^{-b(|z|^2+|w|^2)/2} sum_{j<M} (b z wbar)^j / j!
cplx kernel_reference(double b, long M, cplx z, cplx w) {
  using C = mp::cpp_complex_50;
  using R = mp::cpp_bin_float_50;
  const C x = C(R(b)) * C(R(z.real()), R(z.imag())) * C(R(w.real()), R(-w.imag()));
  C term(1), sum(0);
  for (long j = 0; j < M; ++j) {
    sum += term;
    term *= x / C(R(j + 1));
  }
  const R pre = R(b) / boost::math::constants::pi<R>() *
                mp::exp(-R(b) * (R(std::norm(z)) + R(std::norm(w))) / 2);
  const C k = sum * C(pre);
  return {static_cast<double>(k.real()), static_cast<double>(k.imag())};
}

cplx eval(const KernelSpec& s, cplx z, cplx w) { return kernel_eval(s, z, w).to_complex(); }

// Wirtinger derivative in one argument by central differences
template <class F>
cplx wirtinger(F&& f, cplx at, bool conj_dir, double h) {
  const cplx fx = (f(at + h) - f(at - h)) / (2.0 * h);
  const cplx fy = (f(at + cplx(0, h)) - f(at - cplx(0, h))) / (2.0 * h);
  const cplx i(0.0, 1.0);
  return conj_dir ? 0.5 * (fx + i * fy) : 0.5 * (fx - i * fy);
}

}  // namespace

TEST_CASE("kernel agrees with a 50-digit reference") {
  std::mt19937_64 rng(3);
  for (long N : {1L, 8L, 64L, 256L, 512L})
    for (double bscale : {1.0, 0.5}) {
      const double b = bscale * static_cast<double>(N);
      const KernelSpec s{b, N + 2};
      for (int t = 0; t < 40; ++t) {
        const cplx z = sample_disk(rng, 1.3), w = sample_disk(rng, 1.3);
        const cplx ref = kernel_reference(b, s.M, z, w);
        // cancellation in the sum limits accuracy to eps times its largest term
        const double scale = b / kPi * std::exp(-0.5 * b * std::pow(std::abs(z) - std::abs(w), 2));
        CHECK(std::abs(eval(s, z, w) - ref) <= 1e-12 * (std::abs(ref) + scale));
      }
      const cplx z = sample_disk(rng, 0.9);
      CHECK(std::abs(eval(s, z, z) - kernel_reference(b, s.M, z, z)) <= 1e-12 * std::abs(kernel_reference(b, s.M, z, z)));
    }
}

TEST_CASE("kernel examples") {
  const KernelSpec s{1.0, 1};
  CHECK(eval(s, 0.0, 0.0).real() == doctest::Approx(1.0 / kPi).epsilon(1e-15));
  CHECK(kernel_diagonal({4.0, 4}, 0.0) == doctest::Approx(4.0 / kPi).epsilon(1e-15));
  CHECK(std::abs(orbital(2.0, 0, 0.0) - std::sqrt(2.0 / kPi)) < 1e-15);
  CHECK_THROWS_AS(validate(KernelSpec{0.0, 3}), UsageError);
  CHECK_THROWS_AS(validate(KernelSpec{1.0, 0}), UsageError);
}

TEST_CASE("kernel diagonal lies in (0, b/pi]") {
  std::mt19937_64 rng(4);
  for (long M : {1L, 16L, 128L}) {
    const KernelSpec s{static_cast<double>(M), M};
    for (int t = 0; t < 200; ++t) {
      const double d = kernel_diagonal(s, sample_disk(rng, 1.2));
      CHECK(d > 0.0);
      CHECK(d <= s.b / kPi * (1.0 + 1e-14));
    }
  }
}

TEST_CASE("diagonal density follows the circular law") {
  const KernelSpec s{256.0, 256};
  double worst = 0.0;
  for (int i = 0; i <= 40; ++i)
    for (int k = 0; k < 16; ++k) {
      const cplx z = std::polar(0.8 * i / 40.0, 2.0 * kPi * k / 16.0);
      worst = std::max(worst, std::abs(kPi * kernel_diagonal(s, z) / 256.0 - 1.0));
    }
  CHECK(worst < 1e-3);
}

TEST_CASE("infinite kernel modulus is the Gaussian envelope") {
  std::mt19937_64 rng(6);
  for (double b : {1.0, 64.0, 512.0}) {
    const KernelSpec s{b, 10};
    for (int t = 0; t < 100; ++t) {
      const cplx z = sample_disk(rng, 1.0), w = sample_disk(rng, 1.0);
      const LogComplex k = kernel_infty(s, z, w);
      const double expect = std::log(b / kPi) - 0.5 * b * std::norm(z - w);
      CHECK(std::abs(k.log_mag - expect) <= 1e-14 * std::max(1.0, std::abs(expect)));
    }
  }
}

TEST_CASE("tail is the difference of the two kernels and obeys the bound") {
  std::mt19937_64 rng(9);
  for (long N : {16L, 64L, 256L}) {
    const KernelSpec s{static_cast<double>(N), N + 2};
    for (int t = 0; t < 200; ++t) {
      const cplx z = sample_disk(rng, 0.95), w = sample_disk(rng, 0.95);
      const cplx tail = kernel_tail(s, z, w).to_complex();
      const cplx diff = kernel_infty(s, z, w).to_complex() - eval(s, z, w);
      CHECK(std::abs(tail - diff) <= 1e-12 * s.b);
      CHECK(std::abs(tail) <= kernel_tail_bound(static_cast<double>(N), z, w));
    }
  }
  CHECK_THROWS_AS(kernel_tail_bound(64.0, 1.0, 1.0), DomainError);
}

TEST_CASE("kernel derivatives agree with finite differences") {
  std::mt19937_64 rng(12);
  for (long N : {8L, 32L, 64L}) {
    const KernelSpec s{static_cast<double>(N), N + 2};
    const double h = 1e-4 / std::sqrt(s.b);
    for (int t = 0; t < 10; ++t) {
      const cplx z = sample_disk(rng, 0.9), w = z + sample_disk(rng, 0.5 / std::sqrt(s.b));
      const double scale = s.b / kPi * std::sqrt(s.b);
      for (auto which : {KernelKind::truncated, KernelKind::infinite}) {
        const auto f = [&](cplx a, cplx c) {
          return which == KernelKind::truncated ? eval(s, a, c) : kernel_infty(s, a, c).to_complex();
        };
        const cplx d_zb = kernel_derivative(s, z, w, {{1, 0, 0, 0}}, which);
        const cplx d_z = kernel_derivative(s, z, w, {{0, 1, 0, 0}}, which);
        const cplx d_wb = kernel_derivative(s, z, w, {{0, 0, 1, 0}}, which);
        const cplx d_w = kernel_derivative(s, z, w, {{0, 0, 0, 1}}, which);
        CHECK(std::abs(d_zb - wirtinger([&](cplx a) { return f(a, w); }, z, true, h)) <= 1e-5 * scale);
        CHECK(std::abs(d_z - wirtinger([&](cplx a) { return f(a, w); }, z, false, h)) <= 1e-5 * scale);
        CHECK(std::abs(d_wb - wirtinger([&](cplx c) { return f(z, c); }, w, true, h)) <= 1e-5 * scale);
        CHECK(std::abs(d_w - wirtinger([&](cplx c) { return f(z, c); }, w, false, h)) <= 1e-5 * scale);
      }
    }
  }
}

TEST_CASE("second derivatives agree with nested finite differences") {
  std::mt19937_64 rng(13);
  const KernelSpec s{16.0, 18};
  const double h = 1e-4 / std::sqrt(s.b);
  for (int t = 0; t < 10; ++t) {
    const cplx z = sample_disk(rng, 0.9), w = z + sample_disk(rng, 0.25);
    const double scale = s.b / kPi * s.b;
    const cplx exact = kernel_derivative(s, z, w, {{0, 1, 1, 0}}, KernelKind::truncated);
    const cplx fd = wirtinger(
        [&](cplx a) { return wirtinger([&](cplx c) { return eval(s, a, c); }, w, true, h); }, z, false, h);
    CHECK(std::abs(exact - fd) <= 1e-5 * scale);
    const cplx dd = kernel_diagonal_derivative(s, z, 1, 1, KernelKind::truncated);
    const cplx fd2 = wirtinger([&](cplx a) { return wirtinger([&](cplx c) { return cplx(kernel_diagonal(s, c)); }, a, true, h); },
                               z, false, h);
    CHECK(std::abs(dd - fd2) <= 1e-5 * scale);
  }
}

TEST_CASE("tail derivative is the derivative difference") {
  const KernelSpec s{64.0, 66};
  const cplx z{0.3, -0.2}, w{0.35, -0.1};
  for (DerivOrder o : {DerivOrder{{1, 0, 0, 0}}, DerivOrder{{0, 1, 1, 0}}, DerivOrder{{0, 2, 0, 0}}}) {
    const cplx diff = kernel_derivative(s, z, w, o, KernelKind::infinite) - kernel_derivative(s, z, w, o, KernelKind::truncated);
    const cplx tail = kernel_tail_derivative(s, z, w, o);
    CHECK(std::abs(tail - diff) <= 1e-10 * std::pow(s.b, 1.0 + o.total() / 2.0));
  }
}

TEST_CASE("orbitals match the single evaluator") {
  std::vector<cplx> phi;
  orbitals(3.0, 6, {0.4, 0.2}, phi);
  REQUIRE(phi.size() == 6);
  for (long k = 0; k < 6; ++k) CHECK(std::abs(phi[k] - orbital(3.0, k, {0.4, 0.2})) < 1e-14);
}

TEST_CASE("reproducing, trace and Hilbert-Schmidt identities") {
  const KernelSpec s{4.0, 4};
  const auto g = cartesian_grid(0.0, 1.0 + 9.0 / 2.0, 24, 4);
  CHECK(reproducing_residual(s, 0.0, 0.0, g) < 1e-8);
  CHECK(reproducing_residual(s, {0.3, 0.1}, {-0.2, 0.4}, g) < 1e-8);
  CHECK(std::abs(kernel_trace(s, g) / 4.0 - 1.0) < 1e-8);
  CHECK(std::abs(kernel_hilbert_schmidt(s, g) / 4.0 - 1.0) < 1e-6);
}
