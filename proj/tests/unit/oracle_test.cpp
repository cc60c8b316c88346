#include <cmath>
#include <random>

#include <doctest.h>

#include "qhflux/harness.hpp"
#include "qhflux/oracle.hpp"
#include "qhflux/partition.hpp"

using namespace qhflux;

TEST_CASE("exact partition function closed forms") {
  CHECK(std::exp(partition_exact({{1.0}, 1, 1.0})) == doctest::Approx(2.0 * kPi).epsilon(1e-13));
  CHECK(std::exp(partition_exact({{0.5}, 1, 2.0})) == doctest::Approx(3.0 * kPi / 8.0).epsilon(1e-13));
  CHECK(std::exp(partition_exact({{}, 2, 2.0})) == doctest::Approx(kPi * kPi / 4.0).epsilon(1e-13));
  CHECK_THROWS_AS(partition_exact(HoleConfig::bath(5, {0.1})), ResourceError);
  CHECK_THROWS_AS(partition_exact(HoleConfig::bath(2, {0.1, 0.2, 0.3})), ResourceError);
}

TEST_CASE("exact partition function matches the determinant formula") {
  std::mt19937_64 rng(41);
  for (long N = 1; N <= 3; ++N)
    for (std::size_t n = 1; n <= 2; ++n)
      for (double b : {1.0, static_cast<double>(N), 2.5}) {
        HoleConfig c{std::vector<cplx>(n), N, b};
        for (auto& w : c.w) w = sample_disk(rng, 1.2);
        CHECK(std::abs(std::expm1(log_partition(c).log_value - partition_exact(c))) <= 1e-10);
      }
}

TEST_CASE("exact partition function is symmetric and rotation invariant") {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 10; ++t) {
    HoleConfig c{{sample_disk(rng, 1.0), sample_disk(rng, 1.0)}, 1 + t % 3, 1.5};
    const double v = partition_exact(c);
    std::swap(c.w[0], c.w[1]);
    CHECK(std::abs(std::expm1(partition_exact(c) - v)) < 1e-12);
    for (auto& w : c.w) w *= std::polar(1.0, 0.7 * t + 0.2);
    CHECK(std::abs(std::expm1(partition_exact(c) - v)) < 1e-12);
  }
}

TEST_CASE("test functions") {
  const TestFunction g = gaussian_test_function({0.3, 0.0}, 0.5, {1.0, -2.0});
  const auto grid = cartesian_grid({0.3, 0.0}, 6.0, 24, 4);
  CHECK(integrate2d_real(grid, [&](cplx y) { return std::norm(g.value(y)); }) == doctest::Approx(1.0).epsilon(1e-12));
  const cplx y{0.1, 0.2};
  const double h = 1e-6;
  const auto grad = g.gradient(y);
  CHECK(std::abs(grad[0] - (g.value(y + h) - g.value(y - h)) / (2 * h)) < 1e-6);
  CHECK(std::abs(grad[1] - (g.value(y + cplx(0, h)) - g.value(y - cplx(0, h))) / (2 * h)) < 1e-6);
  TestFunction zero = g;
  zero.amplitude = 0.0;
  CHECK(zero.is_zero());
}

TEST_CASE("Slater density equals the brute-force marginal") {
  std::mt19937_64 rng(43);
  const std::vector<long> ks{0, 1, 2};
  for (int t = 0; t < 10; ++t) {
    const std::vector<cplx> x{sample_disk(rng, 1.0), sample_disk(rng, 1.0)};
    const double a = slater_density(3.0, ks, x), b = slater_density_bruteforce(3.0, ks, x);
    CHECK(std::abs(a - b) <= 1e-10 * b);
  }
}

TEST_CASE("Slater density is symmetric and vanishes on diagonals") {
  std::mt19937_64 rng(44);
  const std::vector<long> ks{0, 1, 3, 4};
  for (int t = 0; t < 10; ++t) {
    const cplx a = sample_disk(rng, 1.0), b = sample_disk(rng, 1.0), c = sample_disk(rng, 1.0);
    const double d = slater_density(2.0, ks, {a, b, c});
    CHECK(std::abs(slater_density(2.0, ks, {c, a, b}) - d) <= 1e-12 * d);
    CHECK(std::abs(slater_density(2.0, ks, {b, a, c}) - d) <= 1e-12 * d);
    CHECK(slater_density(2.0, ks, {a, a, c}) == 0.0);
    CHECK(slater_density(2.0, ks, {a, b, b}) == 0.0);
  }
  // one point: the sum of orbital densities
  const cplx z{0.2, 0.3};
  double s = 0.0;
  for (long k : ks) s += std::norm(orbital(2.0, k, z));
  CHECK(slater_density(2.0, ks, {z}) == doctest::Approx(s).epsilon(1e-13));
  CHECK_THROWS_AS(slater_density(2.0, {0}, {0.1, 0.2}), UsageError);
}

TEST_CASE("delta operator identities") {
  for (long k : {0L, 1L, 3L}) {
    const TestFunction u = gaussian_test_function({0.2, 0.1}, 0.4, {0.5, 0.0});
    const auto r = delta_check(4.0, k, u, default_delta_grid(4.0, k, u));
    CHECK(r.quadratic_residual < 1e-8);
    CHECK(r.projector_residual < 1e-10);
    CHECK(r.quadratic_form > 0.0);
  }
}

TEST_CASE("energy identity") {
  const TestFunction phi = gaussian_test_function({0.3, 0.0}, 0.35, {1.0, -0.5});
  for (auto [N, q] : {std::pair<long, double>{1, 1.0}, {2, 1.0}, {2, 2.0}}) {
    const HoleConfig c = HoleConfig::bath(N, {0.0});
    const auto r = energy_identity_check(c, q, phi);
    CHECK(r.residual < 1e-5);
    CHECK(r.lhs > 0.0);
  }
  TestFunction zero = phi;
  zero.amplitude = 0.0;
  const auto z = energy_identity_check(HoleConfig::bath(1, {0.0}), 1.0, zero);
  CHECK(z.lhs == 0.0);
  CHECK(z.rhs == 0.0);
  CHECK(z.residual == 0.0);
  CHECK_THROWS_AS(energy_identity_check(HoleConfig::bath(2, {0.0, 0.5}), 1.0, phi), UsageError);
}
