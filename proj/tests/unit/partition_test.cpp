#include <algorithm>
#include <cmath>
#include <random>

#include <doctest.h>

#include "qhflux/harness.hpp"
#include "qhflux/kernel.hpp"
#include "qhflux/partition.hpp"

using namespace qhflux;

namespace {

HoleConfig random_config(std::mt19937_64& rng, long N, std::size_t n, double r = 0.8) {
  HoleConfig c{std::vector<cplx>(n), N, static_cast<double>(N)};
  for (auto& w : c.w) w = sample_disk(rng, r);
  return c;
}

double relerr(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("Upsilon examples") {
  for (long N : {1L, 5L, 64L}) CHECK(upsilon(HoleConfig::bath(N, {0.0})) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(upsilon(HoleConfig::bath(16, {0.1, 0.1})) == 0.0);
  CHECK(upsilon(HoleConfig::bath(16, {0.1, {0.2, 0.3}, 0.1})) == 0.0);
}

TEST_CASE("Upsilon stays in [0, 1]") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 200; ++t) {
    const auto c = random_config(rng, 32, 1 + t % 4, 1.2);
    const double u = upsilon(c);
    CHECK(u >= 0.0);
    CHECK(u <= 1.0 + 1e-13);
  }
}

TEST_CASE("Upsilon is invariant under relabeling and rotation") {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 40; ++t) {
    auto c = random_config(rng, 64, 3 + t % 2, 0.5);
    const double u = upsilon(c);
    std::shuffle(c.w.begin(), c.w.end(), rng);
    CHECK(relerr(upsilon(c), u) < 1e-13);
    const cplx rot = std::polar(1.0, 0.1 + t);
    for (auto& w : c.w) w *= rot;
    CHECK(relerr(upsilon(c), u) < 1e-12);
  }
}

TEST_CASE("Upsilon(w, z) vanishes as z approaches a hole") {
  const HoleConfig c = HoleConfig::bath(16, {{0.2, 0.1}, {-0.3, 0.2}});
  double prev = 1.0;
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
    HoleConfig d = c;
    d.w.push_back(c.w[0] + eps);
    const double u = upsilon(d);
    CHECK(u < prev);
    CHECK(u <= 40.0 * c.b * eps * eps);
    prev = u;
  }
}

TEST_CASE("Upsilon derivative matches finite differences") {
  std::mt19937_64 rng(23);
  const HoleConfig c = random_config(rng, 16, 2, 0.6);
  CHECK(upsilon_derivative(c, {0, 0}, {0, 0}).real() == doctest::Approx(upsilon(c)).epsilon(1e-14));
  const double h = 1e-6;
  const auto shifted = [&](cplx d) {
    HoleConfig e = c;
    e.w[0] += d;
    return upsilon(e);
  };
  const double fx = (shifted(h) - shifted(-h)) / (2 * h), fy = (shifted({0, h}) - shifted({0, -h})) / (2 * h);
  const cplx dz = 0.5 * cplx(fx, -fy);
  const cplx exact = upsilon_derivative(c, {1, 0}, {0, 0});
  CHECK(std::abs(exact - dz) <= 1e-6 * std::abs(exact));
  const auto ld = upsilon_log_derivatives(c, 0);
  CHECK(std::abs(ld.d - exact / upsilon(c)) <= 1e-12 * std::abs(ld.d));
  CHECK_THROWS_AS(upsilon_derivative(HoleConfig::bath(8, {0.1, 0.1}), {1, 0}, {0, 0}), SingularConfigurationError);
}

TEST_CASE("partition function closed forms") {
  CHECK(std::exp(log_partition({{1.0}, 1, 1.0}).log_value) == doctest::Approx(2.0 * kPi).epsilon(1e-13));
  CHECK(std::exp(log_partition({{0.5}, 1, 2.0}).log_value) == doctest::Approx(3.0 * kPi / 8.0).epsilon(1e-13));
  CHECK(std::exp(log_partition({{}, 2, 2.0}).log_value) == doctest::Approx(kPi * kPi / 4.0).epsilon(1e-13));
  CHECK_THROWS_AS(log_partition(HoleConfig::bath(4, {0.2, 0.2})), SingularConfigurationError);
}

TEST_CASE("partition value is the sum of its components") {
  std::mt19937_64 rng(24);
  for (int t = 0; t < 20; ++t) {
    const auto c = random_config(rng, 10 + t, 1 + t % 3);
    const auto pv = log_partition(c);
    const auto& k = pv.components;
    CHECK(std::abs(pv.log_value - (k.log_gamma + k.gaussian + k.vandermonde + k.log_upsilon)) < 1e-12);
  }
}

TEST_CASE("normalization ratios at b = N") {
  for (long N : {4L, 10L, 50L}) {
    const double b = static_cast<double>(N);
    for (long n : {0L, 1L, 2L}) {
      const double r1 = log_gamma_normalization(N - 1, n + 1, b) - log_gamma_normalization(N, n, b);
      CHECK(r1 == doctest::Approx(-std::log(kPi)).epsilon(1e-12));
      const double r2 = log_gamma_normalization(N - 2, n + 2, b) - log_gamma_normalization(N, n, b);
      CHECK(r2 == doctest::Approx(std::log(b / ((b - 1.0) * kPi * kPi))).epsilon(1e-12));
    }
  }
}

TEST_CASE("Schur complement density") {
  std::mt19937_64 rng(25);
  const HoleConfig c = random_config(rng, 8, 2, 0.6);
  const KernelSpec s = kernel_spec(c);
  CHECK(theta(c, c.w[0]) == doctest::Approx(kernel_diagonal(s, c.w[0])).epsilon(1e-12));
  for (int t = 0; t < 20; ++t) {
    const cplx z = sample_disk(rng, 1.0), zeta = sample_disk(rng, 1.0);
    const double th = theta(c, z);
    CHECK(th >= -1e-12);
    CHECK(th <= kernel_diagonal(s, z) * (1.0 + 1e-12));
    // same M = N + n orbitals with z appended as an extra hole
    HoleConfig d{c.w, c.N - 1, c.b};
    d.w.push_back(z);
    const double lhs = upsilon(d), rhs = kPi / c.b * upsilon(c) * (kernel_diagonal(s, z) - th);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(lhs, 1e-12));
    const cplx tp = theta_polarized(c, zeta, z);
    CHECK(std::norm(tp) <= th * theta(c, zeta) * (1.0 + 1e-10) + 1e-20);
  }
  const auto g = cartesian_grid(0.0, 1.0 + 9.0 / std::sqrt(c.b), 24, 4);
  CHECK(std::abs(integrate2d_real(g, [&](cplx z) { return theta(c, z); }) / 2.0 - 1.0) < 1e-6);
}

TEST_CASE("Upsilon predictions") {
  const HoleConfig c = HoleConfig::bath(256, {0.0, 0.05});
  CHECK(upsilon_prediction(c, {RegimeKind::no_merging}) == 1.0);
  CHECK(upsilon_prediction(c, {RegimeKind::single_merging, 0, 1}) ==
        doctest::Approx(1.0 - std::exp(-256.0 * 0.0025)).epsilon(1e-15));
  CHECK(upsilon_prediction(HoleConfig::bath(256, {0.0, 10.0}), {RegimeKind::single_merging, 0, 1}) == 1.0);
  CHECK_THROWS_AS(upsilon_prediction(c, {RegimeKind::remainder}), UsageError);
}

TEST_CASE("regime classification") {
  const RegimeClassifier cl{2.0, 1.0};
  CHECK(cl.delta(256) == doctest::Approx(2.0 * std::sqrt(std::log(256.0) / 256.0)));
  CHECK(cl.classify(HoleConfig::bath(256, {0.3, -0.3})).kind == RegimeKind::no_merging);
  CHECK(cl.classify(HoleConfig::bath(256, {0.3, 0.35})).name() == "single-merging(1,2)");
  CHECK(cl.classify(HoleConfig::bath(256, {0.3, 0.95})).kind == RegimeKind::outside_droplet);
  CHECK(cl.classify(HoleConfig::bath(256, {0.3, 0.3 + 1e-4})).kind == RegimeKind::remainder);
  CHECK(cl.classify(HoleConfig::bath(512, {0.0, 0.05, 0.1})).kind == RegimeKind::remainder);
  CHECK(parse_regime("single-merging(2,3)") == Regime{RegimeKind::single_merging, 1, 2});
  CHECK_THROWS_AS(parse_regime("merged"), UsageError);
}

TEST_CASE("classification is label invariant") {
  const RegimeClassifier cl{2.0, 1.0};
  std::mt19937_64 rng(26);
  for (int t = 0; t < 200; ++t) {
    auto c = random_config(rng, 256, 3, 0.7);
    const Regime r = cl.classify(c);
    std::vector<std::size_t> perm{0, 1, 2};
    std::shuffle(perm.begin(), perm.end(), rng);
    HoleConfig d = c;
    for (std::size_t k = 0; k < 3; ++k) d.w[k] = c.w[perm[k]];
    const Regime s = cl.classify(d);
    CHECK(s.kind == r.kind);
    if (r.kind == RegimeKind::single_merging) {
      const std::size_t a = perm[s.i], b = perm[s.j];
      CHECK(std::min(a, b) == std::min(r.i, r.j));
      CHECK(std::max(a, b) == std::max(r.i, r.j));
    }
  }
}
