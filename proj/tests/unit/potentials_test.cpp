#include <cmath>
#include <random>

#include <doctest.h>

#include "qhflux/harness.hpp"
#include "qhflux/partition.hpp"
#include "qhflux/potentials.hpp"

using namespace qhflux;

namespace {

double vdist(const Vec2& a, const Vec2& b) { return std::hypot(a[0] - b[0], a[1] - b[1]); }

// circulation of the AB sum as tracer j travels around a circle
double ab_circulation(std::vector<cplx> y, std::size_t j, cplx center, double r) {
  const int K = 4096;
  double s = 0.0;
  for (int k = 0; k < K; ++k) {
    const double t = 2.0 * kPi * k / K;
    y[j] = center + std::polar(r, t);
    const Vec2 f = ab_sum(y, j);
    s += (f[0] * -std::sin(t) + f[1] * std::cos(t)) * r;
  }
  return s * 2.0 * kPi / K;
}

}  // namespace

TEST_CASE("AB sum carries a point flux per enclosed tracer") {
  const std::vector<cplx> y{0.0, {0.1, 0.05}, {-0.2, 0.1}, {0.9, 0.9}};
  CHECK(std::abs(ab_circulation(y, 0, 0.0, 0.5) - 2.0 * kPi * 2) < 1e-8);
  CHECK(std::abs(ab_circulation(y, 0, {0.1, 0.05}, 0.05) - 2.0 * kPi) < 1e-8);
  CHECK(std::abs(ab_circulation(y, 0, 0.0, 2.0) - 2.0 * kPi * 3) < 1e-8);
  CHECK(std::abs(ab_circulation(y, 0, {-1.0, -1.0}, 0.3)) < 1e-8);
}

TEST_CASE("single hole at the origin") {
  for (long N : {4L, 64L, 256L}) {
    const HoleConfig c = HoleConfig::bath(N, {0.0});
    const auto f = emergent_field_derivative(c, 0);
    CHECK(std::hypot(f.A[0], f.A[1]) < 1e-12 * N);
    CHECK(std::abs(f.V - 2.0 * N) < 1e-10 * N);
  }
  const auto g = emergent_field_integral(HoleConfig::bath(16, {0.0}), 0);
  CHECK(std::hypot(g.A[0], g.A[1]) < 1e-10);
}

TEST_CASE("no-merging prediction arithmetic") {
  const HoleConfig c = HoleConfig::bath(100, {0.3, -0.3});
  const auto p = asymptotic_prediction(c, 0, {RegimeKind::no_merging});
  CHECK(std::abs(p.A[0]) < 1e-14);
  CHECK(p.A[1] == doctest::Approx(30.0 - 0.6 / 0.36).epsilon(1e-14));
  CHECK(p.V == 200.0);
}

TEST_CASE("single-merging predictions") {
  const long N = 256;
  const HoleConfig c = HoleConfig::bath(N, {0.0, 1.0 / 16.0, {0.5, 0.3}});
  const Regime r{RegimeKind::single_merging, 0, 1};
  // the spectator sees no correction
  CHECK(asymptotic_prediction(c, 2, r).V == 2.0 * N);
  const double v1 = 2.0 / std::pow(std::exp(1.0) - 1.0, 2);
  CHECK(correction_v({1.0, 0.0}) == doctest::Approx(v1).epsilon(1e-14));
  CHECK(asymptotic_prediction(c, 0, r).V == doctest::Approx(N * (2.0 - v1)).epsilon(1e-14));
  CHECK(refined_fields(c, 0).V == doctest::Approx(N * (2.0 - v1)).epsilon(1e-12));
  // wide pair: the single-merging prediction is the no-merging one
  const HoleConfig far = HoleConfig::bath(N, {0.0, 0.5});
  const auto a = asymptotic_prediction(far, 0, {RegimeKind::single_merging, 0, 1});
  const auto b = asymptotic_prediction(far, 0, {RegimeKind::no_merging});
  CHECK(vdist(a.A, b.A) < 1e-20);
  CHECK(std::abs(a.V - b.V) < 1e-20);
}

TEST_CASE("correction fields") {
  CHECK(correction_v({0.0, 0.0}) == 1.0);
  const Vec2 a3 = correction_a({3.0, 0.0});
  CHECK(std::abs(a3[0]) < 1e-20);
  CHECK(a3[1] == doctest::Approx(3.0 / std::expm1(9.0)).epsilon(1e-14));
  CHECK(a3[1] == doctest::Approx(3.7024e-4).epsilon(1e-4));
  CHECK_THROWS_AS(correction_a({0.0, 0.0}), DomainError);
  // series branch joins the closed form smoothly
  for (double r : {0.05, 0.1, 0.2, 0.4}) {
    const double u = r * r, e = std::expm1(u);
    const double closed = 2.0 * (1.0 - (1.0 - u) * std::exp(u)) / (e * e);
    CHECK(correction_v({r, 0.0}) == doctest::Approx(closed).epsilon(1e-9));
  }
  for (double r = 0.01; r < 20.0; r *= 1.3) {
    const double v = correction_v({r, 0.0});
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
    const Vec2 a = correction_a({0.0, r});
    const Vec2 ab{-r / (r * r), 0.0};
    CHECK(vdist(a, ab) <= 0.5 + 1e-12);
  }
}

TEST_CASE("refined fields") {
  const HoleConfig one = HoleConfig::bath(64, {{0.2, 0.1}});
  const auto r1 = refined_fields(one, 0);
  CHECK(r1.V == 128.0);
  CHECK(r1.A[0] == doctest::Approx(-64 * 0.1));
  CHECK(r1.A[1] == doctest::Approx(64 * 0.2));
  const HoleConfig wide = HoleConfig::bath(256, {0.0, 0.5});
  const auto r2 = refined_fields(wide, 0);
  const auto p2 = asymptotic_prediction(wide, 0, {RegimeKind::no_merging});
  CHECK(std::abs(r2.V - p2.V) < 1e-20 * 256);
  CHECK(vdist(r2.A, p2.A) < 1e-12);
  std::mt19937_64 rng(31);
  for (int t = 0; t < 50; ++t) {
    HoleConfig c = HoleConfig::bath(128, {sample_disk(rng, 0.5), sample_disk(rng, 0.5), sample_disk(rng, 0.5)});
    const auto r = refined_fields(c, 0);
    CHECK(r.V >= 0.0);
    CHECK(r.V <= 256.0);
    const Vec2 base{-128 * c.w[0].imag(), 128 * c.w[0].real()};
    CHECK(vdist(r.A, base) <= 3 * std::sqrt(128.0) / 2.0 + 1e-9);
  }
}

TEST_CASE("derivative route versus asymptotics away from merging") {
  const HoleConfig c = HoleConfig::bath(256, {{0.3, 0.1}, {-0.3, -0.2}});
  const auto f = emergent_field_derivative(c, 0);
  const auto p = asymptotic_prediction(c, 0, {RegimeKind::no_merging});
  CHECK(vdist(f.A, p.A) / 256 < 1e-5);
  CHECK(std::abs(f.V - p.V) / 256 < 1e-5);
}

TEST_CASE("derivative and integral routes agree") {
  std::mt19937_64 rng(32);
  const RegimeClassifier cl{1.0, 1.0};
  for (int t = 0; t < 2; ++t) {
    const HoleConfig c = sample_config(rng, 16, 2, RegimeKind::no_merging, cl);
    for (std::size_t j = 0; j < 2; ++j) {
      const auto d = emergent_field_derivative(c, j);
      const auto g = emergent_field_integral(c, j);
      CHECK(vdist(d.A, g.A) <= 1e-6 * c.N);
      CHECK(std::abs(d.V - g.V) <= 1e-4 * c.N);
    }
  }
  // a merging pair, where log Upsilon carries the whole correction
  const HoleConfig m = HoleConfig::bath(16, {0.0, 0.2});
  const auto d = emergent_field_derivative(m, 0);
  const auto g = emergent_field_integral(m, 0);
  CHECK(vdist(d.A, g.A) <= 1e-6 * m.N);
  CHECK(std::abs(d.V - g.V) <= 1e-4 * m.N);
}

TEST_CASE("scalar potential is nonnegative") {
  std::mt19937_64 rng(33);
  for (int t = 0; t < 100; ++t) {
    HoleConfig c = HoleConfig::bath(64, {sample_disk(rng, 1.0), sample_disk(rng, 1.0), sample_disk(rng, 1.0)});
    c.w[1] = c.w[0] + std::polar(std::pow(10.0, -0.5 - 1.5 * (t % 5) / 4.0), 0.3 * t);
    const auto f = emergent_field_derivative(c, t % 3);
    CHECK(f.V >= -1e-6 * c.N);
  }
}

TEST_CASE("field errors") {
  CHECK_THROWS_AS(emergent_field_derivative(HoleConfig::bath(16, {0.1, 0.1}), 0), SingularConfigurationError);
  CHECK_THROWS_AS(ab_sum({0.1, 0.1}, 0), Error);
  IntegralGrids tight;
  tight.double_method = DoubleIntegralMethod::pairwise;
  tight.pairwise_budget = 16;
  CHECK_THROWS_AS(emergent_field_integral(HoleConfig::bath(8, {0.0, 0.5}), 0, tight), ResourceError);
}
