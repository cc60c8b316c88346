#pragma once

#include <cstddef>

#include "qhflux/partition.hpp"

namespace qhflux {

enum class FieldMethod { derivative, integral };

struct EmergentField {
  Vec2 A{0.0, 0.0};
  double V = 0.0;
  std::size_t j = 0;
  FieldMethod method = FieldMethod::derivative;
  // contributions of log Upsilon alone: Im((1,i) d log Upsilon) and 2 d dbar log Upsilon
  Vec2 A_upsilon{0.0, 0.0};
  double V_upsilon = 0.0;
};

// sum_{l != j} (y_j - y_l)^perp / |y_j - y_l|^2
Vec2 ab_sum(const std::vector<cplx>& y, std::size_t j);

EmergentField emergent_field_derivative(const HoleConfig& cfg, std::size_t j);

enum class DoubleIntegralMethod { factorized, pairwise };

struct IntegralGrids {
  int angular = 192;
  int order = 8;
  double panel_width = 0.5;  // in units of 1/sqrt(b)
  double margin = 7.0;       // radial margin past the droplet edge, units of 1/sqrt(b)
  double r_min = 1e-8;
  DoubleIntegralMethod double_method = DoubleIntegralMethod::factorized;
  std::size_t pairwise_budget = 64 * 64;
};

QuadratureGrid field_grid(const HoleConfig& cfg, std::size_t j, const IntegralGrids& grids);
EmergentField emergent_field_integral(const HoleConfig& cfg, std::size_t j, const IntegralGrids& grids = {});

Vec2 correction_a(const Vec2& y);
double correction_v(const Vec2& y);

struct RefinedFields {
  Vec2 A{0.0, 0.0};
  double V = 0.0;
};
RefinedFields refined_fields(const HoleConfig& cfg, std::size_t j);

EmergentField asymptotic_prediction(const HoleConfig& cfg, std::size_t j, const Regime& regime);

}  // namespace qhflux
