#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qhflux/numeric.hpp"

namespace qhflux {

struct HoleConfig {
  std::vector<cplx> w;
  long N = 1;
  double b = 1.0;

  std::size_t n() const { return w.size(); }
  static HoleConfig bath(long N, std::vector<cplx> w) { return {std::move(w), N, static_cast<double>(N)}; }
};

enum class RegimeKind { outside_droplet, no_merging, single_merging, remainder };

struct Regime {
  RegimeKind kind = RegimeKind::no_merging;
  // merging pair (0-based) for single_merging
  std::size_t i = 0, j = 0;

  std::string name() const;
  bool operator==(const Regime&) const = default;
};

Regime parse_regime(const std::string& s);

struct RegimeClassifier {
  double kappa = 2.0;
  double gamma = 1.0;

  double delta(long N) const;
  Regime classify(const HoleConfig& cfg) const;
};

Regime classify(const HoleConfig& cfg, double kappa, double gamma);

}  // namespace qhflux
