#include <cmath>
#include <cstdio>

#include "qhflux/regime.hpp"

namespace qhflux {

std::string Regime::name() const {
  switch (kind) {
    case RegimeKind::outside_droplet:
      return "outside-droplet";
    case RegimeKind::no_merging:
      return "no-merging";
    case RegimeKind::single_merging:
      return "single-merging(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
    case RegimeKind::remainder:
      return "remainder";
  }
  return "unknown";
}

Regime parse_regime(const std::string& s) {
  if (s == "outside-droplet") return {RegimeKind::outside_droplet};
  if (s == "no-merging") return {RegimeKind::no_merging};
  if (s == "remainder") return {RegimeKind::remainder};
  unsigned a = 0, b = 0;
  if (std::sscanf(s.c_str(), "single-merging(%u,%u)", &a, &b) == 2 && a >= 1 && b >= 1 && a != b)
    return {RegimeKind::single_merging, a - 1, b - 1};
  throw UsageError("unknown regime '" + s + "'");
}

double RegimeClassifier::delta(long N) const {
  if (N < 2) throw DomainError("regime classification needs N >= 2");
  return kappa * std::sqrt(std::log(static_cast<double>(N)) / static_cast<double>(N));
}

Regime RegimeClassifier::classify(const HoleConfig& cfg) const {
  const double d = delta(cfg.N);
  // boundary equalities fall on the more singular side
  for (const auto& y : cfg.w)
    if (!(std::abs(y) < 1.0 - d)) return {RegimeKind::outside_droplet};
  std::size_t close = 0;
  Regime pair{RegimeKind::single_merging};
  double sep2 = 0.0;
  for (std::size_t i = 0; i < cfg.w.size(); ++i)
    for (std::size_t j = i + 1; j < cfg.w.size(); ++j) {
      const double s = std::abs(cfg.w[i] - cfg.w[j]);
      if (!(s > 2.0 * d)) {
        ++close;
        pair.i = i;
        pair.j = j;
        sep2 = s * s;
      }
    }
  if (close == 0) return {RegimeKind::no_merging};
  if (close == 1 && sep2 > std::pow(static_cast<double>(cfg.N), -1.0 - gamma)) return pair;
  return {RegimeKind::remainder};
}

Regime classify(const HoleConfig& cfg, double kappa, double gamma) {
  return RegimeClassifier{kappa, gamma}.classify(cfg);
}

}  // namespace qhflux
