#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

#include "attsim/graph.hpp"
#include "attsim/mechanisms.hpp"
#include "attsim/metrics.hpp"

namespace attsim {

/// Features of a final correlation report that separate the mechanisms.
struct MechanismSignature {
  double tie_spread = 0.0;     // mutual minus incoming correlation
  double first_degree = 0.0;   // mean of incoming, outgoing and mutual correlations
  double third_degree = 0.0;   // distance-3 correlation
};

inline std::optional<MechanismSignature> signature_of(const CorrelationReport& r) {
  const auto in = r[RelationClass::Incoming].r;
  const auto out = r[RelationClass::Outgoing].r;
  const auto mutual = r[RelationClass::Mutual].r;
  const auto d3 = r[RelationClass::Distance3].r;
  if (!in || !out || !mutual || !d3) return std::nullopt;
  return MechanismSignature{*mutual - *in, (*in + *out + *mutual) / 3.0, *d3};
}

struct ClassifierThresholds {
  double homophily_third_degree = -0.15;  // below: clique-driven anticorrelation
  double homophily_max_spread = 0.10;     // tie types look alike
  double contagion_min_first = 0.35;      // strong first-degree similarity
  double contagion_min_spread = 0.05;     // mutual ties clearly ahead
};

/// Labels a finished run with the mechanism whose signature it shows:
/// homophily drives the third degree negative with flat tie types, contagion
/// gives strong first-degree similarity ordered by tie direction, and
/// confounding leaves everything small. Empty when a needed class is undefined.
inline std::optional<Mechanism> classify_mechanism(const CorrelationReport& report,
                                                   const ClassifierThresholds& t = {}) {
  const auto sig = signature_of(report);
  if (!sig) return std::nullopt;
  if (sig->third_degree < t.homophily_third_degree &&
      std::abs(sig->tie_spread) < t.homophily_max_spread) {
    return Mechanism::Homophily;
  }
  if (sig->first_degree >= t.contagion_min_first && sig->tie_spread >= t.contagion_min_spread) {
    return Mechanism::Contagion;
  }
  return Mechanism::Confounding;
}

}  // namespace attsim
