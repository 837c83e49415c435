#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "attsim/errors.hpp"
#include "attsim/graph.hpp"
#include "attsim/random.hpp"

namespace attsim {

/// Parameters of the scale-free base network and its close-friend layer.
struct GenParams {
  std::size_t n = 1000;
  std::size_t m = 3;
  double p_close = 0.67;   // a base tie spawns close tie(s)
  double p_mutual = 0.5;   // a spawned close tie is reciprocated
  std::uint64_t seed = 1;

  void validate() const {
    if (m < 1) throw ParameterError("m must be at least 1");
    if (n <= m) throw ParameterError("n must exceed m (n=" + std::to_string(n) +
                                     ", m=" + std::to_string(m) + ")");
    if (!(p_close >= 0.0 && p_close <= 1.0)) throw ParameterError("p_close outside [0, 1]");
    if (!(p_mutual >= 0.0 && p_mutual <= 1.0)) throw ParameterError("p_mutual outside [0, 1]");
  }
};

/// Preferential-attachment probabilities, weight(i) = k_i / sum_j k_j over
/// base-layer degrees. Indexed by NodeId.
struct AttachmentDistribution {
  std::vector<double> weights;
};

inline AttachmentDistribution attachment_distribution(const AttitudeNetwork& net) {
  std::size_t total = 0;
  for (NodeId v = 0; v < net.node_count(); ++v) total += net.base_degree(v);
  if (total == 0) throw DegenerateDistributionError("network has no base ties");
  AttachmentDistribution dist;
  dist.weights.reserve(net.node_count());
  for (NodeId v = 0; v < net.node_count(); ++v) {
    dist.weights.push_back(static_cast<double>(net.base_degree(v)) / static_cast<double>(total));
  }
  return dist;
}

/// Inverse-CDF draw from an attachment distribution.
inline NodeId sample_attachment(const AttachmentDistribution& dist, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  NodeId last_positive = 0;
  for (std::size_t i = 0; i < dist.weights.size(); ++i) {
    if (dist.weights[i] <= 0.0) continue;
    last_positive = static_cast<NodeId>(i);
    acc += dist.weights[i];
    if (u < acc) return last_positive;
  }
  return last_positive;
}

/// Barabasi-Albert growth from an m-node clique.
///
/// Each new node draws m distinct targets with probability proportional to
/// degree; duplicates are rejected and redrawn. Degree-proportional draws pick
/// a uniform entry of the tie-endpoint list, where node i appears k_i times.
/// Attitudes are i.i.d. uniform on [0, 1].
inline AttitudeNetwork generate_ba(const GenParams& params, Rng& rng) {
  params.validate();
  const std::size_t n = params.n;
  const std::size_t m = params.m;

  AttitudeNetwork net;
  for (std::size_t i = 0; i < n; ++i) net.add_node(rng.uniform());

  std::vector<NodeId> endpoints;
  endpoints.reserve(2 * (m * (m - 1) / 2 + (n - m) * m));
  for (NodeId a = 0; a < m; ++a) {
    for (NodeId b = a + 1; b < m; ++b) {
      net.add_base_tie(a, b);
      endpoints.push_back(a);
      endpoints.push_back(b);
    }
  }

  std::vector<NodeId> targets;
  targets.reserve(m);
  for (auto v = static_cast<NodeId>(m); v < n; ++v) {
    targets.clear();
    while (targets.size() < m) {
      // With m = 1 the seed is a lone node of degree 0; fall back to uniform.
      const NodeId t = endpoints.empty() ? static_cast<NodeId>(rng.index(v))
                                         : endpoints[rng.index(endpoints.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (NodeId t : targets) {
      net.add_base_tie(v, t);
      endpoints.push_back(v);
      endpoints.push_back(t);
    }
  }
  return net;
}

/// Derives the directed close-friend layer from the base ties, in base-tie
/// insertion order: with probability p_close a tie spawns close ties; of those,
/// a fraction p_mutual is reciprocated and the rest point one uniformly chosen
/// way.
inline void derive_close_ties(AttitudeNetwork& net, const GenParams& params, Rng& rng) {
  if (net.close_tie_count() != 0) throw StateError("close-friend layer already populated");
  const std::vector<DirectedTie> base = net.base_ties();
  for (const auto& [a, b] : base) {
    if (!rng.bernoulli(params.p_close)) continue;
    if (rng.bernoulli(params.p_mutual)) {
      net.add_close_tie(a, b);
      net.add_close_tie(b, a);
    } else if (rng.bernoulli(0.5)) {
      net.add_close_tie(a, b);
    } else {
      net.add_close_tie(b, a);
    }
  }
}

/// Steps 1-2 of the model: base network then close layer, from one seed.
inline AttitudeNetwork generate_network(const GenParams& params, Rng& rng) {
  AttitudeNetwork net = generate_ba(params, rng);
  derive_close_ties(net, params, rng);
  return net;
}

}  // namespace attsim
