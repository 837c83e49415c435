#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "attsim/errors.hpp"
#include "attsim/graph.hpp"
#include "attsim/metrics.hpp"
#include "attsim/random.hpp"

namespace attsim {

struct MechanismParams {
  double contagion_weight = 0.05;     // doubled on mutual ties, so at most 0.5
  double homophily_threshold = 0.8;   // "strong" attitude is >= this
  double confounding_weight = 0.02;

  void validate() const {
    if (!(contagion_weight > 0.0 && contagion_weight <= 0.5)) {
      throw ParameterError("contagion_weight must lie in (0, 0.5]");
    }
    if (!(homophily_threshold > 0.0 && homophily_threshold < 1.0)) {
      throw ParameterError("homophily_threshold must lie in (0, 1)");
    }
    if (!(confounding_weight > 0.0 && confounding_weight <= 1.0)) {
      throw ParameterError("confounding_weight must lie in (0, 1]");
    }
  }
};

enum class Mechanism : std::uint8_t { Contagion, Homophily, Confounding };

enum class ScheduleMode : std::uint8_t { PureContagion, PureHomophily, PureConfounding, Mixed };

inline constexpr std::string_view to_string(ScheduleMode m) noexcept {
  switch (m) {
    case ScheduleMode::PureContagion: return "PureContagion";
    case ScheduleMode::PureHomophily: return "PureHomophily";
    case ScheduleMode::PureConfounding: return "PureConfounding";
    case ScheduleMode::Mixed: return "Mixed";
  }
  return "?";
}

inline std::optional<ScheduleMode> parse_mode(std::string_view s) noexcept {
  for (auto m : {ScheduleMode::PureContagion, ScheduleMode::PureHomophily,
                 ScheduleMode::PureConfounding, ScheduleMode::Mixed}) {
    if (s == to_string(m)) return m;
  }
  return std::nullopt;
}

struct MechanismSchedule {
  ScheduleMode mode = ScheduleMode::PureContagion;
  // Mixed-mode probabilities; ignored by the pure modes.
  double p_contagion = 1.0;
  double p_homophily = 0.0;
  double p_confounding = 0.0;
  std::size_t iterations = 50000;
  std::size_t snapshot_every = 500;

  void validate() const {
    if (snapshot_every == 0) throw ParameterError("snapshot_every must be positive");
    if (mode == ScheduleMode::Mixed) {
      if (p_contagion < 0.0 || p_homophily < 0.0 || p_confounding < 0.0) {
        throw ParameterError("mixed-mode probabilities must be non-negative");
      }
      if (std::abs(p_contagion + p_homophily + p_confounding - 1.0) > 1e-12) {
        throw ParameterError("mixed-mode probabilities must sum to 1");
      }
    }
  }
};

struct ContagionReport {
  bool applied = false;
  DirectedTie tie{};
  bool mutual = false;
  double before = 0.0;
  double after = 0.0;
};

struct HomophilyReport {
  bool applied = false;    // a new tie was created
  std::size_t eligible = 0;
  std::optional<std::pair<NodeId, NodeId>> pair;
};

struct ConfoundingReport {
  bool applied = false;
  NodeId node = 0;
  NodeId friend_node = 0;
  double stimulus = 0.0;
  std::pair<double, double> before{};
  std::pair<double, double> after{};
};

namespace detail {

// Convex update, clamped so rounding can never leave [0, 1].
inline double blend(double toward, double current, double weight) noexcept {
  return std::clamp(toward * weight + current * (1.0 - weight), 0.0, 1.0);
}

}  // namespace detail

/// Samples one directed close tie A->B uniformly and moves A toward B, with
/// the weight doubled when B also names A.
inline ContagionReport contagion_step(AttitudeNetwork& net, const MechanismParams& params,
                                      Rng& rng) {
  ContagionReport rep;
  const auto& ties = net.close_ties();
  if (ties.empty()) {
    rng.engine().discard(1);
    return rep;
  }
  rep.tie = ties[rng.index(ties.size())];
  rep.mutual = net.has_close_tie(rep.tie.dst, rep.tie.src);
  const double w = rep.mutual ? 2.0 * params.contagion_weight : params.contagion_weight;
  rep.before = net.attitude(rep.tie.src);
  rep.after = detail::blend(net.attitude(rep.tie.dst), rep.before, w);
  net.set_attitude(rep.tie.src, Attitude(rep.after));
  rep.applied = true;
  return rep;
}

/// Picks two distinct nodes with attitude >= threshold and ties them, in the
/// base layer and as a mutual close pair. Already-tied pairs are a no-op.
inline HomophilyReport homophily_step(AttitudeNetwork& net, const MechanismParams& params,
                                      Rng& rng) {
  HomophilyReport rep;
  std::vector<NodeId> strong;
  for (NodeId v = 0; v < net.node_count(); ++v) {
    if (net.attitude(v) >= params.homophily_threshold) strong.push_back(v);
  }
  rep.eligible = strong.size();
  if (strong.size() < 2) {
    rng.engine().discard(1);
    return rep;
  }
  const std::size_t i = rng.index(strong.size());
  std::size_t j = rng.index(strong.size() - 1);
  if (j >= i) ++j;
  const NodeId a = std::min(strong[i], strong[j]);
  const NodeId b = std::max(strong[i], strong[j]);
  rep.pair = std::pair{a, b};
  if (net.has_base_tie(a, b)) return rep;
  net.add_base_tie(a, b);
  net.add_close_tie(a, b);
  net.add_close_tie(b, a);
  rep.applied = true;
  return rep;
}

/// Picks a random node and a random base-layer friend, then moves both toward
/// a shared uniform stimulus.
inline ConfoundingReport confounding_step(AttitudeNetwork& net, const MechanismParams& params,
                                          Rng& rng) {
  ConfoundingReport rep;
  if (net.node_count() == 0) return rep;
  rep.node = static_cast<NodeId>(rng.index(net.node_count()));
  const auto& friends = net.base_neighbors(rep.node);
  if (friends.empty()) return rep;
  rep.friend_node = friends[rng.index(friends.size())];
  rep.stimulus = rng.uniform();
  const double w = params.confounding_weight;
  rep.before = {net.attitude(rep.node), net.attitude(rep.friend_node)};
  rep.after = {detail::blend(rep.stimulus, rep.before.first, w),
               detail::blend(rep.stimulus, rep.before.second, w)};
  net.set_attitude(rep.node, Attitude(rep.after.first));
  net.set_attitude(rep.friend_node, Attitude(rep.after.second));
  rep.applied = true;
  return rep;
}

inline Mechanism pick_mechanism(const MechanismSchedule& schedule, Rng& rng) {
  switch (schedule.mode) {
    case ScheduleMode::PureContagion: return Mechanism::Contagion;
    case ScheduleMode::PureHomophily: return Mechanism::Homophily;
    case ScheduleMode::PureConfounding: return Mechanism::Confounding;
    case ScheduleMode::Mixed: break;
  }
  const double u = rng.uniform();
  if (u < schedule.p_contagion) return Mechanism::Contagion;
  if (u < schedule.p_contagion + schedule.p_homophily) return Mechanism::Homophily;
  return schedule.p_confounding > 0.0 ? Mechanism::Confounding
                                      : (schedule.p_homophily > 0.0 ? Mechanism::Homophily
                                                                    : Mechanism::Contagion);
}

inline void apply_mechanism(Mechanism m, AttitudeNetwork& net, const MechanismParams& params,
                            Rng& rng) {
  switch (m) {
    case Mechanism::Contagion: contagion_step(net, params, rng); break;
    case Mechanism::Homophily: homophily_step(net, params, rng); break;
    case Mechanism::Confounding: confounding_step(net, params, rng); break;
  }
}

struct Snapshot {
  std::size_t iteration = 0;
  CorrelationReport report;
  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

using SnapshotCallback = std::function<void(std::size_t iteration, const CorrelationReport&)>;

/// Runs the mechanism loop on a generated network. A report is taken at
/// iteration 0, every `snapshot_every` iterations, and after the last one.
inline std::vector<Snapshot> run_simulation(AttitudeNetwork& net, const MechanismParams& params,
                                            const MechanismSchedule& schedule, Rng& rng,
                                            const SnapshotCallback& on_snapshot = {}) {
  params.validate();
  schedule.validate();
  std::vector<Snapshot> out;
  auto take = [&](std::size_t t) {
    out.push_back({t, correlation_report(net)});
    if (on_snapshot) on_snapshot(t, out.back().report);
  };
  take(0);
  for (std::size_t t = 1; t <= schedule.iterations; ++t) {
    apply_mechanism(pick_mechanism(schedule, rng), net, params, rng);
    if (t % schedule.snapshot_every == 0 || t == schedule.iterations) take(t);
  }
  return out;
}

}  // namespace attsim
