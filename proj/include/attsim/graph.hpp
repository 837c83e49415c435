#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "attsim/errors.hpp"

namespace attsim {

using NodeId = std::uint32_t;

/// Kind of tie: undirected friendship or directed "names as close friend".
enum class TieKind : std::uint8_t { BaseFriend, CloseFriend };

/// Alter classes used for ego-network averages.
///
/// Incoming, Outgoing, Mutual and AllClose look at the close-friend layer
/// only. DistanceD means shortest-path distance exactly D on the undirected
/// projection of the close-friend layer.
enum class RelationClass : std::uint8_t {
  Incoming,
  Outgoing,
  Mutual,
  AllClose,
  Distance2,
  Distance3,
  Distance4,
};

inline constexpr std::array<RelationClass, 7> kRelationClasses = {
    RelationClass::Incoming,  RelationClass::Outgoing,  RelationClass::Mutual,
    RelationClass::AllClose,  RelationClass::Distance2, RelationClass::Distance3,
    RelationClass::Distance4,
};

inline constexpr std::size_t index_of(RelationClass c) noexcept {
  return static_cast<std::size_t>(c);
}

inline constexpr std::string_view to_string(RelationClass c) noexcept {
  switch (c) {
    case RelationClass::Incoming: return "incoming";
    case RelationClass::Outgoing: return "outgoing";
    case RelationClass::Mutual: return "mutual";
    case RelationClass::AllClose: return "all_close";
    case RelationClass::Distance2: return "distance2";
    case RelationClass::Distance3: return "distance3";
    case RelationClass::Distance4: return "distance4";
  }
  return "?";
}

/// Distance (1..4) for the separation classes, AllClose counting as 1; 0 otherwise.
inline constexpr int separation_degree(RelationClass c) noexcept {
  switch (c) {
    case RelationClass::AllClose: return 1;
    case RelationClass::Distance2: return 2;
    case RelationClass::Distance3: return 3;
    case RelationClass::Distance4: return 4;
    default: return 0;
  }
}

/// Checked attitude scalar in [0, 1].
class Attitude {
 public:
  explicit Attitude(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0)) {
      throw DomainError("attitude " + std::to_string(value) + " outside [0, 1]");
    }
  }
  double value() const noexcept { return value_; }

 private:
  double value_;
};

struct DirectedTie {
  NodeId src;
  NodeId dst;
  friend bool operator==(const DirectedTie&, const DirectedTie&) = default;
};

/// Dual-layer social graph: undirected base friendships plus directed
/// close-friend ties, with one attitude per node.
///
/// Append-only. Every close tie a->b requires the base tie {a,b}.
class AttitudeNetwork {
 public:
  AttitudeNetwork() = default;

  std::size_t node_count() const noexcept { return attitudes_.size(); }
  std::size_t base_tie_count() const noexcept { return base_ties_.size(); }
  std::size_t close_tie_count() const noexcept { return close_ties_.size(); }

  NodeId add_node(Attitude attitude) {
    const auto id = static_cast<NodeId>(attitudes_.size());
    attitudes_.push_back(attitude.value());
    base_adj_.emplace_back();
    close_out_.emplace_back();
    close_in_.emplace_back();
    return id;
  }
  NodeId add_node(double attitude) { return add_node(Attitude(attitude)); }

  bool has_node(NodeId v) const noexcept { return v < attitudes_.size(); }

  double attitude(NodeId v) const {
    require(v);
    return attitudes_[v];
  }

  void set_attitude(NodeId v, Attitude a) {
    require(v);
    attitudes_[v] = a.value();
  }

  const std::vector<double>& attitudes() const noexcept { return attitudes_; }

  /// Inserts the unordered pair; returns false if it was already present.
  bool add_base_tie(NodeId a, NodeId b) {
    require(a);
    require(b);
    if (a == b) throw SelfLoopError("self-loop on node " + std::to_string(a));
    if (!base_set_.insert(undirected_key(a, b)).second) return false;
    base_adj_[a].push_back(b);
    base_adj_[b].push_back(a);
    base_ties_.push_back({std::min(a, b), std::max(a, b)});
    return true;
  }

  bool add_close_tie(NodeId src, NodeId dst) {
    require(src);
    require(dst);
    if (src == dst) throw SelfLoopError("self-loop on node " + std::to_string(src));
    if (!has_base_tie(src, dst)) {
      throw LayeringError("close tie " + std::to_string(src) + "->" + std::to_string(dst) +
                          " has no base tie");
    }
    if (!close_set_.insert(directed_key(src, dst)).second) return false;
    close_out_[src].push_back(dst);
    close_in_[dst].push_back(src);
    close_ties_.push_back({src, dst});
    return true;
  }

  bool has_base_tie(NodeId a, NodeId b) const noexcept {
    return a != b && base_set_.contains(undirected_key(a, b));
  }
  bool has_close_tie(NodeId src, NodeId dst) const noexcept {
    return close_set_.contains(directed_key(src, dst));
  }
  bool is_mutual(NodeId a, NodeId b) const noexcept {
    return has_close_tie(a, b) && has_close_tie(b, a);
  }

  /// Base ties in insertion order, stored with src < dst.
  const std::vector<DirectedTie>& base_ties() const noexcept { return base_ties_; }
  /// Close ties in insertion order.
  const std::vector<DirectedTie>& close_ties() const noexcept { return close_ties_; }

  const std::vector<NodeId>& base_neighbors(NodeId v) const {
    require(v);
    return base_adj_[v];
  }
  const std::vector<NodeId>& close_out(NodeId v) const {
    require(v);
    return close_out_[v];
  }
  const std::vector<NodeId>& close_in(NodeId v) const {
    require(v);
    return close_in_[v];
  }
  std::size_t base_degree(NodeId v) const { return base_neighbors(v).size(); }

  /// Alters of `node` in `cls`, sorted ascending; never contains `node`.
  std::vector<NodeId> alters(NodeId node, RelationClass cls) const {
    require(node);
    std::vector<NodeId> out;
    const auto& in = close_in_[node];
    const auto& outs = close_out_[node];
    switch (cls) {
      case RelationClass::Incoming:
        out = in;
        break;
      case RelationClass::Outgoing:
        out = outs;
        break;
      case RelationClass::Mutual:
        for (NodeId x : outs) {
          if (has_close_tie(x, node)) out.push_back(x);
        }
        break;
      case RelationClass::AllClose:
        out = in;
        out.insert(out.end(), outs.begin(), outs.end());
        break;
      default: {
        const int d = separation_degree(cls);
        std::vector<int> dist(node_count(), -1);
        visit_close_shells(node, d, dist, [&](NodeId x, int dx) {
          if (dx == d) out.push_back(x);
        });
        break;
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  /// Breadth-first search from `source` over the undirected close layer,
  /// calling visit(x, distance) for every x with 1 <= distance <= max_depth.
  ///
  /// `dist` must have node_count() entries all equal to -1; on return the
  /// touched entries are reset to -1 so the buffer can be reused.
  template <typename Visit>
  void visit_close_shells(NodeId source, int max_depth, std::vector<int>& dist,
                          Visit&& visit) const {
    std::vector<NodeId> frontier{source};
    std::vector<NodeId> touched{source};
    std::vector<NodeId> next;
    dist[source] = 0;
    for (int depth = 1; depth <= max_depth && !frontier.empty(); ++depth) {
      next.clear();
      for (NodeId u : frontier) {
        auto relax = [&](NodeId x) {
          if (dist[x] < 0) {
            dist[x] = depth;
            touched.push_back(x);
            next.push_back(x);
            visit(x, depth);
          }
        };
        for (NodeId x : close_out_[u]) relax(x);
        for (NodeId x : close_in_[u]) relax(x);
      }
      frontier.swap(next);
    }
    for (NodeId x : touched) dist[x] = -1;
  }

  friend bool operator==(const AttitudeNetwork& a, const AttitudeNetwork& b) {
    if (a.attitudes_ != b.attitudes_) return false;
    if (a.base_set_ != b.base_set_ || a.close_set_ != b.close_set_) return false;
    return true;
  }

 private:
  void require(NodeId v) const {
    if (!has_node(v)) throw MissingNodeError("unknown node " + std::to_string(v));
  }
  static std::uint64_t undirected_key(NodeId a, NodeId b) noexcept {
    if (a > b) std::swap(a, b);
    return (std::uint64_t{a} << 32) | b;
  }
  static std::uint64_t directed_key(NodeId a, NodeId b) noexcept {
    return (std::uint64_t{a} << 32) | b;
  }

  std::vector<double> attitudes_;
  std::vector<std::vector<NodeId>> base_adj_;
  std::vector<std::vector<NodeId>> close_out_;
  std::vector<std::vector<NodeId>> close_in_;
  std::vector<DirectedTie> base_ties_;
  std::vector<DirectedTie> close_ties_;
  std::unordered_set<std::uint64_t> base_set_;
  std::unordered_set<std::uint64_t> close_set_;
};

}  // namespace attsim
