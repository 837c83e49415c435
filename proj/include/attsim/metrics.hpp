#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "attsim/errors.hpp"
#include "attsim/graph.hpp"

namespace attsim {

/// Streaming Pearson accumulator (Welford co-moment updates).
class PearsonAccumulator {
 public:
  void add(double x, double y) noexcept {
    ++count_;
    const double n = static_cast<double>(count_);
    const double dx = x - mean_x_;
    mean_x_ += dx / n;
    const double dy = y - mean_y_;
    mean_y_ += dy / n;
    m2_x_ += dx * (x - mean_x_);
    m2_y_ += dy * (y - mean_y_);
    co_ += dx * (y - mean_y_);
    if (count_ == 1) {
      first_x_ = x;
      first_y_ = y;
    } else {
      const_x_ = const_x_ && x == first_x_;
      const_y_ = const_y_ && y == first_y_;
    }
  }

  std::size_t count() const noexcept { return count_; }

  /// Undefined below 3 pairs or when either side has zero variance.
  std::optional<double> value() const noexcept {
    if (count_ < 3 || const_x_ || const_y_) return std::nullopt;
    if (!(m2_x_ > 0.0) || !(m2_y_ > 0.0)) return std::nullopt;
    const double r = co_ / std::sqrt(m2_x_ * m2_y_);
    return std::clamp(r, -1.0, 1.0);
  }

 private:
  std::size_t count_ = 0;
  double mean_x_ = 0.0, mean_y_ = 0.0;
  double m2_x_ = 0.0, m2_y_ = 0.0, co_ = 0.0;
  double first_x_ = 0.0, first_y_ = 0.0;
  bool const_x_ = true, const_y_ = true;
};

using Cell = std::optional<double>;

/// Pearson correlation with pairwise deletion of missing cells.
inline std::optional<double> pearson(std::span<const Cell> x, std::span<const Cell> y) {
  if (x.size() != y.size()) {
    throw AlignmentError("pearson: length mismatch " + std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()));
  }
  PearsonAccumulator acc;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] && y[i]) acc.add(*x[i], *y[i]);
  }
  return acc.value();
}

inline std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw AlignmentError("pearson: length mismatch " + std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()));
  }
  PearsonAccumulator acc;
  for (std::size_t i = 0; i < x.size(); ++i) acc.add(x[i], y[i]);
  return acc.value();
}

/// Mean attitude of alters(node, cls); empty when there are none.
inline Cell alter_average(const AttitudeNetwork& net, NodeId node, RelationClass cls) {
  const auto group = net.alters(node, cls);
  if (group.empty()) return std::nullopt;
  double sum = 0.0;
  for (NodeId x : group) sum += net.attitude(x);
  return sum / static_cast<double>(group.size());
}

/// Rows of the ego-alter matrix, in output order.
enum class MatrixRow : std::uint8_t {
  Ego,
  AllClose,
  Distance2,
  Distance3,
  Distance4,
  Incoming,
  Outgoing,
  Mutual,
};

inline constexpr std::size_t kMatrixRows = 8;

inline constexpr MatrixRow row_of(RelationClass c) noexcept {
  switch (c) {
    case RelationClass::Incoming: return MatrixRow::Incoming;
    case RelationClass::Outgoing: return MatrixRow::Outgoing;
    case RelationClass::Mutual: return MatrixRow::Mutual;
    case RelationClass::AllClose: return MatrixRow::AllClose;
    case RelationClass::Distance2: return MatrixRow::Distance2;
    case RelationClass::Distance3: return MatrixRow::Distance3;
    case RelationClass::Distance4: return MatrixRow::Distance4;
  }
  return MatrixRow::Ego;
}

/// One column per node; rows hold the ego attitude and the alter averages.
struct EgoAlterMatrix {
  std::array<std::vector<Cell>, kMatrixRows> rows;

  std::size_t columns() const noexcept { return rows[0].size(); }
  const std::vector<Cell>& row(MatrixRow r) const { return rows[static_cast<std::size_t>(r)]; }
  std::vector<Cell>& row(MatrixRow r) { return rows[static_cast<std::size_t>(r)]; }

  friend bool operator==(const EgoAlterMatrix&, const EgoAlterMatrix&) = default;
};

/// Builds the whole matrix with one depth-4 search per node, rather than one
/// alters() call per cell. Must agree with alter_average cell by cell.
inline EgoAlterMatrix build_matrix(const AttitudeNetwork& net) {
  const std::size_t n = net.node_count();
  EgoAlterMatrix mat;
  for (auto& r : mat.rows) r.assign(n, std::nullopt);

  std::vector<int> dist(n, -1);
  std::vector<unsigned char> mark(n, 0);
  for (NodeId v = 0; v < n; ++v) {
    mat.row(MatrixRow::Ego)[v] = net.attitude(v);

    auto mean_of = [&](double sum, std::size_t count) -> Cell {
      if (count == 0) return std::nullopt;
      return sum / static_cast<double>(count);
    };

    // Incoming / outgoing lists have no duplicates; mark outgoing to find mutuals.
    double in_sum = 0.0, out_sum = 0.0, mutual_sum = 0.0;
    std::size_t mutual_count = 0;
    for (NodeId x : net.close_out(v)) {
      out_sum += net.attitude(x);
      mark[x] = 1;
    }
    for (NodeId x : net.close_in(v)) {
      in_sum += net.attitude(x);
      if (mark[x]) {
        mutual_sum += net.attitude(x);
        ++mutual_count;
      }
    }
    for (NodeId x : net.close_out(v)) mark[x] = 0;
    mat.row(MatrixRow::Incoming)[v] = mean_of(in_sum, net.close_in(v).size());
    mat.row(MatrixRow::Outgoing)[v] = mean_of(out_sum, net.close_out(v).size());
    mat.row(MatrixRow::Mutual)[v] = mean_of(mutual_sum, mutual_count);

    std::array<double, 5> shell_sum{};
    std::array<std::size_t, 5> shell_count{};
    net.visit_close_shells(v, 4, dist, [&](NodeId x, int d) {
      shell_sum[d] += net.attitude(x);
      ++shell_count[d];
    });
    mat.row(MatrixRow::AllClose)[v] = mean_of(shell_sum[1], shell_count[1]);
    mat.row(MatrixRow::Distance2)[v] = mean_of(shell_sum[2], shell_count[2]);
    mat.row(MatrixRow::Distance3)[v] = mean_of(shell_sum[3], shell_count[3]);
    mat.row(MatrixRow::Distance4)[v] = mean_of(shell_sum[4], shell_count[4]);
  }
  return mat;
}

struct CorrelationEntry {
  std::optional<double> r;
  std::size_t n_effective = 0;
  friend bool operator==(const CorrelationEntry&, const CorrelationEntry&) = default;
};

/// Ego-alter correlation for every relation class.
struct CorrelationReport {
  std::array<CorrelationEntry, kRelationClasses.size()> entries{};

  const CorrelationEntry& operator[](RelationClass c) const { return entries[index_of(c)]; }
  CorrelationEntry& operator[](RelationClass c) { return entries[index_of(c)]; }

  friend bool operator==(const CorrelationReport&, const CorrelationReport&) = default;
};

inline CorrelationReport correlation_report(const EgoAlterMatrix& mat) {
  CorrelationReport report;
  const auto& ego = mat.row(MatrixRow::Ego);
  for (RelationClass c : kRelationClasses) {
    const auto& alt = mat.row(row_of(c));
    PearsonAccumulator acc;
    for (std::size_t i = 0; i < ego.size(); ++i) {
      if (ego[i] && alt[i]) acc.add(*ego[i], *alt[i]);
    }
    report[c] = {acc.value(), acc.count()};
  }
  return report;
}

inline CorrelationReport correlation_report(const AttitudeNetwork& net) {
  return correlation_report(build_matrix(net));
}

}  // namespace attsim
