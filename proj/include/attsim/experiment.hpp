#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "attsim/config.hpp"
#include "attsim/io.hpp"
#include "attsim/mechanisms.hpp"
#include "attsim/metrics.hpp"
#include "attsim/netgen.hpp"

namespace attsim {

struct ReplicationResult {
  std::size_t replication = 0;
  std::uint64_t seed = 0;
  std::vector<Snapshot> snapshots;
  std::optional<AttitudeNetwork> final_network;

  const CorrelationReport& final_report() const { return snapshots.back().report; }
};

/// One full model run: generate, derive close ties, simulate.
inline ReplicationResult run_replication(const SimulationConfig& cfg, std::size_t replication,
                                         bool keep_network = false) {
  ReplicationResult res;
  res.replication = replication;
  res.seed = cfg.seed_for(replication);
  Rng rng(res.seed);
  GenParams gen = cfg.gen;
  gen.seed = res.seed;
  AttitudeNetwork net = generate_network(gen, rng);
  res.snapshots = run_simulation(net, cfg.mech, cfg.schedule, rng);
  if (keep_network) res.final_network = std::move(net);
  return res;
}

/// Summary statistics over the defined correlations of one relation class.
struct ClassStats {
  double mean = 0.0;
  double sd = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t n_defined = 0;
  std::size_t n_undefined = 0;
  friend bool operator==(const ClassStats&, const ClassStats&) = default;
};

/// Values are sorted before summation so the result does not depend on the
/// order replications finished in.
inline ClassStats summarize(std::vector<std::optional<double>> values) {
  ClassStats s;
  std::vector<double> xs;
  for (const auto& v : values) {
    if (v) xs.push_back(*v);
    else ++s.n_undefined;
  }
  s.n_defined = xs.size();
  if (xs.empty()) return s;
  std::sort(xs.begin(), xs.end());
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - s.mean) * (x - s.mean);
  s.sd = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
  s.min = xs.front();
  s.max = xs.back();
  return s;
}

using ClassSummary = std::array<ClassStats, kRelationClasses.size()>;

struct ReplicationSummary {
  ClassSummary final_stats{};
  // One entry per snapshot iteration, ascending.
  std::vector<std::pair<std::size_t, ClassSummary>> series;

  const ClassStats& operator[](RelationClass c) const { return final_stats[index_of(c)]; }
  friend bool operator==(const ReplicationSummary&, const ReplicationSummary&) = default;
};

inline ReplicationSummary summarize(const std::vector<ReplicationResult>& results) {
  ReplicationSummary summary;
  for (RelationClass c : kRelationClasses) {
    std::vector<std::optional<double>> finals;
    for (const auto& r : results) finals.push_back(r.final_report()[c].r);
    summary.final_stats[index_of(c)] = summarize(std::move(finals));
  }
  std::map<std::size_t, std::array<std::vector<std::optional<double>>, kRelationClasses.size()>>
      by_iter;
  for (const auto& r : results) {
    for (const auto& snap : r.snapshots) {
      for (RelationClass c : kRelationClasses) {
        by_iter[snap.iteration][index_of(c)].push_back(snap.report[c].r);
      }
    }
  }
  for (auto& [iter, cols] : by_iter) {
    ClassSummary row{};
    for (std::size_t i = 0; i < cols.size(); ++i) row[i] = summarize(std::move(cols[i]));
    summary.series.emplace_back(iter, row);
  }
  return summary;
}

/// Runs replications [0, count) on up to `threads` workers. Results are
/// indexed by replication, so output never depends on scheduling.
inline std::vector<ReplicationResult> run_replications(const SimulationConfig& cfg,
                                                       unsigned threads = 1,
                                                       bool keep_networks = false) {
  std::vector<ReplicationResult> results(cfg.replications);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t r; (r = next.fetch_add(1)) < cfg.replications;) {
      try {
        results[r] = run_replication(cfg, r, keep_networks);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cfg.replications)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

inline constexpr const char* kSeriesHeader =
    "replication,iteration,relation_class,correlation,n_effective";
inline constexpr const char* kSummaryHeader =
    "relation_class,mean,sd,min,max,n_defined,n_undefined";

inline void write_series_rows(std::ostream& out, std::size_t replication, const Snapshot& snap) {
  for (RelationClass c : kRelationClasses) {
    out << replication << ',' << snap.iteration << ',' << to_string(c) << ',';
    if (snap.report[c].r) out << format_double(*snap.report[c].r);
    out << ',' << snap.report[c].n_effective << '\n';
  }
}

inline void write_stats_row(std::ostream& out, const ClassStats& s) {
  if (s.n_defined > 0) {
    out << format_double(s.mean) << ',' << format_double(s.sd) << ',' << format_double(s.min)
        << ',' << format_double(s.max);
  } else {
    out << ",,,";
  }
  out << ',' << s.n_defined << ',' << s.n_undefined;
}

/// Fails before any work if `dir` cannot be created or written.
inline void ensure_writable_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string());
  }
  const auto probe = dir / ".write_probe";
  {
    std::ofstream out(probe);
    if (!out) throw IoError("output directory " + dir.string() + " is not writable");
  }
  std::filesystem::remove(probe, ec);
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

struct ExperimentOptions {
  unsigned threads = 1;
  bool export_networks = false;
};

/// Writes, under cfg.output_dir:
///   config.txt                 resolved configuration and run metadata
///   replications/rep_NNNN.csv  snapshot series of one replication
///   final.csv                  last snapshot of every replication
///   summary.csv                per-class aggregates of the final correlations
///   summary_timeseries.csv     per-class aggregates at every snapshot iteration
///   networks/rep_NNNN/         final networks, when export_networks is set
inline ReplicationSummary run_experiment(const SimulationConfig& cfg,
                                         const ExperimentOptions& opts = {}) {
  validate(cfg);
  const std::filesystem::path root(cfg.output_dir);
  ensure_writable_dir(root);
  ensure_writable_dir(root / "replications");

  const auto results = run_replications(cfg, opts.threads, opts.export_networks);

  {
    auto out = open_output(root / "config.txt");
    write_config(out, cfg);
    out << "# missing_alter_policy = pairwise_deletion\n"
        << "# separation_layer = close_friend_undirected\n"
        << "# min_pairs_for_correlation = 3\n";
  }
  char name[32];
  for (const auto& r : results) {
    std::snprintf(name, sizeof name, "rep_%04zu", r.replication);
    auto out = open_output(root / "replications" / (std::string(name) + ".csv"));
    out << kSeriesHeader << '\n';
    for (const auto& snap : r.snapshots) write_series_rows(out, r.replication, snap);
    if (opts.export_networks && r.final_network) {
      export_network(*r.final_network, root / "networks" / name);
    }
  }
  {
    auto out = open_output(root / "final.csv");
    out << kSeriesHeader << '\n';
    for (const auto& r : results) write_series_rows(out, r.replication, r.snapshots.back());
  }

  const auto summary = summarize(results);
  {
    auto out = open_output(root / "summary.csv");
    out << kSummaryHeader << '\n';
    for (RelationClass c : kRelationClasses) {
      out << to_string(c) << ',';
      write_stats_row(out, summary[c]);
      out << '\n';
    }
  }
  {
    auto out = open_output(root / "summary_timeseries.csv");
    out << "iteration," << kSummaryHeader << '\n';
    for (const auto& [iter, row] : summary.series) {
      for (RelationClass c : kRelationClasses) {
        out << iter << ',' << to_string(c) << ',';
        write_stats_row(out, row[index_of(c)]);
        out << '\n';
      }
    }
  }
  return summary;
}

/// Runs one experiment per value of `key`, each in output_dir/<key>_<value>,
/// and writes output_dir/sweep.csv with the final aggregates per point.
inline std::vector<std::pair<std::string, ReplicationSummary>> run_sweep(
    const SimulationConfig& base, const std::string& key, const std::vector<std::string>& values,
    const ExperimentOptions& opts = {}) {
  if (key == "output_dir") throw ConfigValidationError(key, "cannot sweep the output directory");
  const std::filesystem::path root(base.output_dir);
  ensure_writable_dir(root);
  std::vector<SimulationConfig> points;
  for (const auto& v : values) {
    SimulationConfig cfg = base;
    apply_setting(cfg, key, v);
    cfg.output_dir = (root / (key + "_" + v)).string();
    validate(cfg);
    points.push_back(std::move(cfg));
  }
  std::vector<std::pair<std::string, ReplicationSummary>> out;
  auto table = open_output(root / "sweep.csv");
  table << "param,value," << kSummaryHeader << '\n';
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto summary = run_experiment(points[i], opts);
    for (RelationClass c : kRelationClasses) {
      table << key << ',' << values[i] << ',' << to_string(c) << ',';
      write_stats_row(table, summary[c]);
      table << '\n';
    }
    out.emplace_back(values[i], std::move(summary));
  }
  return out;
}

}  // namespace attsim
