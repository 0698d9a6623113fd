#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <string_view>
#include <vector>

#include "tgbench/coloring.hpp"
#include "tgbench/error.hpp"
#include "tgbench/graph.hpp"

namespace tgbench {

inline constexpr std::size_t kFieldCount = 12;

/// Prediction target field names in their fixed order. Prompt rendering,
/// gold completions and output validation all read this one table.
inline constexpr std::array<std::string_view, kFieldCount> kFieldNames = {
    "density",
    "degree_min",
    "degree_mean",
    "degree_max",
    "degree_std",
    "triangles_total",
    "average_clustering",
    "transitivity",
    "average_shortest_path_length",
    "diameter",
    "chromatic_number",
    "global_efficiency",
};

/// Integer-valued fields, by position in kFieldNames.
inline constexpr std::array<bool, kFieldCount> kFieldIsInteger = {
    false, true, false, true, false, true, false, false, false, true, true, false,
};

inline constexpr int kStoragePrecision = 6;

struct MetricsRecord {
  double density = 0.0;
  std::int64_t degree_min = 0;
  double degree_mean = 0.0;
  std::int64_t degree_max = 0;
  double degree_std = 0.0;
  std::int64_t triangles_total = 0;
  double average_clustering = 0.0;
  double transitivity = 0.0;
  double average_shortest_path_length = 0.0;
  std::int64_t diameter = 0;
  std::int64_t chromatic_number = 0;
  double global_efficiency = 0.0;

  std::array<double, kFieldCount> values() const {
    return {density,
            static_cast<double>(degree_min),
            degree_mean,
            static_cast<double>(degree_max),
            degree_std,
            static_cast<double>(triangles_total),
            average_clustering,
            transitivity,
            average_shortest_path_length,
            static_cast<double>(diameter),
            static_cast<double>(chromatic_number),
            global_efficiency};
  }

  static MetricsRecord from_values(const std::array<double, kFieldCount>& v) {
    auto as_int = [](double x) { return static_cast<std::int64_t>(std::llround(x)); };
    MetricsRecord m;
    m.density = v[0];
    m.degree_min = as_int(v[1]);
    m.degree_mean = v[2];
    m.degree_max = as_int(v[3]);
    m.degree_std = v[4];
    m.triangles_total = as_int(v[5]);
    m.average_clustering = v[6];
    m.transitivity = v[7];
    m.average_shortest_path_length = v[8];
    m.diameter = as_int(v[9]);
    m.chromatic_number = as_int(v[10]);
    m.global_efficiency = v[11];
    return m;
  }

  friend bool operator==(const MetricsRecord&, const MetricsRecord&) = default;
};

struct DegreeStats {
  std::int64_t min = 0;
  double mean = 0.0;
  std::int64_t max = 0;
  double std = 0.0;  // population standard deviation
};

inline DegreeStats degree_stats(const Graph& g) {
  const auto deg = degree_sequence(g);
  const auto n = static_cast<double>(deg.size());
  DegreeStats s;
  s.min = static_cast<std::int64_t>(*std::min_element(deg.begin(), deg.end()));
  s.max = static_cast<std::int64_t>(*std::max_element(deg.begin(), deg.end()));
  s.mean = static_cast<double>(2 * g.edge_count()) / n;
  double ss = 0.0;
  for (auto d : deg) ss += (static_cast<double>(d) - s.mean) * (static_cast<double>(d) - s.mean);
  s.std = std::sqrt(ss / n);
  return s;
}

inline double density(const Graph& g) {
  const auto n = g.node_count();
  if (n < 2) throw DataError("density is undefined for fewer than two nodes");
  return 2.0 * static_cast<double>(g.edge_count()) / (static_cast<double>(n) * static_cast<double>(n - 1));
}

/// Triangles through each vertex, via sorted-adjacency intersection over
/// edges (u, v) with u < v counting common neighbours w > v.
inline std::vector<std::int64_t> triangles_per_node(const Graph& g) {
  std::vector<std::int64_t> t(g.node_count(), 0);
  for (const auto& e : g.edges()) {
    auto a = g.neighbors(e.u);
    auto b = g.neighbors(e.v);
    auto ia = std::upper_bound(a.begin(), a.end(), e.v);
    auto ib = std::upper_bound(b.begin(), b.end(), e.v);
    while (ia != a.end() && ib != b.end()) {
      if (*ia < *ib) {
        ++ia;
      } else if (*ib < *ia) {
        ++ib;
      } else {
        ++t[e.u];
        ++t[e.v];
        ++t[*ia];
        ++ia;
        ++ib;
      }
    }
  }
  return t;
}

inline std::int64_t triangle_count(const Graph& g) {
  const auto t = triangles_per_node(g);
  return std::accumulate(t.begin(), t.end(), std::int64_t{0}) / 3;
}

// Nodes of degree < 2 contribute 0 and still count in the mean.
inline double average_clustering(const Graph& g) {
  const auto t = triangles_per_node(g);
  double sum = 0.0;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const auto d = static_cast<double>(g.degree(v));
    if (d >= 2) sum += 2.0 * static_cast<double>(t[v]) / (d * (d - 1));
  }
  return sum / static_cast<double>(g.node_count());
}

// 0 when the graph has no connected triple.
inline double transitivity(const Graph& g) {
  std::int64_t triads = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const auto d = static_cast<std::int64_t>(g.degree(v));
    triads += d * (d - 1) / 2;
  }
  if (triads == 0) return 0.0;
  return 3.0 * static_cast<double>(triangle_count(g)) / static_cast<double>(triads);
}

/// Row-major n x n hop-count table from one BFS per source.
class DistanceTable {
 public:
  explicit DistanceTable(const Graph& g) : n_(g.node_count()), d_(n_ * n_, kUnreached) {
    std::vector<NodeId> queue(n_);
    for (NodeId s = 0; s < n_; ++s) {
      auto* row = &d_[s * n_];
      std::size_t head = 0;
      std::size_t tail = 0;
      row[s] = 0;
      queue[tail++] = s;
      while (head < tail) {
        const NodeId v = queue[head++];
        for (NodeId w : g.neighbors(v)) {
          if (row[w] == kUnreached) {
            row[w] = row[v] + 1;
            queue[tail++] = w;
          }
        }
      }
      if (tail != n_) throw DataError("distances are undefined on a disconnected graph");
    }
  }

  std::size_t size() const noexcept { return n_; }
  std::uint32_t operator()(NodeId a, NodeId b) const noexcept { return d_[a * n_ + b]; }

 private:
  static constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();
  std::size_t n_;
  std::vector<std::uint32_t> d_;
};

inline DistanceTable all_pairs_distances(const Graph& g) { return DistanceTable(g); }

namespace detail {
inline void require_pairs(const DistanceTable& d) {
  if (d.size() < 2) throw DataError("path metrics need at least two nodes");
}
inline double ordered_pairs(const DistanceTable& d) {
  return static_cast<double>(d.size()) * static_cast<double>(d.size() - 1);
}
}  // namespace detail

inline double average_shortest_path_length(const DistanceTable& d) {
  detail::require_pairs(d);
  std::uint64_t sum = 0;
  for (NodeId i = 0; i < d.size(); ++i)
    for (NodeId j = 0; j < d.size(); ++j) sum += d(i, j);
  return static_cast<double>(sum) / detail::ordered_pairs(d);
}

inline std::int64_t diameter(const DistanceTable& d) {
  std::uint32_t best = 0;
  for (NodeId i = 0; i < d.size(); ++i)
    for (NodeId j = 0; j < d.size(); ++j) best = std::max(best, d(i, j));
  return best;
}

inline double global_efficiency(const DistanceTable& d) {
  detail::require_pairs(d);
  double sum = 0.0;
  for (NodeId i = 0; i < d.size(); ++i)
    for (NodeId j = 0; j < d.size(); ++j)
      if (i != j) sum += 1.0 / static_cast<double>(d(i, j));
  return sum / detail::ordered_pairs(d);
}

inline double average_shortest_path_length(const Graph& g) {
  return average_shortest_path_length(DistanceTable(g));
}
inline std::int64_t diameter(const Graph& g) { return diameter(DistanceTable(g)); }
inline double global_efficiency(const Graph& g) { return global_efficiency(DistanceTable(g)); }

/// All twelve gold parameters at full precision. Requires a connected graph
/// with at least two nodes.
inline MetricsRecord compute_metrics(const Graph& g,
                                     std::uint64_t coloring_budget = kDefaultColoringBudget) {
  const DistanceTable dist(g);
  const auto deg = degree_stats(g);
  MetricsRecord m;
  m.density = density(g);
  m.degree_min = deg.min;
  m.degree_mean = deg.mean;
  m.degree_max = deg.max;
  m.degree_std = deg.std;
  m.triangles_total = triangle_count(g);
  m.average_clustering = average_clustering(g);
  m.transitivity = transitivity(g);
  m.average_shortest_path_length = average_shortest_path_length(dist);
  m.diameter = diameter(dist);
  m.chromatic_number = static_cast<std::int64_t>(chromatic_number(g, coloring_budget));
  m.global_efficiency = global_efficiency(dist);
  return m;
}

/// Rounds to `kStoragePrecision` decimals by printing and re-reading, so the
/// result is exactly the double a reader of the printed value obtains.
inline double round_for_storage(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", kStoragePrecision, x);
  double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;  // drop negative zero
}

inline MetricsRecord round_for_storage(const MetricsRecord& m) {
  auto r = m;
  r.density = round_for_storage(m.density);
  r.degree_mean = round_for_storage(m.degree_mean);
  r.degree_std = round_for_storage(m.degree_std);
  r.average_clustering = round_for_storage(m.average_clustering);
  r.transitivity = round_for_storage(m.transitivity);
  r.average_shortest_path_length = round_for_storage(m.average_shortest_path_length);
  r.global_efficiency = round_for_storage(m.global_efficiency);
  return r;
}

}  // namespace tgbench
