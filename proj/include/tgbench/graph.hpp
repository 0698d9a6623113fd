#pragma once

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tgbench/error.hpp"

namespace tgbench {

using NodeId = std::uint32_t;

struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Simple undirected unweighted graph over node ids 0..n-1.
///
/// Edges are stored as (min, max) pairs sorted lexicographically; adjacency
/// lists are sorted and derived eagerly from the edge set. Instances are
/// immutable once constructed.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph on `n` nodes. Pairs may arrive in any orientation and
  /// order; duplicates collapse. Throws DataError on self-loops or ids >= n.
  static Graph from_edges(std::size_t n, std::vector<Edge> edges) {
    if (n == 0) throw DataError("graph must have at least one node");
    for (auto& e : edges) {
      if (e.u == e.v) {
        throw DataError("self-loop (" + std::to_string(e.u) + ", " + std::to_string(e.v) + ")");
      }
      if (e.u >= n || e.v >= n) {
        throw DataError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                        ") out of range for n=" + std::to_string(n));
      }
      if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    Graph g;
    g.n_ = n;
    g.edges_ = std::move(edges);
    g.offsets_.assign(n + 1, 0);
    for (const auto& e : g.edges_) {
      ++g.offsets_[e.u + 1];
      ++g.offsets_[e.v + 1];
    }
    for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
    g.neighbors_.resize(2 * g.edges_.size());
    std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    // Lexicographic edge order fills every list in ascending order.
    for (const auto& e : g.edges_) g.neighbors_[fill[e.u]++] = e.v;
    for (const auto& e : g.edges_) g.neighbors_[fill[e.v]++] = e.u;
    for (std::size_t i = 0; i < n; ++i) {
      std::sort(g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]),
                g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]));
    }
    return g;
  }

  std::size_t node_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  std::span<const NodeId> neighbors(NodeId v) const noexcept {
    return {neighbors_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }

  std::size_t degree(NodeId v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

  bool has_edge(NodeId a, NodeId b) const noexcept {
    auto adj = neighbors(a);
    return std::binary_search(adj.begin(), adj.end(), b);
  }

  friend bool operator==(const Graph& a, const Graph& b) noexcept {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> neighbors_;
};

using RawEdge = std::pair<std::int64_t, std::int64_t>;

/// Canonical form of an edge list over arbitrary integer labels: labels are
/// remapped to 0..n-1 by ascending original value, reversed and duplicate
/// pairs collapse, and n is the number of distinct labels.
inline Graph normalize(std::span<const RawEdge> raw) {
  if (raw.empty()) throw DataError("cannot normalize an empty edge list");
  std::map<std::int64_t, NodeId> labels;
  for (const auto& [a, b] : raw) {
    if (a == b) {
      throw DataError("self-loop (" + std::to_string(a) + ", " + std::to_string(b) + ")");
    }
    labels.emplace(a, 0);
    labels.emplace(b, 0);
  }
  NodeId next = 0;
  for (auto& [label, id] : labels) id = next++;

  std::vector<Edge> edges;
  edges.reserve(raw.size());
  for (const auto& [a, b] : raw) edges.push_back({labels.at(a), labels.at(b)});
  return Graph::from_edges(labels.size(), std::move(edges));
}

inline bool is_connected(const Graph& g) {
  const auto n = g.node_count();
  if (n == 0) return false;
  std::vector<char> seen(n, 0);
  std::vector<NodeId> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    for (NodeId w : g.neighbors(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == n;
}

inline std::vector<std::size_t> degree_sequence(const Graph& g) {
  std::vector<std::size_t> deg(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) deg[v] = g.degree(v);
  return deg;
}

/// Applies `perm` (old id -> new id) to every node.
inline Graph relabel(const Graph& g, std::span<const NodeId> perm) {
  if (perm.size() != g.node_count()) throw DataError("permutation size mismatch");
  std::vector<Edge> edges;
  edges.reserve(g.edge_count());
  for (const auto& e : g.edges()) edges.push_back({perm[e.u], perm[e.v]});
  return Graph::from_edges(g.node_count(), std::move(edges));
}

// Edge-list text: "u v\n" per edge, u < v, lexicographic order, no trailing
// blank line.
inline std::string render_edge_list(const Graph& g) {
  std::string out;
  out.reserve(g.edge_count() * 6);
  for (const auto& e : g.edges()) {
    out += std::to_string(e.u);
    out += ' ';
    out += std::to_string(e.v);
    out += '\n';
  }
  return out;
}

/// Reads whitespace-separated integer pairs, one per line. Blank lines are
/// skipped. Throws DataError naming the line on malformed input.
inline std::vector<RawEdge> parse_edge_pairs(std::string_view text) {
  std::vector<RawEdge> pairs;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    std::int64_t vals[2];
    std::size_t got = 0;
    std::size_t pos = 0;
    auto skip_ws = [&] {
      while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    };
    skip_ws();
    if (pos == line.size()) continue;
    while (pos < line.size() && got < 2) {
      auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + line.size(), vals[got]);
      if (ec != std::errc{}) break;
      pos = static_cast<std::size_t>(ptr - line.data());
      ++got;
      skip_ws();
    }
    if (got != 2 || pos != line.size()) {
      throw DataError("malformed edge on line " + std::to_string(line_no) + ": '" +
                      std::string(line) + "'");
    }
    pairs.emplace_back(vals[0], vals[1]);
  }
  return pairs;
}

inline Graph parse_edge_list(std::string_view text) {
  const auto pairs = parse_edge_pairs(text);
  return normalize(pairs);
}

}  // namespace tgbench
