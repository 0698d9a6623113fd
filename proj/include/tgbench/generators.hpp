#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tgbench/error.hpp"
#include "tgbench/graph.hpp"
#include "tgbench/random.hpp"

namespace tgbench {

enum class Family : std::uint8_t { ER = 0, BA = 1, WS = 2 };

inline constexpr Family kFamilies[] = {Family::ER, Family::BA, Family::WS};

constexpr std::string_view family_name(Family f) noexcept {
  switch (f) {
    case Family::ER: return "ER";
    case Family::BA: return "BA";
    case Family::WS: return "WS";
  }
  return "?";
}

inline Family parse_family(std::string_view s) {
  for (Family f : kFamilies)
    if (family_name(f) == s) return f;
  throw DataError("unknown generator family '" + std::string(s) + "'");
}

enum class Split : std::uint8_t { Train = 0, Test = 1 };

constexpr std::string_view split_name(Split s) noexcept {
  return s == Split::Train ? "train" : "test";
}

inline Split parse_split(std::string_view s) {
  if (s == "train") return Split::Train;
  if (s == "test") return Split::Test;
  throw DataError("unknown split '" + std::string(s) + "'");
}

/// Generator family plus its sampled parameters. Only the fields belonging to
/// `family` are meaningful: p for ER, m for BA, k and beta for WS.
struct GenParams {
  Family family = Family::ER;
  std::size_t n = 0;
  double p = 0.0;
  std::size_t m = 0;
  std::size_t k = 0;
  double beta = 0.0;
  std::uint64_t seed = 0;

  friend bool operator==(const GenParams&, const GenParams&) = default;
};

// Corpus parameter ranges.
inline constexpr std::size_t kMinNodes = 20;
inline constexpr std::size_t kMaxNodes = 30;
inline constexpr double kErUpperP = 0.35;
inline constexpr double kErThresholdOffset = 0.01;
inline constexpr std::size_t kBaMaxM = 6;
inline constexpr std::size_t kWsMaxK = 12;
inline constexpr double kWsMinBeta = 0.05;
inline constexpr double kWsMaxBeta = 0.35;

inline constexpr std::size_t kDefaultMaxAttempts = 10'000;

inline double er_min_p(std::size_t n) {
  return std::log(static_cast<double>(n)) / static_cast<double>(n) + kErThresholdOffset;
}
inline std::size_t ba_max_m(std::size_t n) { return std::min(kBaMaxM, n - 1); }
inline std::size_t ws_max_k(std::size_t n) { return std::min(n - 2, kWsMaxK); }

/// True when `params` lies inside the corpus ranges for its family.
inline bool in_corpus_range(const GenParams& params) {
  const auto n = params.n;
  if (n < kMinNodes || n > kMaxNodes) return false;
  switch (params.family) {
    case Family::ER: return params.p >= er_min_p(n) && params.p <= kErUpperP;
    case Family::BA: return params.m >= 1 && params.m <= ba_max_m(n);
    case Family::WS:
      return params.k % 2 == 0 && params.k >= 2 && params.k <= ws_max_k(n) &&
             params.beta >= kWsMinBeta && params.beta <= kWsMaxBeta;
  }
  return false;
}

namespace detail {
// Stream tags keep parameter draws and graph draws on unrelated seeds.
inline constexpr std::uint64_t kParamStream = 0x7061'7261'6d73ULL;  // "params"
inline constexpr std::uint64_t kGraphStream = 0x6772'6170'6873ULL;  // "graphs"
}  // namespace detail

/// Slot seed derived from (master_seed, split, family, index).
constexpr std::uint64_t slot_seed(std::uint64_t master_seed, Split split, Family family,
                                  std::size_t index) noexcept {
  return derive_seed({master_seed, static_cast<std::uint64_t>(split),
                      static_cast<std::uint64_t>(family), static_cast<std::uint64_t>(index)});
}

/// Seed used by generation attempt `attempt` (0-based) of a slot.
constexpr std::uint64_t attempt_seed(std::uint64_t slot, std::size_t attempt) noexcept {
  return derive_seed({slot, detail::kGraphStream, static_cast<std::uint64_t>(attempt)});
}

/// Draws the parameters of one corpus slot: n uniform on [20, 30], then the
/// family parameters uniform on their ranges (k uniform over the even values).
inline GenParams sample_params(Family family, std::uint64_t master_seed, Split split,
                               std::size_t index) {
  const std::uint64_t slot = slot_seed(master_seed, split, family, index);
  SplitMix64 rng(derive_seed({slot, detail::kParamStream}));

  GenParams params;
  params.family = family;
  params.seed = slot;
  params.n = static_cast<std::size_t>(rng.uniform_int(kMinNodes, kMaxNodes));
  switch (family) {
    case Family::ER:
      params.p = rng.uniform(er_min_p(params.n), kErUpperP);
      break;
    case Family::BA:
      params.m = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(ba_max_m(params.n))));
      break;
    case Family::WS: {
      const auto half_max = static_cast<std::int64_t>(ws_max_k(params.n) / 2);
      params.k = 2 * static_cast<std::size_t>(rng.uniform_int(1, half_max));
      params.beta = rng.uniform(kWsMinBeta, kWsMaxBeta);
      break;
    }
  }
  return params;
}

/// Erdős–Rényi G(n, p): pairs visited in lexicographic order, each kept when
/// its uniform draw falls below p.
inline Graph generate_er(std::size_t n, double p, std::uint64_t seed) {
  if (n == 0) throw DataError("ER: n must be positive");
  if (!(p > 0.0 && p < 1.0)) throw DataError("ER: p must lie in (0, 1)");
  SplitMix64 rng(seed);
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (rng.uniform01() < p) edges.push_back({u, v});
  return Graph::from_edges(n, std::move(edges));
}

/// Barabási–Albert growth from a star on m+1 nodes (node m joined to 0..m-1).
/// Every later node attaches to m distinct earlier nodes, each picked with
/// probability proportional to current degree among the not-yet-picked ones.
/// Always yields exactly m*(n-m) edges.
inline Graph generate_ba(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (m < 1 || m + 1 > n) throw DataError("BA: need 1 <= m <= n-1");
  SplitMix64 rng(seed);
  std::vector<Edge> edges;
  edges.reserve(m * (n - m));
  std::vector<std::uint64_t> degree(n, 0);
  for (NodeId v = 0; v < m; ++v) {
    edges.push_back({v, static_cast<NodeId>(m)});
    ++degree[v];
  }
  degree[m] = m;

  std::vector<char> picked(n, 0);
  std::vector<NodeId> targets;
  for (auto v = static_cast<NodeId>(m + 1); v < n; ++v) {
    targets.clear();
    std::uint64_t pool = 0;
    for (NodeId w = 0; w < v; ++w) pool += degree[w];
    for (std::size_t j = 0; j < m; ++j) {
      const double r = rng.uniform01() * static_cast<double>(pool);
      double acc = 0.0;
      NodeId choice = v;
      NodeId last = v;
      for (NodeId w = 0; w < v; ++w) {
        if (picked[w]) continue;
        last = w;
        acc += static_cast<double>(degree[w]);
        if (r < acc) {
          choice = w;
          break;
        }
      }
      if (choice == v) choice = last;  // r landed on the rounding edge of the pool
      picked[choice] = 1;
      pool -= degree[choice];
      targets.push_back(choice);
    }
    for (NodeId t : targets) {
      picked[t] = 0;
      edges.push_back({t, v});
      ++degree[t];
    }
    degree[v] = m;
  }
  return Graph::from_edges(n, std::move(edges));
}

/// Watts–Strogatz: ring lattice joining each node to its k/2 nearest
/// neighbours per side, then each lattice edge (u, u+d) is visited with d
/// outer and u inner and, with probability beta, replaced by (u, w) where w is
/// uniform over nodes that are neither u nor already adjacent to u. A node
/// adjacent to every other node keeps its edge. Edge count stays n*k/2.
inline Graph generate_ws(std::size_t n, std::size_t k, double beta, std::uint64_t seed) {
  if (k % 2 != 0 || k < 2 || k + 1 > n) throw DataError("WS: need even k with 2 <= k <= n-1");
  if (!(beta >= 0.0 && beta <= 1.0)) throw DataError("WS: beta must lie in [0, 1]");
  SplitMix64 rng(seed);
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  auto link = [&](std::size_t a, std::size_t b, char on) { adj[a][b] = adj[b][a] = on; };
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t d = 1; d <= k / 2; ++d) link(u, (u + d) % n, 1);

  std::vector<std::size_t> candidates;
  candidates.reserve(n);
  for (std::size_t d = 1; d <= k / 2; ++d) {
    for (std::size_t u = 0; u < n; ++u) {
      if (rng.uniform01() >= beta) continue;
      const std::size_t v = (u + d) % n;
      // An earlier rewire may already have removed this lattice edge.
      if (!adj[u][v]) continue;
      candidates.clear();
      for (std::size_t w = 0; w < n; ++w)
        if (w != u && !adj[u][w]) candidates.push_back(w);
      if (candidates.empty()) continue;
      const auto pick = static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(candidates.size()) - 1));
      link(u, v, 0);
      link(u, candidates[pick], 1);
    }
  }

  std::vector<Edge> edges;
  edges.reserve(n * k / 2);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (adj[u][v]) edges.push_back({u, v});
  return Graph::from_edges(n, std::move(edges));
}

/// Builds one graph from `params` with the given seed, no connectivity check.
inline Graph generate(const GenParams& params, std::uint64_t seed) {
  switch (params.family) {
    case Family::ER: return generate_er(params.n, params.p, seed);
    case Family::BA: return generate_ba(params.n, params.m, seed);
    case Family::WS: return generate_ws(params.n, params.k, params.beta, seed);
  }
  throw DataError("unknown family");
}

inline std::string describe(const GenParams& params) {
  std::string s = std::string(family_name(params.family)) + "(n=" + std::to_string(params.n);
  switch (params.family) {
    case Family::ER: s += ", p=" + std::to_string(params.p); break;
    case Family::BA: s += ", m=" + std::to_string(params.m); break;
    case Family::WS:
      s += ", k=" + std::to_string(params.k) + ", beta=" + std::to_string(params.beta);
      break;
  }
  return s + ", seed=" + std::to_string(params.seed) + ")";
}

struct ConnectedDraw {
  Graph graph;
  std::size_t attempts = 0;
};

/// Redraws the whole graph with a fresh attempt seed until it is connected.
/// Disconnected draws are discarded, never repaired.
inline ConnectedDraw generate_connected(const GenParams& params,
                                        std::size_t max_attempts = kDefaultMaxAttempts) {
  if (max_attempts == 0) throw DataError("max_attempts must be at least 1");
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    Graph g = generate(params, attempt_seed(params.seed, attempt));
    if (is_connected(g)) return {std::move(g), attempt + 1};
  }
  throw GenerationError("no connected graph after " + std::to_string(max_attempts) +
                        " attempts for " + describe(params));
}

struct CorpusSpec {
  std::uint64_t master_seed = 0;
  std::size_t train_count = 1200;
  std::size_t test_count = 120;

  void validate() const {
    if (train_count % 3 != 0 || test_count % 3 != 0)
      throw DataError("train and test counts must be divisible by 3");
    if (test_count == 0) throw DataError("test split must not be empty");
  }

  std::size_t count(Split s) const { return s == Split::Train ? train_count : test_count; }
};

}  // namespace tgbench
