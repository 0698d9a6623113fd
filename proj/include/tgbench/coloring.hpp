#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tgbench/error.hpp"
#include "tgbench/graph.hpp"

namespace tgbench {

inline constexpr std::uint64_t kDefaultColoringBudget = 100'000'000;

/// Largest clique found by growing a clique greedily from every vertex,
/// adding candidates in descending degree order. A lower bound on the
/// chromatic number; returns the clique members.
inline std::vector<NodeId> greedy_clique(const Graph& g) {
  const auto n = static_cast<NodeId>(g.node_count());
  std::vector<NodeId> order(n);
  for (NodeId v = 0; v < n; ++v) order[v] = v;
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId a, NodeId b) { return g.degree(a) > g.degree(b); });

  std::vector<NodeId> best;
  std::vector<NodeId> clique;
  for (NodeId seed : order) {
    clique.assign(1, seed);
    for (NodeId c : order) {
      if (c == seed) continue;
      const bool joins = std::all_of(clique.begin(), clique.end(),
                                     [&](NodeId x) { return g.has_edge(x, c); });
      if (joins) clique.push_back(c);
    }
    if (clique.size() > best.size()) best = clique;
  }
  return best;
}

/// DSATUR greedy coloring: repeatedly colour the uncoloured vertex with the
/// most distinct neighbour colours (ties: higher degree, then lower id) with
/// the smallest colour absent from its neighbourhood. Returns colours 0..k-1.
inline std::vector<std::uint32_t> dsatur_coloring(const Graph& g) {
  const auto n = g.node_count();
  constexpr auto kUncolored = ~std::uint32_t{0};
  std::vector<std::uint32_t> color(n, kUncolored);
  // seen[v][c] != 0 when some neighbour of v has colour c.
  std::vector<std::vector<char>> seen(n, std::vector<char>(n + 1, 0));
  std::vector<std::size_t> saturation(n, 0);

  for (std::size_t step = 0; step < n; ++step) {
    NodeId pick = 0;
    bool found = false;
    for (NodeId v = 0; v < n; ++v) {
      if (color[v] != kUncolored) continue;
      if (!found || saturation[v] > saturation[pick] ||
          (saturation[v] == saturation[pick] && g.degree(v) > g.degree(pick))) {
        pick = v;
        found = true;
      }
    }
    std::uint32_t c = 0;
    while (seen[pick][c]) ++c;
    color[pick] = c;
    for (NodeId w : g.neighbors(pick)) {
      if (!seen[w][c]) {
        seen[w][c] = 1;
        ++saturation[w];
      }
    }
  }
  return color;
}

inline std::size_t color_count(const std::vector<std::uint32_t>& colors) {
  if (colors.empty()) return 0;
  return static_cast<std::size_t>(*std::max_element(colors.begin(), colors.end())) + 1;
}

namespace detail {

// Backtracking k-colourability test. Vertices are chosen by saturation
// degree; a fresh colour is only ever the next unused one, and a branch dies
// as soon as some uncoloured vertex sees all k colours.
class KColoringSearch {
 public:
  KColoringSearch(const Graph& g, std::size_t k, std::uint64_t& expansions, std::uint64_t budget)
      : g_(g),
        k_(k),
        expansions_(expansions),
        budget_(budget),
        color_(g.node_count(), kNone),
        count_(g.node_count(), std::vector<std::uint32_t>(k, 0)),
        saturation_(g.node_count(), 0) {}

  bool run(const std::vector<NodeId>& precolored) {
    // Clique members must get distinct colours; fixing them up front removes
    // the colour-permutation symmetry on that clique.
    if (precolored.size() > k_) return false;
    std::uint32_t c = 0;
    for (NodeId v : precolored) assign(v, c++);
    used_ = static_cast<std::uint32_t>(precolored.size());
    return extend(g_.node_count() - precolored.size());
  }

 private:
  static constexpr std::uint32_t kNone = ~std::uint32_t{0};

  void assign(NodeId v, std::uint32_t c) {
    color_[v] = c;
    for (NodeId w : g_.neighbors(v))
      if (count_[w][c]++ == 0) ++saturation_[w];
  }

  void unassign(NodeId v) {
    const std::uint32_t c = color_[v];
    color_[v] = kNone;
    for (NodeId w : g_.neighbors(v))
      if (--count_[w][c] == 0) --saturation_[w];
  }

  bool extend(std::size_t remaining) {
    if (remaining == 0) return true;
    if (++expansions_ > budget_) {
      throw SearchBudgetExceeded("chromatic number search exceeded " + std::to_string(budget_) +
                                 " node expansions");
    }

    NodeId pick = 0;
    bool found = false;
    for (NodeId v = 0; v < g_.node_count(); ++v) {
      if (color_[v] != kNone) continue;
      if (saturation_[v] >= k_) return false;
      if (!found || saturation_[v] > saturation_[pick] ||
          (saturation_[v] == saturation_[pick] && g_.degree(v) > g_.degree(pick))) {
        pick = v;
        found = true;
      }
    }

    const std::uint32_t limit =
        std::min<std::uint32_t>(static_cast<std::uint32_t>(k_), used_ + 1);
    for (std::uint32_t c = 0; c < limit; ++c) {
      if (count_[pick][c] != 0) continue;
      const std::uint32_t saved_used = used_;
      if (c == used_) ++used_;
      assign(pick, c);
      if (extend(remaining - 1)) return true;
      unassign(pick);
      used_ = saved_used;
    }
    return false;
  }

  const Graph& g_;
  std::size_t k_;
  std::uint64_t& expansions_;
  std::uint64_t budget_;
  std::vector<std::uint32_t> color_;
  std::vector<std::vector<std::uint32_t>> count_;
  std::vector<std::size_t> saturation_;
  std::uint32_t used_ = 0;
};

}  // namespace detail

struct ChromaticResult {
  std::size_t chromatic_number = 0;
  std::size_t clique_bound = 0;
  std::size_t dsatur_bound = 0;
  std::uint64_t expansions = 0;
};

/// Exact chromatic number. The greedy clique gives a lower bound and DSATUR
/// an upper bound; each k from the lower bound up to one below the upper bound
/// is then tested for k-colourability, and the first feasible k wins.
/// Throws SearchBudgetExceeded rather than returning an approximation.
inline ChromaticResult chromatic_number_detailed(const Graph& g,
                                                 std::uint64_t budget = kDefaultColoringBudget) {
  ChromaticResult r;
  const auto clique = greedy_clique(g);
  r.clique_bound = std::max<std::size_t>(1, clique.size());
  r.dsatur_bound = color_count(dsatur_coloring(g));
  r.chromatic_number = r.dsatur_bound;
  for (std::size_t k = r.clique_bound; k < r.dsatur_bound; ++k) {
    detail::KColoringSearch search(g, k, r.expansions, budget);
    if (search.run(clique)) {
      r.chromatic_number = k;
      break;
    }
  }
  return r;
}

inline std::size_t chromatic_number(const Graph& g, std::uint64_t budget = kDefaultColoringBudget) {
  return chromatic_number_detailed(g, budget).chromatic_number;
}

}  // namespace tgbench
