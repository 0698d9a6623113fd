#include <gtest/gtest.h>

#include <vector>

#include "support/brute_force.hpp"
#include "support/graphs.hpp"
#include "tgbench/graph.hpp"

namespace tgbench {
namespace {

using testing::complete;
using testing::path;
using testing::star;

TEST(Normalize, RelabelsByAscendingOriginalLabel) {
  const std::vector<RawEdge> raw{{3, 1}, {2, 3}};
  const auto g = normalize(raw);
  EXPECT_EQ(g.node_count(), 3u);
  EXPECT_EQ(g.edges(), (std::vector<Edge>{{0, 2}, {1, 2}}));
}

TEST(Normalize, CollapsesDuplicateAndReversedPairs) {
  const std::vector<RawEdge> raw{{0, 1}, {1, 0}, {0, 1}};
  const auto g = normalize(raw);
  EXPECT_EQ(g.node_count(), 2u);
  EXPECT_EQ(g.edges(), (std::vector<Edge>{{0, 1}}));
}

TEST(Normalize, RejectsSelfLoopNamingThePair) {
  const std::vector<RawEdge> raw{{5, 5}};
  try {
    normalize(raw);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("(5, 5)"), std::string::npos) << e.what();
  }
}

TEST(Normalize, RejectsEmptyInput) {
  EXPECT_THROW(normalize(std::vector<RawEdge>{}), DataError);
}

TEST(Normalize, HandlesNegativeAndSparseLabels) {
  const std::vector<RawEdge> raw{{-7, 100}, {100, 42}};
  const auto g = normalize(raw);
  EXPECT_EQ(g.node_count(), 3u);
  EXPECT_EQ(g.edges(), (std::vector<Edge>{{0, 2}, {1, 2}}));
}

TEST(Normalize, IsIdempotentThroughText) {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<RawEdge> raw;
    const int m = 1 + static_cast<int>(rng.uniform_int(0, 25));
    for (int i = 0; i < m; ++i) {
      auto a = rng.uniform_int(-50, 50);
      auto b = rng.uniform_int(-50, 50);
      if (a == b) ++b;
      raw.emplace_back(a, b);
    }
    const auto once = normalize(raw);
    const auto twice = parse_edge_list(render_edge_list(once));
    EXPECT_EQ(once, twice);
    EXPECT_EQ(render_edge_list(once), render_edge_list(twice));
  }
}

TEST(Graph, AdjacencyMatchesEdgeSet) {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = testing::random_graph(9, 0.4, rng);
    std::size_t total = 0;
    for (NodeId v = 0; v < g.node_count(); ++v) {
      auto adj = g.neighbors(v);
      EXPECT_TRUE(std::is_sorted(adj.begin(), adj.end()));
      for (NodeId w : adj) {
        EXPECT_NE(v, w);
        EXPECT_TRUE(g.has_edge(w, v));
      }
      total += adj.size();
    }
    EXPECT_EQ(total, 2 * g.edge_count());
  }
}

TEST(Graph, FromEdgesRejectsOutOfRangeIds) {
  EXPECT_THROW(Graph::from_edges(2, {{0, 2}}), DataError);
  EXPECT_THROW(Graph::from_edges(0, {}), DataError);
}

TEST(IsConnected, NamedCases) {
  EXPECT_TRUE(is_connected(path(3)));
  EXPECT_FALSE(is_connected(Graph::from_edges(3, {{0, 1}})));
  EXPECT_TRUE(is_connected(Graph::from_edges(1, {})));
}

TEST(IsConnected, AgreesWithTransitiveClosure) {
  SplitMix64 rng(99);
  int connected = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, 7));
    const auto g = testing::random_graph(n, rng.uniform(0.05, 0.7), rng);
    const bool expect = testing::brute_connected(g);
    connected += expect;
    ASSERT_EQ(is_connected(g), expect) << render_edge_list(g);
  }
  // Both outcomes must actually be exercised.
  EXPECT_GT(connected, 200);
  EXPECT_LT(connected, 1800);
}

TEST(DegreeSequence, NamedCases) {
  EXPECT_EQ(degree_sequence(complete(4)), (std::vector<std::size_t>{3, 3, 3, 3}));
  EXPECT_EQ(degree_sequence(path(4)), (std::vector<std::size_t>{1, 2, 2, 1}));
  EXPECT_EQ(degree_sequence(star(4)), (std::vector<std::size_t>{3, 1, 1, 1}));
}

TEST(EdgeListText, CanonicalFormat) {
  EXPECT_EQ(render_edge_list(Graph::from_edges(2, {{0, 1}})), "0 1\n");
  EXPECT_EQ(render_edge_list(complete(3)), "0 1\n0 2\n1 2\n");
}

TEST(EdgeListText, ParseErrorsNameTheLine) {
  try {
    parse_edge_list("0 1\n1 x\n");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_edge_list("0 1 2\n"), DataError);
  EXPECT_THROW(parse_edge_list("3\n"), DataError);
}

TEST(Relabel, PreservesStructure) {
  const auto g = path(4);
  const std::vector<NodeId> perm{3, 2, 1, 0};
  const auto h = relabel(g, perm);
  EXPECT_EQ(h, g);  // a path reversed is the same path
  const std::vector<NodeId> swap01{1, 0, 2, 3};
  EXPECT_EQ(relabel(g, swap01).edges(), (std::vector<Edge>{{0, 1}, {0, 2}, {2, 3}}));
}

}  // namespace
}  // namespace tgbench
