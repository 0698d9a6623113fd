#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "tgbench/generators.hpp"

namespace tgbench {
namespace {

TEST(Random, StreamIsReproducibleAndUniformIntStaysInRange) {
  SplitMix64 a(123), b(123);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next(), b.next());
  SplitMix64 r(7);
  std::set<std::int64_t> seen;
  for (int i = 0; i < 5000; ++i) {
    const auto x = r.uniform_int(-3, 4);
    ASSERT_GE(x, -3);
    ASSERT_LE(x, 4);
    seen.insert(x);
  }
  EXPECT_EQ(seen.size(), 8u);
  for (int i = 0; i < 5000; ++i) {
    const double u = r.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Random, DerivedSeedsDependOnEveryWordAndOrder) {
  EXPECT_NE(derive_seed({1, 2, 3}), derive_seed({1, 3, 2}));
  EXPECT_NE(derive_seed({1, 2, 3}), derive_seed({1, 2, 4}));
  EXPECT_NE(slot_seed(42, Split::Train, Family::ER, 0), slot_seed(42, Split::Test, Family::ER, 0));
  EXPECT_NE(attempt_seed(5, 0), attempt_seed(5, 1));
}

TEST(SampleParams, ErLowerBoundAtTwentyNodes) {
  // ln(20)/20 + 0.01, evaluated by hand.
  EXPECT_NEAR(er_min_p(20), 0.15978661367769956, 1e-15);
  for (std::size_t i = 0; i < 3000; ++i) {
    const auto p = sample_params(Family::ER, 9, Split::Train, i);
    ASSERT_GE(p.n, 20u);
    ASSERT_LE(p.n, 30u);
    ASSERT_GE(p.p, er_min_p(p.n));
    ASSERT_LE(p.p, 0.35);
    if (p.n == 20) {
      ASSERT_GE(p.p, 0.15978);
    }
  }
}

TEST(SampleParams, WsKIsEvenAndCoversItsRangeAtTwentyNodes) {
  std::set<std::size_t> ks_at_20;
  std::set<std::size_t> ns;
  for (std::size_t i = 0; i < 4000; ++i) {
    const auto p = sample_params(Family::WS, 3, Split::Train, i);
    ASSERT_TRUE(in_corpus_range(p)) << describe(p);
    ns.insert(p.n);
    if (p.n == 20) ks_at_20.insert(p.k);
  }
  EXPECT_EQ(ks_at_20, (std::set<std::size_t>{2, 4, 6, 8, 10, 12}));
  EXPECT_EQ(ns.size(), 11u);
}

TEST(SampleParams, BaMCoversOneToSixAtTwentyNodes) {
  std::set<std::size_t> ms_at_20;
  for (std::size_t i = 0; i < 4000; ++i) {
    const auto p = sample_params(Family::BA, 3, Split::Test, i);
    ASSERT_TRUE(in_corpus_range(p)) << describe(p);
    if (p.n == 20) ms_at_20.insert(p.m);
  }
  EXPECT_EQ(ms_at_20, (std::set<std::size_t>{1, 2, 3, 4, 5, 6}));
}

TEST(SampleParams, IsAPureFunctionOfItsInputs) {
  EXPECT_EQ(sample_params(Family::WS, 1, Split::Test, 7), sample_params(Family::WS, 1, Split::Test, 7));
  EXPECT_NE(sample_params(Family::WS, 1, Split::Test, 7), sample_params(Family::WS, 2, Split::Test, 7));
}

TEST(GenerateEr, LimitsOfP) {
  const auto full = generate_er(4, std::nextafter(1.0, 0.0), 1);
  EXPECT_EQ(full.edge_count(), 6u);
  const auto empty = generate_er(4, 1e-300, 1);
  EXPECT_EQ(empty.edge_count(), 0u);
  EXPECT_FALSE(is_connected(empty));
  EXPECT_THROW(generate_er(4, 0.0, 1), DataError);
  EXPECT_THROW(generate_er(4, 1.0, 1), DataError);
}

TEST(GenerateEr, EdgeCountWithinBinomialBounds) {
  // Binomial(300, 0.2): mean 60, sd 6.93; P(30 <= X <= 90) = 0.999985.
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto g = generate_er(25, 0.2, seed);
    EXPECT_GE(g.edge_count(), 30u);
    EXPECT_LE(g.edge_count(), 90u);
  }
}

TEST(GenerateBa, BoundaryAndTreeCases) {
  const auto g = generate_ba(5, 4, 1);
  EXPECT_EQ(g.edge_count(), 4u);
  EXPECT_EQ(g.degree(4), 4u);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto t = generate_ba(4, 1, seed);
    EXPECT_EQ(t.edge_count(), 3u);
    EXPECT_TRUE(is_connected(t));
  }
  EXPECT_THROW(generate_ba(4, 4, 1), DataError);
  EXPECT_THROW(generate_ba(4, 0, 1), DataError);
}

TEST(GenerateBa, EdgeCountFormulaHoldsForEverySeed) {
  EXPECT_EQ(generate_ba(30, 6, 77).edge_count(), 144u);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    for (std::size_t n = 2; n <= 30; n += 3) {
      for (std::size_t m = 1; m < n && m <= 8; ++m) {
        const auto g = generate_ba(n, m, seed);
        ASSERT_EQ(g.edge_count(), m * (n - m)) << "n=" << n << " m=" << m;
        ASSERT_TRUE(is_connected(g));
      }
    }
  }
}

TEST(GenerateBa, PreferentialAttachmentFavoursHubs) {
  // Node m (the star centre) starts with degree m and should end far above
  // the average degree on large graphs.
  double centre = 0, mean = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto g = generate_ba(200, 2, seed);
    centre += static_cast<double>(g.degree(2));
    mean += 2.0 * static_cast<double>(g.edge_count()) / 200.0;
  }
  EXPECT_GT(centre, 3 * mean);
}

TEST(GenerateWs, PureLatticeCases) {
  const auto c6 = generate_ws(6, 2, 0.0, 5);
  EXPECT_EQ(c6.edges(), (std::vector<Edge>{{0, 1}, {0, 5}, {1, 2}, {2, 3}, {3, 4}, {4, 5}}));
  const auto k5 = generate_ws(5, 4, 0.0, 5);
  EXPECT_EQ(k5.edge_count(), 10u);
  // Saturated nodes keep their edges even when every edge is selected.
  EXPECT_EQ(generate_ws(5, 4, 1.0, 5).edge_count(), 10u);
}

TEST(GenerateWs, EdgeCountInvariantUnderRewiring) {
  EXPECT_EQ(generate_ws(20, 6, 0.3, 1).edge_count(), 60u);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    for (double beta : {0.0, 0.05, 0.35, 0.9, 1.0}) {
      for (std::size_t n : {6u, 13u, 20u, 30u}) {
        for (std::size_t k = 2; k + 2 <= n && k <= 12; k += 2) {
          ASSERT_EQ(generate_ws(n, k, beta, seed).edge_count(), n * k / 2)
              << "n=" << n << " k=" << k << " beta=" << beta;
        }
      }
    }
  }
}

TEST(GenerateWs, RewiringActuallyHappens) {
  const auto lattice = generate_ws(30, 4, 0.0, 3);
  const auto rewired = generate_ws(30, 4, 0.35, 3);
  EXPECT_NE(lattice, rewired);
  EXPECT_THROW(generate_ws(10, 3, 0.1, 1), DataError);
  EXPECT_THROW(generate_ws(4, 4, 0.1, 1), DataError);
}

TEST(GenerateConnected, LatticeAndBaSucceedFirstTry) {
  GenParams ws{Family::WS, 6, 0, 0, 2, 0.0, 1};
  const auto a = generate_connected(ws);
  EXPECT_EQ(a.attempts, 1u);
  EXPECT_EQ(a.graph.edge_count(), 6u);
  for (std::size_t i = 0; i < 100; ++i) {
    const auto p = sample_params(Family::BA, 5, Split::Train, i);
    EXPECT_EQ(generate_connected(p).attempts, 1u);
  }
}

TEST(GenerateConnected, ErAtLowerBoundConverges) {
  // p at the n = 20 lower bound sits above the ln(n)/n threshold; over 1,000
  // slots the worst case must stay far below the 10,000-attempt cap.
  std::size_t worst = 0;
  std::size_t total = 0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    GenParams p{Family::ER, 20, 0.1598, 0, 0, 0, derive_seed({s})};
    const auto d = generate_connected(p);
    ASSERT_TRUE(is_connected(d.graph));
    worst = std::max(worst, d.attempts);
    total += d.attempts;
  }
  EXPECT_LT(worst, 100u);
  // First-try failure rate measured as (total - 1000) / total is well below 1.
  EXPECT_LT(total, 5000u);
}

TEST(GenerateConnected, ExhaustionCarriesParams) {
  GenParams p{Family::ER, 20, 0.001, 0, 0, 0, 17};
  try {
    generate_connected(p, 5);
    FAIL() << "expected GenerationError";
  } catch (const GenerationError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("ER(n=20"), std::string::npos) << msg;
    EXPECT_NE(msg.find("5 attempts"), std::string::npos) << msg;
  }
  EXPECT_THROW(generate_connected(p, 0), DataError);
}

TEST(GenerateConnected, NoRepairIsApplied) {
  // The returned graph is exactly the draw for the successful attempt seed.
  const auto p = sample_params(Family::ER, 1, Split::Train, 0);
  const auto d = generate_connected(p);
  EXPECT_EQ(d.graph, generate(p, attempt_seed(p.seed, d.attempts - 1)));
  for (std::size_t a = 0; a + 1 < d.attempts; ++a) EXPECT_FALSE(is_connected(generate(p, attempt_seed(p.seed, a))));
}

TEST(CorpusSpec, RequiresBalancedCounts) {
  EXPECT_THROW((CorpusSpec{1, 4, 3}.validate()), DataError);
  EXPECT_THROW((CorpusSpec{1, 3, 0}.validate()), DataError);
  EXPECT_NO_THROW((CorpusSpec{1, 3, 3}.validate()));
}

}  // namespace
}  // namespace tgbench
