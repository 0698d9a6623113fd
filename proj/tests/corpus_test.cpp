#include <gtest/gtest.h>

#include <filesystem>
#include <set>

#include "support/graphs.hpp"
#include "support/temp_dir.hpp"
#include "tgbench/corpus.hpp"
#include "tgbench/estimators.hpp"

namespace tgbench {
namespace {

const CorpusManifest& mini_corpus() {
  static const CorpusManifest m = build_corpus({404, 3, 3});
  return m;
}

TEST(BuildCorpus, MinimalBalancedCorpus) {
  const auto& m = mini_corpus();
  ASSERT_EQ(m.train.size(), 3u);
  ASSERT_EQ(m.test.size(), 3u);
  for (Split s : {Split::Train, Split::Test}) {
    const auto counts = m.family_counts(s);
    for (const auto& [fam, c] : counts) EXPECT_EQ(c, 1u) << fam;
  }
  EXPECT_EQ(m.train[0].id, "train-ER-0");
  EXPECT_EQ(m.train[1].id, "train-BA-0");
  EXPECT_EQ(m.test[2].id, "test-WS-0");
  for (const auto& r : m.train) {
    EXPECT_TRUE(is_connected(r.graph));
    EXPECT_TRUE(in_corpus_range(r.params)) << describe(r.params);
    EXPECT_EQ(r.metrics, round_for_storage(compute_metrics(r.graph)));
  }
}

TEST(BuildCorpus, IsAPureFunctionOfTheSpec) {
  EXPECT_EQ(build_corpus({404, 3, 3}), mini_corpus());
  EXPECT_NE(build_corpus({405, 3, 3}).train[0].graph, mini_corpus().train[0].graph);
  EXPECT_THROW(build_corpus({1, 2, 3}), DataError);
}

TEST(RenderGraphText, Format) {
  EXPECT_EQ(render_graph_text(Graph::from_edges(2, {{0, 1}})), "0 1\n");
  EXPECT_EQ(render_graph_text(testing::complete(3)), "0 1\n0 2\n1 2\n");
  const auto g = mini_corpus().train[2].graph;
  EXPECT_EQ(parse_edge_list(render_graph_text(g)), g);
}

std::size_t occurrences(const std::string& hay, std::string_view needle) {
  std::size_t count = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++count;
  return count;
}

TEST(RenderPrompt, TemplateContract) {
  const auto tri = testing::complete(3);
  const auto p = render_prompt(tri);
  EXPECT_EQ(p, render_prompt(tri));
  EXPECT_NE(p.find("\n0 1\n"), std::string::npos);
  EXPECT_NE(p.find("Return only a JSON object matching a fixed schema"), std::string::npos);
  for (auto name : kFieldNames) {
    // Names like "density" are not substrings of one another except where a
    // longer name contains a shorter one; none of ours do.
    EXPECT_EQ(occurrences(p, name), 1u) << name;
  }
  EXPECT_TRUE(p.ends_with("0 1\n0 2\n1 2\n"));
}

TEST(RenderPrompt, FitsTheTrainingWindow) {
  // Densest corpus shapes: ER with n = 30, p = 0.35 and WS with n = 30, k = 12.
  for (const auto& g : {generate_er(30, 0.35, 1), generate_ws(30, 12, 0.2, 1), testing::complete(30)}) {
    EXPECT_LT(render_prompt(g).size(), 8000u);
  }
}

TEST(RenderCompletion, FormatAndFieldOrder) {
  const auto m = round_for_storage(compute_metrics(testing::complete(4)));
  EXPECT_EQ(render_completion(m),
            R"({"density":1.0,"degree_min":3,"degree_mean":3.0,"degree_max":3,"degree_std":0.0,)"
            R"("triangles_total":4,"average_clustering":1.0,"transitivity":1.0,)"
            R"("average_shortest_path_length":1.0,"diameter":1,"chromatic_number":4,"global_efficiency":1.0})");
  const auto p4 = round_for_storage(compute_metrics(testing::path(4)));
  const auto c = render_completion(p4);
  EXPECT_NE(c.find(R"("average_shortest_path_length":1.666667)"), std::string::npos) << c;
  EXPECT_NE(c.find(R"("global_efficiency":0.722222)"), std::string::npos) << c;
}

TEST(RenderCompletion, RoundTripsThroughValidation) {
  for (Split s : {Split::Train, Split::Test}) {
    for (const auto& r : mini_corpus().split(s)) {
      const auto v = validate_response(render_completion(r.metrics));
      ASSERT_EQ(v.status, PredictionStatus::valid);
      EXPECT_EQ(*v.values, r.metrics.values());
    }
  }
}

TEST(FormatReal, TrimsButKeepsOneDecimal) {
  EXPECT_EQ(format_real(1.0), "1.0");
  EXPECT_EQ(format_real(0.5), "0.5");
  EXPECT_EQ(format_real(1.0 / 6.0), "0.166667");
  EXPECT_EQ(format_real(-0.0), "0.0");
  EXPECT_EQ(format_real(12.25), "12.25");
}

TEST(CorpusFiles, WriteThenLoadIsIdentity) {
  testing::TempDir dir;
  write_corpus(mini_corpus(), dir.path());
  std::size_t edges = 0, metas = 0;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir.path())) {
    const auto name = e.path().filename().string();
    edges += name.ends_with(".edges");
    metas += name.ends_with(".meta.json");
  }
  EXPECT_EQ(edges, 6u);
  EXPECT_EQ(metas, 6u);
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "manifest.json"));
  EXPECT_EQ(load_corpus(dir.path(), {true}), mini_corpus());
}

TEST(CorpusFiles, RewriteIsByteIdentical) {
  testing::TempDir a, b;
  write_corpus(build_corpus({404, 3, 3}), a.path());
  write_corpus(build_corpus({404, 3, 3}), b.path());
  for (const auto& e : std::filesystem::recursive_directory_iterator(a.path())) {
    if (!e.is_regular_file()) continue;
    const auto rel = std::filesystem::relative(e.path(), a.path());
    EXPECT_EQ(read_file(e.path()), read_file(b.path() / rel)) << rel;
  }
  EXPECT_EQ(manifest_hash(a.path()), manifest_hash(b.path()));
}

TEST(CorpusFiles, TamperedEdgeFileFailsCheckedLoad) {
  testing::TempDir dir;
  write_corpus(mini_corpus(), dir.path());
  const auto& victim = mini_corpus().test[0];
  const auto path = dir.path() / victim.edge_list_path;
  auto g = victim.graph;
  // Swap one edge for a non-edge: counts stay equal, metrics change.
  auto edges = g.edges();
  Edge replacement{};
  for (NodeId u = 0; u < g.node_count() && replacement == Edge{}; ++u)
    for (NodeId v = u + 1; v < g.node_count(); ++v)
      if (!g.has_edge(u, v)) {
        replacement = {u, v};
        break;
      }
  edges.back() = replacement;
  write_file(path, render_edge_list(Graph::from_edges(g.node_count(), edges)));

  EXPECT_NO_THROW(load_corpus(dir.path()));
  try {
    load_corpus(dir.path(), {true});
    FAIL() << "expected integrity error";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find(victim.id), std::string::npos) << e.what();
  }
}

TEST(CorpusFiles, MissingOrCorruptFilesNameTheGraph) {
  testing::TempDir dir;
  write_corpus(mini_corpus(), dir.path());
  const auto& r = mini_corpus().train[1];
  std::filesystem::remove(dir.path() / r.edge_list_path);
  try {
    load_corpus(dir.path());
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find(r.id), std::string::npos) << e.what();
  }
  write_file(dir.path() / r.edge_list_path, "0 1\n0 1\n");  // not canonical
  EXPECT_THROW(load_corpus(dir.path()), DataError);
  write_file(dir.path() / "manifest.json", "{");
  EXPECT_THROW(load_corpus(dir.path()), DataError);
  EXPECT_THROW(load_corpus(dir.path() / "nope"), DataError);
}

TEST(CorpusFiles, JsonlExportParsesBackLosslessly) {
  const auto text = render_jsonl(mini_corpus(), Split::Train);
  std::istringstream in(text);
  std::string line;
  std::size_t i = 0;
  std::set<std::string> prompts;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    ASSERT_EQ(j.size(), 2u);
    const auto& r = mini_corpus().train.at(i++);
    EXPECT_EQ(j.at("prompt").get<std::string>(), render_prompt(r.graph));
    EXPECT_EQ(j.at("completion").get<std::string>(), render_completion(r.metrics));
    EXPECT_EQ(graph_from_prompt(j.at("prompt").get<std::string>()), r.graph);
    prompts.insert(j.at("prompt").get<std::string>());
  }
  EXPECT_EQ(i, 3u);
  EXPECT_EQ(prompts.size(), 3u);
}

}  // namespace
}  // namespace tgbench
