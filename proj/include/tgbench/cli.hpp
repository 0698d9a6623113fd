#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tgbench/corpus.hpp"
#include "tgbench/endpoint.hpp"
#include "tgbench/error.hpp"
#include "tgbench/estimators.hpp"
#include "tgbench/evaluation.hpp"
#include "tgbench/generators.hpp"

namespace tgbench::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kTransport = 3 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string subcommand;
  std::filesystem::path corpus;
  std::filesystem::path out;
  std::filesystem::path preds;
  std::filesystem::path text_out;
  std::filesystem::path endpoint_config;
  std::filesystem::path workdir;
  std::uint64_t seed = 0;
  std::size_t train_count = 1200;
  std::size_t test_count = 120;
  std::size_t max_attempts = kDefaultMaxAttempts;
  std::string estimator = "oracle";
  std::string split = "test";
  std::size_t concurrency = 0;  // 0: estimator default
  bool check = false;
};

inline constexpr const char* kHelpFooter = R"(Corpus layout (tgbench-corpus-v1):
  <root>/manifest.json             master seed, versions, counts, all graph records
  <root>/{train,test}/<id>.edges   one "u v" edge per line, u < v, sorted, 0-indexed
  <root>/{train,test}/<id>.meta.json  generator params, attempts, gold metrics
  ids are <split>-<family>-<index>, e.g. train-ER-0

Prompt template: tgbench-prompt-v1. Report schema: tgbench-report-v1.
Exit codes: 0 ok, 1 usage error, 2 data/integrity error, 3 transport failure.)";

namespace detail {

inline void require_distinct(const std::filesystem::path& a, const std::filesystem::path& b) {
  if (!a.empty() && !b.empty() &&
      std::filesystem::weakly_canonical(a) == std::filesystem::weakly_canonical(b)) {
    throw UsageError("paths must be distinct: " + a.string());
  }
}

inline int do_generate(const RunConfig& cfg, std::ostream& out) {
  CorpusSpec spec{cfg.seed, cfg.train_count, cfg.test_count};
  try {
    spec.validate();
  } catch (const DataError& e) {
    throw UsageError(e.what());
  }
  const auto started = std::chrono::steady_clock::now();
  const auto manifest = build_corpus(spec, cfg.max_attempts);
  write_corpus(manifest, cfg.out);
  const std::chrono::duration<double> took = std::chrono::steady_clock::now() - started;
  out << "generated " << manifest.train.size() << " train + " << manifest.test.size() << " test graphs in "
      << cfg.out.string() << " (" << took.count() << " s)\n";
  return kOk;
}

inline int do_stats(const RunConfig& cfg, std::ostream& out) {
  const auto corpus = load_corpus(cfg.corpus, {cfg.check});
  out << "corpus " << cfg.corpus.string() << "  seed " << corpus.master_seed << "  manifest "
      << manifest_hash(cfg.corpus) << (cfg.check ? "  (metrics verified)" : "") << "\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-6s %-3s %6s %7s %9s %9s %9s %9s %9s %10s\n", "split", "fam", "graphs",
                "n", "edges", "density", "triangles", "diameter", "chromatic", "dsatur_gap");
  out << line;
  for (Split s : {Split::Train, Split::Test}) {
    for (Family f : kFamilies) {
      std::vector<GraphRecord> group;
      for (const auto& r : corpus.split(s))
        if (r.params.family == f) group.push_back(r);
      if (group.empty()) continue;
      std::size_t n_min = SIZE_MAX, n_max = 0;
      double edges = 0, dens = 0, tri = 0, diam = 0, chrom = 0;
      for (const auto& r : group) {
        n_min = std::min(n_min, r.graph.node_count());
        n_max = std::max(n_max, r.graph.node_count());
        edges += static_cast<double>(r.graph.edge_count());
        dens += r.metrics.density;
        tri += static_cast<double>(r.metrics.triangles_total);
        diam += static_cast<double>(r.metrics.diameter);
        chrom += static_cast<double>(r.metrics.chromatic_number);
      }
      const auto k = static_cast<double>(group.size());
      const auto gap = dsatur_gap(group);
      const std::string nr = std::to_string(n_min) + "-" + std::to_string(n_max);
      std::snprintf(line, sizeof line, "%-6s %-3s %6zu %7s %9.2f %9.4f %9.2f %9.2f %9.2f %10.3f\n",
                    std::string(split_name(s)).c_str(), std::string(family_name(f)).c_str(), group.size(),
                    nr.c_str(), edges / k, dens / k, tri / k, diam / k, chrom / k, gap.mean_gap);
      out << line;
    }
  }
  return kOk;
}

inline int do_render(const RunConfig& cfg, std::ostream& out) {
  require_distinct(cfg.corpus, cfg.out);
  const auto split = parse_split(cfg.split);
  const auto corpus = load_corpus(cfg.corpus, {cfg.check});
  write_file(cfg.out, render_jsonl(corpus, split));
  out << "wrote " << corpus.split(split).size() << " prompt/completion pairs to " << cfg.out.string() << "\n";
  return kOk;
}

inline std::unique_ptr<Estimator> make_estimator(const RunConfig& cfg, const CorpusManifest& corpus,
                                                 std::size_t& concurrency) {
  if (cfg.estimator == "oracle") return std::make_unique<OracleEstimator>(corpus);
  if (cfg.estimator == "mean") return std::make_unique<MeanEstimator>(corpus.train);
  if (cfg.estimator == "heuristic") return std::make_unique<HeuristicEstimator>();
  if (cfg.estimator == "endpoint") {
    if (cfg.endpoint_config.empty()) throw UsageError("--endpoint-config is required for the endpoint estimator");
    nlohmann::json j = nlohmann::json::parse(read_file(cfg.endpoint_config), nullptr, false);
    if (j.is_discarded()) throw DataError("endpoint config is not valid JSON");
    auto config = EndpointConfig::from_json(j);
    if (concurrency == 0) concurrency = static_cast<std::size_t>(config.max_concurrency);
    return std::make_unique<EndpointEstimator>(std::move(config));
  }
  throw UsageError("unknown estimator '" + cfg.estimator + "'");
}

inline int do_predict(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  require_distinct(cfg.corpus, cfg.out);
  const auto split = parse_split(cfg.split);
  const auto corpus = load_corpus(cfg.corpus, {cfg.check});
  std::size_t concurrency = cfg.concurrency;
  auto estimator = make_estimator(cfg, corpus, concurrency);
  if (concurrency == 0) concurrency = 1;
  const auto preds = run_predictions(*estimator, corpus.split(split), concurrency);
  write_file(cfg.out, predictions_to_jsonl(preds));

  std::size_t valid = 0, transport = 0;
  for (const auto& p : preds) {
    valid += p.status == PredictionStatus::valid;
    transport += p.status == PredictionStatus::transport_error;
  }
  out << "wrote " << preds.size() << " predictions (" << valid << " valid) from " << estimator->name() << " to "
      << cfg.out.string() << "\n";
  if (transport > 0) {
    err << transport << " request(s) failed with transport errors\n";
    return kTransport;
  }
  return kOk;
}

inline int do_evaluate(const RunConfig& cfg, std::ostream& out) {
  require_distinct(cfg.preds, cfg.out);
  require_distinct(cfg.corpus, cfg.out);
  const auto corpus = load_corpus(cfg.corpus, {cfg.check});
  const auto preds = parse_predictions_jsonl(read_file(cfg.preds));
  Provenance prov;
  prov.estimator = preds.empty() ? "" : preds.front().estimator;
  prov.manifest_hash = manifest_hash(cfg.corpus);
  prov.prompt_version = corpus.prompt_version;
  const auto report = evaluate(corpus.test, preds, prov);
  const auto text = report_to_text(report);
  out << text;
  if (!cfg.out.empty()) write_file(cfg.out, report_to_json(report).dump(2) + "\n");
  if (!cfg.text_out.empty()) write_file(cfg.text_out, text);
  return kOk;
}

inline int do_selftest(const RunConfig& cfg, std::ostream& out) {
  const auto started = std::chrono::steady_clock::now();
  auto dir = cfg.workdir;
  const bool owned = dir.empty();
  if (owned) {
    dir = std::filesystem::temp_directory_path() /
          ("tgbench-selftest-" + std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
  }
  struct Cleanup {
    std::filesystem::path p;
    bool on;
    ~Cleanup() {
      std::error_code ec;
      if (on) std::filesystem::remove_all(p, ec);
    }
  } cleanup{dir, owned};

  const auto corpus_dir = dir / "corpus";
  const CorpusSpec spec{20241018, 3, 3};
  write_corpus(build_corpus(spec), corpus_dir);
  const auto corpus = load_corpus(corpus_dir, {true});

  const auto render_a = render_jsonl(corpus, Split::Train);
  const auto render_b = render_jsonl(load_corpus(corpus_dir), Split::Train);
  if (render_a != render_b) throw DataError("selftest: rendering is not deterministic");
  write_file(dir / "train.jsonl", render_a);

  const OracleEstimator oracle(corpus);
  const auto preds = run_predictions(oracle, corpus.test);
  write_file(dir / "preds.jsonl", predictions_to_jsonl(preds));
  const auto reread = parse_predictions_jsonl(read_file(dir / "preds.jsonl"));
  const auto report = evaluate(corpus.test, reread, {oracle.name(), manifest_hash(corpus_dir), corpus.prompt_version});

  bool perfect = report.validity_rate == 1.0;
  for (const auto& p : report.parameters) {
    perfect = perfect && p.smape_pct == 0.0;
    perfect = perfect && (!p.nrmse_range || *p.nrmse_range == 0.0);
    perfect = perfect && (!p.r2_accuracy_pct || *p.r2_accuracy_pct == 100.0);
    perfect = perfect && (!p.nrmse_accuracy_pct || *p.nrmse_accuracy_pct == 100.0);
  }
  out << report_to_text(report);
  const std::chrono::duration<double> took = std::chrono::steady_clock::now() - started;
  if (!perfect) throw DataError("selftest: oracle passthrough did not score perfectly");
  out << "selftest passed in " << took.count() << " s\n";
  return kOk;
}

}  // namespace detail

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  RunConfig cfg;
  CLI::App app{"tgbench: graph-parameter estimation benchmark", "tgbench"};
  app.footer(kHelpFooter);
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "Build the train/test corpus");
  gen->add_option("--seed", cfg.seed, "Master seed")->required();
  gen->add_option("--out", cfg.out, "Corpus output directory")->required();
  gen->add_option("--train", cfg.train_count, "Training graphs (multiple of 3)")->capture_default_str();
  gen->add_option("--test", cfg.test_count, "Test graphs (multiple of 3)")->capture_default_str();
  gen->add_option("--max-attempts", cfg.max_attempts, "Connectivity resampling cap per graph")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  auto* st = app.add_subcommand("stats", "Per-family corpus summary");
  st->add_option("--corpus", cfg.corpus, "Corpus directory")->required();
  st->add_flag("--check", cfg.check, "Recompute and verify every stored metrics record");

  auto* rd = app.add_subcommand("render", "Write prompt/completion JSONL for a split");
  rd->add_option("--corpus", cfg.corpus, "Corpus directory")->required();
  rd->add_option("--out", cfg.out, "Output JSONL path")->required();
  cfg.split = "train";
  rd->add_option("--split", cfg.split, "train or test")->check(CLI::IsMember({"train", "test"}))->capture_default_str();
  rd->add_flag("--check", cfg.check, "Verify stored metrics on load");

  auto* pr = app.add_subcommand("predict", "Run an estimator over a split into a predictions JSONL");
  std::string predict_split = "test";
  pr->add_option("--estimator", cfg.estimator, "oracle | mean | heuristic | endpoint")
      ->check(CLI::IsMember({"oracle", "mean", "heuristic", "endpoint"}))
      ->capture_default_str();
  pr->add_option("--corpus", cfg.corpus, "Corpus directory")->required();
  pr->add_option("--out", cfg.out, "Predictions JSONL path")->required();
  pr->add_option("--split", predict_split, "train or test")->check(CLI::IsMember({"train", "test"}))->capture_default_str();
  pr->add_option("--endpoint-config", cfg.endpoint_config, "JSON endpoint settings (endpoint estimator)");
  pr->add_option("--concurrency", cfg.concurrency, "Calls in flight (default: 1, or the endpoint's max_concurrency)");
  pr->add_flag("--check", cfg.check, "Verify stored metrics on load");

  auto* ev = app.add_subcommand("evaluate", "Score a predictions JSONL against the test split");
  ev->add_option("--corpus", cfg.corpus, "Corpus directory")->required();
  ev->add_option("--preds", cfg.preds, "Predictions JSONL")->required();
  ev->add_option("--out", cfg.out, "Report JSON path");
  ev->add_option("--text", cfg.text_out, "Also write the text table here");
  ev->add_flag("--check", cfg.check, "Verify stored metrics on load");

  auto* sf = app.add_subcommand("selftest", "generate -> render -> predict(oracle) -> evaluate on a 6-graph corpus");
  sf->add_option("--workdir", cfg.workdir, "Keep artifacts here instead of a temp directory");

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.emplace_back("tgbench");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*gen) return detail::do_generate(cfg, out);
    if (*st) return detail::do_stats(cfg, out);
    if (*rd) return detail::do_render(cfg, out);
    if (*pr) {
      cfg.split = predict_split;
      return detail::do_predict(cfg, out, err);
    }
    if (*ev) return detail::do_evaluate(cfg, out);
    if (*sf) return detail::do_selftest(cfg, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const TransportError& e) {
    err << "transport error: " << e.what() << "\n";
    return kTransport;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kData;
  } catch (const SearchBudgetExceeded& e) {
    err << "data error: " << e.what() << "\n";
    return kData;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "data error: " << e.what() << "\n";
    return kData;
  }
  err << "error: no subcommand\n";
  return kUsage;
}

}  // namespace tgbench::cli
