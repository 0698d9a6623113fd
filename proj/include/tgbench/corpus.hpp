#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tgbench/error.hpp"
#include "tgbench/generators.hpp"
#include "tgbench/graph.hpp"
#include "tgbench/metrics.hpp"

namespace tgbench {

using ordered_json = nlohmann::ordered_json;

inline constexpr std::string_view kToolVersion = "1.0.0";
inline constexpr std::string_view kCorpusFormatVersion = "tgbench-corpus-v1";
inline constexpr std::string_view kPromptVersion = "tgbench-prompt-v1";

// ---------------------------------------------------------------------------
// File helpers

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("write failed for " + path.string());
}

// FNV-1a, 64-bit. Used as a content fingerprint for provenance only.
constexpr std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

// ---------------------------------------------------------------------------
// Records

struct GraphRecord {
  std::string id;
  Split split = Split::Train;
  std::size_t index = 0;
  GenParams params;
  std::size_t attempts = 0;
  std::string edge_list_path;  // relative to the corpus root
  Graph graph;
  MetricsRecord metrics;  // rounded to kStoragePrecision

  friend bool operator==(const GraphRecord&, const GraphRecord&) = default;
};

inline std::string make_graph_id(Split split, Family family, std::size_t index) {
  return std::string(split_name(split)) + "-" + std::string(family_name(family)) + "-" +
         std::to_string(index);
}

struct CorpusManifest {
  std::uint64_t master_seed = 0;
  std::string tool_version{kToolVersion};
  int rounding_precision = kStoragePrecision;
  std::string prompt_version{kPromptVersion};
  std::size_t train_count = 0;
  std::size_t test_count = 0;
  std::vector<GraphRecord> train;
  std::vector<GraphRecord> test;

  const std::vector<GraphRecord>& split(Split s) const { return s == Split::Train ? train : test; }
  std::vector<GraphRecord>& split(Split s) { return s == Split::Train ? train : test; }

  std::map<std::string, std::size_t> family_counts(Split s) const {
    std::map<std::string, std::size_t> counts;
    for (Family f : kFamilies) counts[std::string(family_name(f))] = 0;
    for (const auto& r : split(s)) ++counts[std::string(family_name(r.params.family))];
    return counts;
  }

  friend bool operator==(const CorpusManifest&, const CorpusManifest&) = default;
};

/// Generates every slot of `spec` in (split, family, index) order: parameters
/// are drawn once per slot, the graph is redrawn until connected, and gold
/// metrics are computed and rounded for storage.
inline CorpusManifest build_corpus(const CorpusSpec& spec,
                                   std::size_t max_attempts = kDefaultMaxAttempts) {
  spec.validate();
  CorpusManifest manifest;
  manifest.master_seed = spec.master_seed;
  manifest.train_count = spec.train_count;
  manifest.test_count = spec.test_count;
  for (Split split : {Split::Train, Split::Test}) {
    const std::size_t per_family = spec.count(split) / 3;
    auto& records = manifest.split(split);
    records.reserve(spec.count(split));
    for (Family family : kFamilies) {
      for (std::size_t i = 0; i < per_family; ++i) {
        GraphRecord r;
        r.id = make_graph_id(split, family, i);
        r.split = split;
        r.index = i;
        r.params = sample_params(family, spec.master_seed, split, i);
        auto draw = generate_connected(r.params, max_attempts);
        r.graph = std::move(draw.graph);
        r.attempts = draw.attempts;
        r.edge_list_path = std::string(split_name(split)) + "/" + r.id + ".edges";
        r.metrics = round_for_storage(compute_metrics(r.graph));
        records.push_back(std::move(r));
      }
    }
  }
  return manifest;
}

// ---------------------------------------------------------------------------
// Rendering

/// Fixed-point with kStoragePrecision decimals, trailing zeros trimmed but at
/// least one fractional digit kept: 1.0, 0.5, 0.166667.
inline std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", kStoragePrecision, x);
  std::string s = buf;
  if (s == "-0.000000") s = "0.000000";
  while (s.size() > 1 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
  return s;
}

inline std::string render_graph_text(const Graph& g) { return render_edge_list(g); }

namespace detail {
// One-line definitions shown next to each field name in the prompt. None of
// them mentions another field's identifier.
inline constexpr std::array<std::string_view, kFieldCount> kFieldHelp = {
    "fraction of possible edges present, 2|E| / (n(n-1))",
    "smallest node degree (integer)",
    "mean node degree",
    "largest node degree (integer)",
    "population standard deviation of node degrees",
    "number of distinct 3-cliques (integer)",
    "mean local clustering coefficient over all nodes, 0 for nodes of degree < 2",
    "3 x triangles / number of connected triples",
    "mean hop distance over all ordered pairs of distinct nodes",
    "largest hop distance between any two nodes (integer)",
    "minimum number of colors in a proper vertex coloring (integer)",
    "mean of 1/distance over all ordered pairs of distinct nodes",
};
}  // namespace detail

/// Deterministic prompt: instructions, the schema with one-line definitions,
/// then the edge list.
inline std::string render_prompt(const Graph& g) {
  std::string out;
  out += "You are given an undirected, unweighted, connected graph as an edge list.\n";
  out += "Nodes are numbered 0 to " + std::to_string(g.node_count() - 1) + " (" +
         std::to_string(g.node_count()) + " nodes, " + std::to_string(g.edge_count()) +
         " edges).\n";
  out += "Compute its structural parameters.\n";
  out += "Return only a JSON object matching a fixed schema, with no other text.\n";
  out += "\nSchema (all values numeric):\n";
  for (std::size_t i = 0; i < kFieldCount; ++i) {
    out += "- ";
    out += kFieldNames[i];
    out += ": ";
    out += detail::kFieldHelp[i];
    out += '\n';
  }
  out += "\nEdge list (one \"u v\" pair per line):\n";
  out += render_graph_text(g);
  return out;
}

/// Gold completion: one-line JSON object, schema order, reals at storage
/// precision, integers unquoted.
inline std::string render_completion(const MetricsRecord& m) {
  const auto vals = m.values();
  std::string out = "{";
  for (std::size_t i = 0; i < kFieldCount; ++i) {
    if (i) out += ',';
    out += '"';
    out += kFieldNames[i];
    out += "\":";
    out += kFieldIsInteger[i] ? std::to_string(std::llround(vals[i])) : format_real(vals[i]);
  }
  out += '}';
  return out;
}

// ---------------------------------------------------------------------------
// JSON mapping

inline ordered_json metrics_to_json(const MetricsRecord& m) {
  ordered_json j = ordered_json::object();
  const auto vals = m.values();
  for (std::size_t i = 0; i < kFieldCount; ++i) {
    const std::string key(kFieldNames[i]);
    if (kFieldIsInteger[i]) {
      j[key] = std::llround(vals[i]);
    } else {
      j[key] = vals[i];
    }
  }
  return j;
}

inline MetricsRecord metrics_from_json(const nlohmann::json& j, std::string_view context) {
  std::array<double, kFieldCount> vals{};
  for (std::size_t i = 0; i < kFieldCount; ++i) {
    const std::string key(kFieldNames[i]);
    if (!j.contains(key) || !j[key].is_number()) {
      throw DataError(std::string(context) + ": metrics field '" + key + "' missing or not numeric");
    }
    vals[i] = j[key].get<double>();
  }
  return MetricsRecord::from_values(vals);
}

inline ordered_json params_to_json(const GenParams& p) {
  ordered_json j;
  j["family"] = family_name(p.family);
  j["n"] = p.n;
  switch (p.family) {
    case Family::ER: j["p"] = p.p; break;
    case Family::BA: j["m"] = p.m; break;
    case Family::WS:
      j["k"] = p.k;
      j["beta"] = p.beta;
      break;
  }
  j["seed"] = p.seed;
  return j;
}

inline GenParams params_from_json(const nlohmann::json& j) {
  GenParams p;
  p.family = parse_family(j.at("family").get<std::string>());
  p.n = j.at("n").get<std::size_t>();
  switch (p.family) {
    case Family::ER: p.p = j.at("p").get<double>(); break;
    case Family::BA: p.m = j.at("m").get<std::size_t>(); break;
    case Family::WS:
      p.k = j.at("k").get<std::size_t>();
      p.beta = j.at("beta").get<double>();
      break;
  }
  p.seed = j.at("seed").get<std::uint64_t>();
  return p;
}

inline ordered_json record_to_json(const GraphRecord& r) {
  ordered_json j;
  j["id"] = r.id;
  j["split"] = split_name(r.split);
  j["index"] = r.index;
  j["params"] = params_to_json(r.params);
  j["attempts"] = r.attempts;
  j["nodes"] = r.graph.node_count();
  j["edges"] = r.graph.edge_count();
  j["edge_list"] = r.edge_list_path;
  j["metrics"] = metrics_to_json(r.metrics);
  return j;
}

inline ordered_json manifest_to_json(const CorpusManifest& m) {
  ordered_json j;
  j["format_version"] = kCorpusFormatVersion;
  j["tool_version"] = m.tool_version;
  j["master_seed"] = m.master_seed;
  j["rounding_precision"] = m.rounding_precision;
  j["prompt_version"] = m.prompt_version;
  j["schema_fields"] = ordered_json::array();
  for (auto name : kFieldNames) j["schema_fields"].push_back(name);
  j["train_count"] = m.train_count;
  j["test_count"] = m.test_count;
  for (Split s : {Split::Train, Split::Test}) {
    ordered_json counts;
    for (const auto& [fam, c] : m.family_counts(s)) counts[fam] = c;
    j["family_counts"][std::string(split_name(s))] = counts;
  }
  for (Split s : {Split::Train, Split::Test}) {
    auto& arr = j["records"][std::string(split_name(s))];
    arr = ordered_json::array();
    for (const auto& r : m.split(s)) arr.push_back(record_to_json(r));
  }
  return j;
}

// ---------------------------------------------------------------------------
// On-disk layout
//
//   root/manifest.json
//   root/{train,test}/{id}.edges
//   root/{train,test}/{id}.meta.json

inline void write_corpus(const CorpusManifest& manifest, const std::filesystem::path& root) {
  for (Split s : {Split::Train, Split::Test}) {
    for (const auto& r : manifest.split(s)) {
      write_file(root / r.edge_list_path, render_edge_list(r.graph));
      write_file(root / split_name(s) / (r.id + ".meta.json"), record_to_json(r).dump(2) + "\n");
    }
  }
  write_file(root / "manifest.json", manifest_to_json(manifest).dump(2) + "\n");
}

struct LoadOptions {
  // Recompute every metrics record from its edge list and compare.
  bool verify_metrics = false;
};

/// Reads a corpus written by write_corpus. Every edge file must be in
/// canonical form and agree with its metadata; failures name the graph id.
inline CorpusManifest load_corpus(const std::filesystem::path& root, LoadOptions opts = {}) {
  if (!std::filesystem::is_directory(root)) {
    throw DataError("corpus directory " + root.string() + " does not exist");
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(root / "manifest.json"));
  } catch (const nlohmann::json::exception& e) {
    throw DataError("manifest.json is corrupt: " + std::string(e.what()));
  }

  CorpusManifest m;
  std::set<std::string> ids;
  try {
    if (j.at("format_version").get<std::string>() != kCorpusFormatVersion) {
      throw DataError("unsupported corpus format " + j.at("format_version").get<std::string>());
    }
    m.master_seed = j.at("master_seed").get<std::uint64_t>();
    m.tool_version = j.at("tool_version").get<std::string>();
    m.rounding_precision = j.at("rounding_precision").get<int>();
    m.prompt_version = j.at("prompt_version").get<std::string>();
    m.train_count = j.at("train_count").get<std::size_t>();
    m.test_count = j.at("test_count").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError("manifest.json is corrupt: " + std::string(e.what()));
  }

  for (Split s : {Split::Train, Split::Test}) {
    const auto& arr = j.at("records").at(std::string(split_name(s)));
    for (const auto& rj : arr) {
      const std::string id = rj.value("id", std::string("<unknown>"));
      GraphRecord r;
      try {
        r.id = id;
        r.split = parse_split(rj.at("split").get<std::string>());
        r.index = rj.at("index").get<std::size_t>();
        r.params = params_from_json(rj.at("params"));
        r.attempts = rj.at("attempts").get<std::size_t>();
        r.edge_list_path = rj.at("edge_list").get<std::string>();
        r.metrics = metrics_from_json(rj.at("metrics"), id);

        const auto meta_path = root / split_name(s) / (id + ".meta.json");
        const auto meta = nlohmann::json::parse(read_file(meta_path));
        if (meta != nlohmann::json(rj)) throw DataError("metadata file disagrees with manifest");

        const std::string text = read_file(root / r.edge_list_path);
        r.graph = parse_edge_list(text);
        if (render_edge_list(r.graph) != text) throw DataError("edge list is not in canonical form");
        if (r.graph.node_count() != rj.at("nodes").get<std::size_t>() ||
            r.graph.edge_count() != rj.at("edges").get<std::size_t>() ||
            r.graph.node_count() != r.params.n) {
          throw DataError("edge list size disagrees with metadata");
        }
      } catch (const nlohmann::json::exception& e) {
        throw DataError("graph " + id + ": " + e.what());
      } catch (const DataError& e) {
        throw DataError("graph " + id + ": " + e.what());
      }
      if (r.split != s) throw DataError("graph " + id + ": listed under the wrong split");
      if (!ids.insert(id).second) throw DataError("duplicate graph id " + id);
      if (opts.verify_metrics) {
        bool same = false;
        try {
          same = round_for_storage(compute_metrics(r.graph)) == r.metrics;
        } catch (const DataError& e) {
          throw DataError("graph " + id + ": integrity check failed, " + e.what());
        }
        if (!same) throw DataError("graph " + id + ": integrity check failed, stored metrics differ from recomputation");
      }
      m.split(s).push_back(std::move(r));
    }
  }
  if (m.train.size() != m.train_count || m.test.size() != m.test_count) {
    throw DataError("manifest record counts disagree with train_count/test_count");
  }
  return m;
}

/// Fingerprint of manifest.json, recorded in evaluation reports.
inline std::string manifest_hash(const std::filesystem::path& root) {
  return hex64(fnv1a64(read_file(root / "manifest.json")));
}

/// Prompt/completion JSONL for one split, in manifest order.
inline std::string render_jsonl(const CorpusManifest& m, Split split) {
  std::string out;
  for (const auto& r : m.split(split)) {
    ordered_json line;
    line["prompt"] = render_prompt(r.graph);
    line["completion"] = render_completion(r.metrics);
    out += line.dump();
    out += '\n';
  }
  return out;
}

}  // namespace tgbench
