#pragma once

#include <array>
#include <atomic>
#include <cstddef>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "tgbench/coloring.hpp"
#include "tgbench/corpus.hpp"
#include "tgbench/error.hpp"
#include "tgbench/metrics.hpp"
#include "tgbench/stats.hpp"

namespace tgbench {

enum class PredictionStatus { valid, invalid_format, missing_field, non_numeric, transport_error };

constexpr std::string_view status_name(PredictionStatus s) noexcept {
  switch (s) {
    case PredictionStatus::valid: return "valid";
    case PredictionStatus::invalid_format: return "invalid_format";
    case PredictionStatus::missing_field: return "missing_field";
    case PredictionStatus::non_numeric: return "non_numeric";
    case PredictionStatus::transport_error: return "transport_error";
  }
  return "?";
}

inline PredictionStatus parse_status(std::string_view s) {
  for (auto st : {PredictionStatus::valid, PredictionStatus::invalid_format,
                  PredictionStatus::missing_field, PredictionStatus::non_numeric,
                  PredictionStatus::transport_error}) {
    if (status_name(st) == s) return st;
  }
  throw DataError("unknown prediction status '" + std::string(s) + "'");
}

using FieldValues = std::array<double, kFieldCount>;

/// One estimator output for one graph. `values` is present iff status is
/// valid; `detail` names the missing field or the transport failure cause.
struct PredictionRecord {
  std::string graph_id;
  std::string estimator;
  PredictionStatus status = PredictionStatus::invalid_format;
  std::optional<FieldValues> values;
  std::string detail;
  std::string raw_response;

  friend bool operator==(const PredictionRecord&, const PredictionRecord&) = default;
};

// ---------------------------------------------------------------------------
// Extraction and validation

/// First balanced `{...}` span of `text` that parses as a JSON object.
/// Candidates are tried left to right; text around the object is ignored.
inline std::optional<nlohmann::json> extract_first_json(std::string_view text) {
  for (std::size_t start = text.find('{'); start != std::string_view::npos;
       start = text.find('{', start + 1)) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    std::size_t end = std::string_view::npos;
    for (std::size_t i = start; i < text.size(); ++i) {
      const char c = text[i];
      if (in_string) {
        if (escaped) {
          escaped = false;
        } else if (c == '\\') {
          escaped = true;
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
      } else if (c == '{') {
        ++depth;
      } else if (c == '}' && --depth == 0) {
        end = i;
        break;
      }
    }
    if (end == std::string_view::npos) continue;
    auto parsed = nlohmann::json::parse(text.substr(start, end - start + 1), nullptr, false);
    if (!parsed.is_discarded() && parsed.is_object()) return parsed;
  }
  return std::nullopt;
}

struct Validation {
  PredictionStatus status = PredictionStatus::invalid_format;
  std::optional<FieldValues> values;
  std::string detail;
};

/// Strict schema check: every field present and numeric (integers and reals
/// are both accepted for any field); extra keys are ignored. Fields are
/// checked in schema order and the first failure decides the status.
inline Validation validate_prediction(const nlohmann::json& obj) {
  if (!obj.is_object()) return {PredictionStatus::invalid_format, std::nullopt, "not a JSON object"};
  FieldValues vals{};
  for (std::size_t i = 0; i < kFieldCount; ++i) {
    const std::string key(kFieldNames[i]);
    const auto it = obj.find(key);
    if (it == obj.end()) return {PredictionStatus::missing_field, std::nullopt, key};
    if (!it->is_number()) return {PredictionStatus::non_numeric, std::nullopt, key};
    vals[i] = it->get<double>();
  }
  return {PredictionStatus::valid, vals, {}};
}

inline Validation validate_response(std::string_view response) {
  const auto obj = extract_first_json(response);
  if (!obj) return {PredictionStatus::invalid_format, std::nullopt, "no JSON object found"};
  return validate_prediction(*obj);
}

// ---------------------------------------------------------------------------
// Estimator contract

/// Anything that maps a rendered prompt to a raw text response. respond() may
/// be called from several threads at once and may throw TransportError.
class Estimator {
 public:
  virtual ~Estimator() = default;
  virtual std::string name() const = 0;
  virtual std::string respond(std::string_view prompt, std::string_view graph_id) const = 0;
};

/// Runs one estimator call through extraction and validation. Transport
/// failures become a transport_error record, never an exception.
inline PredictionRecord estimate(const Estimator& estimator, std::string_view prompt,
                                 std::string_view graph_id) {
  PredictionRecord rec;
  rec.graph_id = graph_id;
  rec.estimator = estimator.name();
  try {
    rec.raw_response = estimator.respond(prompt, graph_id);
  } catch (const TransportError& e) {
    rec.status = PredictionStatus::transport_error;
    rec.detail = e.what();
    return rec;
  }
  auto v = validate_response(rec.raw_response);
  rec.status = v.status;
  rec.values = v.values;
  rec.detail = std::move(v.detail);
  return rec;
}

/// Returns the gold completion of each graph, looked up by id.
class OracleEstimator final : public Estimator {
 public:
  explicit OracleEstimator(const CorpusManifest& corpus) {
    for (Split s : {Split::Train, Split::Test})
      for (const auto& r : corpus.split(s)) gold_.emplace(r.id, r.metrics);
  }

  std::string name() const override { return "oracle"; }

  std::string respond(std::string_view, std::string_view graph_id) const override {
    const auto it = gold_.find(std::string(graph_id));
    if (it == gold_.end()) return "unknown graph id";
    return render_completion(it->second);
  }

 private:
  std::map<std::string, MetricsRecord> gold_;
};

/// Predicts the per-field mean of a reference split for every graph. Values
/// are emitted at full double precision.
class MeanEstimator final : public Estimator {
 public:
  explicit MeanEstimator(std::span<const GraphRecord> fit_on) {
    if (fit_on.empty()) throw DataError("mean baseline needs at least one graph to fit");
    std::vector<double> column(fit_on.size());
    for (std::size_t f = 0; f < kFieldCount; ++f) {
      for (std::size_t i = 0; i < fit_on.size(); ++i) column[i] = fit_on[i].metrics.values()[f];
      means_[f] = stats::mean(column);
    }
  }

  std::string name() const override { return "mean"; }

  const FieldValues& means() const noexcept { return means_; }

  std::string respond(std::string_view, std::string_view) const override {
    ordered_json j = ordered_json::object();
    for (std::size_t f = 0; f < kFieldCount; ++f) j[std::string(kFieldNames[f])] = means_[f];
    return j.dump();
  }

 private:
  FieldValues means_{};
};

/// Reads the edge list back out of a rendered prompt.
inline Graph graph_from_prompt(std::string_view prompt) {
  constexpr std::string_view kMarker = "pair per line):\n";
  const auto pos = prompt.find(kMarker);
  if (pos == std::string_view::npos) throw DataError("prompt has no edge-list block");
  return parse_edge_list(prompt.substr(pos + kMarker.size()));
}

/// Non-model reference: parses the edge list and computes every field
/// exactly except chromatic_number, which is the DSATUR colour count (an
/// upper bound).
class HeuristicEstimator final : public Estimator {
 public:
  std::string name() const override { return "heuristic"; }

  static MetricsRecord predict(const Graph& g) {
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
    m.chromatic_number = static_cast<std::int64_t>(color_count(dsatur_coloring(g)));
    m.global_efficiency = global_efficiency(dist);
    return m;
  }

  std::string respond(std::string_view prompt, std::string_view) const override {
    return render_completion(round_for_storage(predict(graph_from_prompt(prompt))));
  }
};

/// Runs `estimator` over `records` with at most `concurrency` calls in
/// flight. Output order matches `records` regardless of completion order.
inline std::vector<PredictionRecord> run_predictions(const Estimator& estimator,
                                                     std::span<const GraphRecord> records,
                                                     std::size_t concurrency = 1) {
  std::vector<PredictionRecord> out(records.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    try {
      for (std::size_t i = next++; i < records.size(); i = next++) {
        out[i] = estimate(estimator, render_prompt(records[i].graph), records[i].id);
      }
    } catch (...) {
      std::lock_guard lock(failure_mu);
      if (!failure) failure = std::current_exception();
      next = records.size();
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(concurrency, records.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

// ---------------------------------------------------------------------------
// Prediction dump (JSONL, one record per line)

inline std::string prediction_to_jsonl(const PredictionRecord& r) {
  ordered_json j;
  j["graph_id"] = r.graph_id;
  j["estimator"] = r.estimator;
  j["status"] = status_name(r.status);
  if (r.values) {
    ordered_json v = ordered_json::object();
    for (std::size_t f = 0; f < kFieldCount; ++f) v[std::string(kFieldNames[f])] = (*r.values)[f];
    j["values"] = v;
  } else {
    j["values"] = nullptr;
  }
  j["detail"] = r.detail;
  j["raw_response"] = r.raw_response;
  return j.dump() + "\n";
}

inline std::string predictions_to_jsonl(std::span<const PredictionRecord> records) {
  std::string out;
  for (const auto& r : records) out += prediction_to_jsonl(r);
  return out;
}

/// Parses a prediction dump. Only graph_id and status are required; values
/// of a valid record are re-checked against the schema.
inline std::vector<PredictionRecord> parse_predictions_jsonl(std::string_view text) {
  std::vector<PredictionRecord> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const auto where = "predictions line " + std::to_string(line_no);
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw DataError(where + ": not a JSON object");
    PredictionRecord r;
    try {
      r.graph_id = j.at("graph_id").get<std::string>();
      r.status = parse_status(j.at("status").get<std::string>());
      r.estimator = j.value("estimator", std::string{});
      r.detail = j.value("detail", std::string{});
      r.raw_response = j.value("raw_response", std::string{});
    } catch (const nlohmann::json::exception& e) {
      throw DataError(where + ": " + e.what());
    }
    if (r.status == PredictionStatus::valid) {
      const auto v = validate_prediction(j.contains("values") ? j["values"] : nlohmann::json());
      if (v.status != PredictionStatus::valid) {
        throw DataError(where + ": valid record has bad values (" + std::string(status_name(v.status)) +
                        " " + v.detail + ")");
      }
      r.values = v.values;
    }
    out.push_back(std::move(r));
  }
  return out;
}

/// DSATUR-versus-exact colour count gap over a set of graphs.
struct ColoringGap {
  std::size_t graphs = 0;
  std::size_t exact = 0;  // graphs where DSATUR already hits the optimum
  double mean_gap = 0.0;
  std::int64_t max_gap = 0;
};

inline ColoringGap dsatur_gap(std::span<const GraphRecord> records) {
  ColoringGap g;
  double total = 0.0;
  for (const auto& r : records) {
    const auto gap = static_cast<std::int64_t>(color_count(dsatur_coloring(r.graph))) -
                     r.metrics.chromatic_number;
    ++g.graphs;
    if (gap == 0) ++g.exact;
    total += static_cast<double>(gap);
    g.max_gap = std::max(g.max_gap, gap);
  }
  if (g.graphs) g.mean_gap = total / static_cast<double>(g.graphs);
  return g;
}

}  // namespace tgbench
