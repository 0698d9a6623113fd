#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tgbench/corpus.hpp"
#include "tgbench/error.hpp"
#include "tgbench/estimators.hpp"
#include "tgbench/metrics.hpp"
#include "tgbench/stats.hpp"

namespace tgbench {

inline constexpr std::string_view kReportVersion = "tgbench-report-v1";

namespace detail {
inline void require_paired(std::span<const double> truths, std::span<const double> preds) {
  if (truths.size() != preds.size()) {
    throw DataError("truth/prediction length mismatch (" + std::to_string(truths.size()) + " vs " +
                    std::to_string(preds.size()) + ")");
  }
  if (truths.empty()) throw DataError("cannot score an empty sample");
}
}  // namespace detail

// Regression scores. std::nullopt marks a score that is undefined on the
// given truths (zero range, variance or too few samples).

/// RMSE divided by the range of the truths.
inline std::optional<double> nrmse_range(std::span<const double> truths, std::span<const double> preds) {
  detail::require_paired(truths, preds);
  const auto [lo, hi] = std::minmax_element(truths.begin(), truths.end());
  const double range = *hi - *lo;
  if (range == 0.0) return std::nullopt;
  return stats::rmse(truths, preds) / range;
}

/// Mean of 200|p - t| / (|p| + |t|), in percent; a 0/0 term counts as 0.
inline double smape(std::span<const double> truths, std::span<const double> preds) {
  detail::require_paired(truths, preds);
  double sum = 0.0;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    const double denom = std::abs(preds[i]) + std::abs(truths[i]);
    if (denom != 0.0) sum += 200.0 * std::abs(preds[i] - truths[i]) / denom;
  }
  return sum / static_cast<double>(truths.size());
}

/// 100 * max(0, R^2).
inline std::optional<double> r2_accuracy(std::span<const double> truths, std::span<const double> preds) {
  detail::require_paired(truths, preds);
  if (truths.size() < 2) return std::nullopt;
  const double mu = stats::mean(truths);
  double ss_tot = 0.0;
  for (double t : truths) ss_tot += (t - mu) * (t - mu);
  if (ss_tot == 0.0) return std::nullopt;
  const double r2 = 1.0 - stats::sum_squared_error(truths, preds) / ss_tot;
  return 100.0 * std::max(0.0, r2);
}

/// 100 * (1 - RMSE / std(truths)) with population std, floored at 0.
inline std::optional<double> nrmse_accuracy(std::span<const double> truths, std::span<const double> preds) {
  detail::require_paired(truths, preds);
  if (truths.size() < 2) return std::nullopt;
  const double sd = stats::population_std(truths);
  if (sd == 0.0) return std::nullopt;
  return std::max(0.0, 100.0 * (1.0 - stats::rmse(truths, preds) / sd));
}

struct ParameterScore {
  std::string name;
  std::size_t n_valid = 0;
  std::optional<double> nrmse_range;
  std::optional<double> smape_pct;
  std::optional<double> r2_accuracy_pct;
  std::optional<double> nrmse_accuracy_pct;
};

struct OverallScore {
  std::optional<double> nrmse_range;
  std::optional<double> smape_pct;
  std::optional<double> r2_accuracy_pct;
  std::optional<double> nrmse_accuracy_pct;
  // Parameters left out of each mean because the score was undefined.
  std::array<std::size_t, 4> undefined{};
};

struct Provenance {
  std::string estimator;
  std::string manifest_hash;
  std::string prompt_version;
};

struct EvalReport {
  std::vector<ParameterScore> parameters;
  OverallScore overall;
  std::size_t graphs = 0;
  std::size_t valid = 0;
  double validity_rate = 0.0;
  std::map<std::string, std::size_t> status_counts;
  Provenance provenance;
};

/// Scores `predictions` against the gold metrics of `gold`. Every gold graph
/// needs exactly one prediction record; invalid records are left out of the
/// score arrays and show up in validity_rate instead.
inline EvalReport evaluate(std::span<const GraphRecord> gold, std::span<const PredictionRecord> predictions,
                           Provenance provenance = {}) {
  std::map<std::string_view, const PredictionRecord*> by_id;
  for (const auto& p : predictions) {
    if (!by_id.emplace(p.graph_id, &p).second) throw DataError("duplicate prediction for graph " + p.graph_id);
  }
  std::map<std::string_view, bool> known;
  for (const auto& g : gold) known.emplace(g.id, true);
  for (const auto& p : predictions) {
    if (!known.count(p.graph_id)) throw DataError("prediction for unknown graph " + p.graph_id);
  }

  EvalReport report;
  report.provenance = std::move(provenance);
  report.graphs = gold.size();
  for (auto st : {PredictionStatus::valid, PredictionStatus::invalid_format, PredictionStatus::missing_field,
                  PredictionStatus::non_numeric, PredictionStatus::transport_error}) {
    report.status_counts[std::string(status_name(st))] = 0;
  }

  std::array<std::vector<double>, kFieldCount> truths;
  std::array<std::vector<double>, kFieldCount> preds;
  for (const auto& g : gold) {
    const auto it = by_id.find(g.id);
    if (it == by_id.end()) throw DataError("missing prediction for graph " + g.id);
    const auto& p = *it->second;
    ++report.status_counts[std::string(status_name(p.status))];
    if (p.status != PredictionStatus::valid || !p.values) continue;
    ++report.valid;
    const auto t = g.metrics.values();
    for (std::size_t f = 0; f < kFieldCount; ++f) {
      truths[f].push_back(t[f]);
      preds[f].push_back((*p.values)[f]);
    }
  }
  if (report.valid == 0) throw DataError("no valid predictions to score");
  report.validity_rate = static_cast<double>(report.valid) / static_cast<double>(report.graphs);

  std::array<std::vector<double>, 4> columns;
  for (std::size_t f = 0; f < kFieldCount; ++f) {
    ParameterScore s;
    s.name = std::string(kFieldNames[f]);
    s.n_valid = truths[f].size();
    s.nrmse_range = nrmse_range(truths[f], preds[f]);
    s.smape_pct = smape(truths[f], preds[f]);
    s.r2_accuracy_pct = r2_accuracy(truths[f], preds[f]);
    s.nrmse_accuracy_pct = nrmse_accuracy(truths[f], preds[f]);
    const std::array<std::optional<double>, 4> row{s.nrmse_range, s.smape_pct, s.r2_accuracy_pct,
                                                   s.nrmse_accuracy_pct};
    for (std::size_t c = 0; c < 4; ++c) {
      if (row[c]) {
        columns[c].push_back(*row[c]);
      } else {
        ++report.overall.undefined[c];
      }
    }
    report.parameters.push_back(std::move(s));
  }
  auto mean_or_null = [](const std::vector<double>& xs) -> std::optional<double> {
    if (xs.empty()) return std::nullopt;
    return stats::mean(xs);
  };
  report.overall.nrmse_range = mean_or_null(columns[0]);
  report.overall.smape_pct = mean_or_null(columns[1]);
  report.overall.r2_accuracy_pct = mean_or_null(columns[2]);
  report.overall.nrmse_accuracy_pct = mean_or_null(columns[3]);
  return report;
}

// ---------------------------------------------------------------------------
// Output

inline ordered_json report_to_json(const EvalReport& r) {
  auto opt = [](const std::optional<double>& x) { return x ? ordered_json(*x) : ordered_json(nullptr); };
  ordered_json j;
  j["report_version"] = kReportVersion;
  j["provenance"] = {{"estimator", r.provenance.estimator},
                     {"manifest_hash", r.provenance.manifest_hash},
                     {"prompt_version", r.provenance.prompt_version},
                     {"std_divisor", "population"},
                     {"nrmse_accuracy_floor", 0},
                     {"overall", "unweighted mean over parameters with a defined score"}};
  j["graphs"] = r.graphs;
  j["valid"] = r.valid;
  j["validity_rate"] = r.validity_rate;
  ordered_json counts = ordered_json::object();
  for (auto st : {PredictionStatus::valid, PredictionStatus::invalid_format, PredictionStatus::missing_field,
                  PredictionStatus::non_numeric, PredictionStatus::transport_error}) {
    const std::string key(status_name(st));
    counts[key] = r.status_counts.count(key) ? r.status_counts.at(key) : 0;
  }
  j["status_counts"] = counts;
  j["parameters"] = ordered_json::array();
  for (const auto& p : r.parameters) {
    j["parameters"].push_back({{"name", p.name},
                               {"n_valid", p.n_valid},
                               {"nrmse_range", opt(p.nrmse_range)},
                               {"smape_pct", opt(p.smape_pct)},
                               {"r2_accuracy_pct", opt(p.r2_accuracy_pct)},
                               {"nrmse_accuracy_pct", opt(p.nrmse_accuracy_pct)}});
  }
  j["overall"] = {{"nrmse_range", opt(r.overall.nrmse_range)},
                  {"smape_pct", opt(r.overall.smape_pct)},
                  {"r2_accuracy_pct", opt(r.overall.r2_accuracy_pct)},
                  {"nrmse_accuracy_pct", opt(r.overall.nrmse_accuracy_pct)},
                  {"undefined",
                   {{"nrmse_range", r.overall.undefined[0]},
                    {"smape_pct", r.overall.undefined[1]},
                    {"r2_accuracy_pct", r.overall.undefined[2]},
                    {"nrmse_accuracy_pct", r.overall.undefined[3]}}}};
  return j;
}

/// Aligned text table: one row per parameter in schema order, then the
/// overall mean. Undefined scores print as "n/a".
inline std::string report_to_text(const EvalReport& r) {
  auto cell = [](const std::optional<double>& x) {
    char buf[32];
    if (x) {
      std::snprintf(buf, sizeof buf, "%12.4f", *x);
    } else {
      std::snprintf(buf, sizeof buf, "%12s", "n/a");
    }
    return std::string(buf);
  };
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "estimator: %s   valid: %zu/%zu (%.2f%%)\n",
                r.provenance.estimator.empty() ? "-" : r.provenance.estimator.c_str(), r.valid, r.graphs,
                100.0 * r.validity_rate);
  out += line;
  std::snprintf(line, sizeof line, "%-30s %12s %12s %12s %12s %8s\n", "parameter", "NRMSE_range", "sMAPE(%)",
                "R2 Acc(%)", "NRMSE Acc(%)", "n");
  out += line;
  out += std::string(91, '-') + "\n";
  for (const auto& p : r.parameters) {
    std::snprintf(line, sizeof line, "%-30s %s %s %s %s %8zu\n", p.name.c_str(), cell(p.nrmse_range).c_str(),
                  cell(p.smape_pct).c_str(), cell(p.r2_accuracy_pct).c_str(), cell(p.nrmse_accuracy_pct).c_str(),
                  p.n_valid);
    out += line;
  }
  out += std::string(91, '-') + "\n";
  std::snprintf(line, sizeof line, "%-30s %s %s %s %s\n", "Overall (Mean)", cell(r.overall.nrmse_range).c_str(),
                cell(r.overall.smape_pct).c_str(), cell(r.overall.r2_accuracy_pct).c_str(),
                cell(r.overall.nrmse_accuracy_pct).c_str());
  out += line;
  return out;
}

}  // namespace tgbench
