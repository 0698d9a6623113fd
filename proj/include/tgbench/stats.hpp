#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace tgbench::stats {

// Left-to-right sum over n. Every mean in the library goes through here so
// that the same inputs always give bit-identical results.
inline double mean(std::span<const double> xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

// Population (divisor n) standard deviation.
inline double population_std(std::span<const double> xs) {
  const double mu = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - mu) * (x - mu);
  return std::sqrt(ss / static_cast<double>(xs.size()));
}

inline double sum_squared_error(std::span<const double> truths, std::span<const double> preds) {
  double ss = 0.0;
  for (std::size_t i = 0; i < truths.size(); ++i) ss += (preds[i] - truths[i]) * (preds[i] - truths[i]);
  return ss;
}

inline double rmse(std::span<const double> truths, std::span<const double> preds) {
  return std::sqrt(sum_squared_error(truths, preds) / static_cast<double>(truths.size()));
}

}  // namespace tgbench::stats
