#pragma once

#include <stdexcept>
#include <string>

namespace tgbench {

// Invalid or inconsistent input data: malformed files, integrity mismatches,
// contract violations on graph inputs.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A random-graph draw could not produce a connected instance within the
// configured number of attempts.
class GenerationError : public DataError {
 public:
  using DataError::DataError;
};

// The exact coloring search exceeded its node-expansion budget.
class SearchBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Network or protocol failure while talking to a remote estimator.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tgbench
