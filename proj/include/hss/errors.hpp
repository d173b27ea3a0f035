#pragma once

#include <stdexcept>
#include <string>

namespace hss {

// Error taxonomy shared across the library. Each maps to a stable CLI exit
// code (see tools/hss.cpp).
struct InvalidCut : std::runtime_error {
  explicit InvalidCut(const std::string& msg) : std::runtime_error(msg) {}
};

struct NotASubgraph : std::runtime_error {
  explicit NotASubgraph(const std::string& msg) : std::runtime_error(msg) {}
};

struct TooLarge : std::runtime_error {
  explicit TooLarge(const std::string& msg) : std::runtime_error(msg) {}
};

struct NoCut : std::runtime_error {
  explicit NoCut(const std::string& msg) : std::runtime_error(msg) {}
};

struct IncompatibleSketches : std::runtime_error {
  explicit IncompatibleSketches(const std::string& msg) : std::runtime_error(msg) {}
};

// Probabilistic recovery ran out of usable repetitions. Not a bug: the
// caller decides whether to retry with a fresh seed.
struct RecoveryFailure : std::runtime_error {
  explicit RecoveryFailure(const std::string& msg) : std::runtime_error(msg) {}
};

struct DeletionBudgetExceeded : std::runtime_error {
  explicit DeletionBudgetExceeded(const std::string& msg) : std::runtime_error(msg) {}
};

struct MalformedInput : std::runtime_error {
  explicit MalformedInput(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace hss
