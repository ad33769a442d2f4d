#pragma once

#include <cstdint>

namespace wurpoll {

// One row per node per step. aoii, estimate and index are the pre-decision
// values so every policy is scored against the same belief state.
struct StepLog {
  long t = 0;
  int node = 0;
  std::uint8_t action = 0;
  std::uint8_t success = 0;
  int attempts = 0;
  double aoii = 0.0;
  double truth = 0.0;
  double estimate = 0.0;
  double index_w = 0.0;  // 0 for policies without an index
  double lambda = 0.0;
};

// Successfully delivered state vectors, the anchors for offline reconstruction.
struct UpdateLogRow {
  int node = 0;
  long u = 0;
  double x1 = 0.0;
  double x2 = 0.0;
};

// Optional per-step index dump behind the verbose flag.
struct IndexLogRow {
  long t = 0;
  int node = 0;
  double w = 0.0;
  double c = 0.0;
  std::uint8_t fairness = 0;
};

}  // namespace wurpoll
