#pragma once

#include <vector>

#include "wurpoll/rng.hpp"

namespace wurpoll {

// Bernoulli link with a retry budget. Per-node delivery probabilities model
// heterogeneous link quality; the targeted wake-up itself may also fail.
struct LinkModel {
  std::vector<double> pdr;         // true per-node delivery probability
  int retry_limit = 3;             // retries after the first attempt
  double wakeup_reliability = 1.0;

  static LinkModel uniform(int nodes, double rho, int retry_limit = 3,
                           double wakeup_reliability = 1.0);
  void validate() const;
};

struct PollOutcome {
  bool woke = false;
  int attempts = 0;  // 0 when the wake-up failed
  bool success = false;
};

// One polling transaction: targeted wake-up, then independent transmission
// attempts until an ACK or the retry budget is exhausted.
PollOutcome poll(const LinkModel& link, int node, Rng& rng);

}  // namespace wurpoll
