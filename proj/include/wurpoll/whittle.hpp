#pragma once

#include <limits>
#include <span>
#include <vector>

#include "wurpoll/estimation.hpp"

namespace wurpoll {

// Knobs of the index policy. eta is the fairness window in steps (infinity
// disables it); pdr_weighting scales the index by the link-quality estimate
// so a dead link is never worth polling.
struct WhittleConfig {
  double lambda = 0.0;  // activation penalty (initial value in dynamic mode)
  double eta = std::numeric_limits<double>::infinity();
  bool pdr_weighting = true;
  bool dynamic_lambda = true;

  void validate() const;
};

struct NodeIndex {
  double w = 0.0;         // index value used for selection
  double c = 0.0;         // activation threshold of the underlying arm
  bool fairness_due = false;
};

struct IndexSnapshot {
  std::vector<NodeIndex> nodes;
  int size() const { return static_cast<int>(nodes.size()); }
};

// Closed-form activation threshold: the AoII one step ahead if left unpolled.
// Polling is worth a penalty up to c; it grows without bound while the rate
// of change is nonzero, and a static arm never becomes worth activating.
double aoii_threshold(const SinkRecord& record, long t);

// Index value: the threshold, optionally weighted by the estimated delivery
// probability (expected one-step AoII reduction).
double whittle_index(const SinkRecord& record, long t, const WhittleConfig& cfg);

IndexSnapshot make_snapshot(std::span<const SinkRecord> records, long t,
                            const WhittleConfig& cfg);

// Online penalty calibration: when more than m arms clear the current
// penalty, raise it to the m-th largest threshold (ties broken by node id).
// The penalty never decreases.
double dynamic_penalty_update(std::span<const double> thresholds, double lambda,
                              int m);

// Threshold policy: the m highest-index arms among those with w >= lambda,
// fewer when the eligible set is smaller. Ties prefer the lowest node id.
// The decision is returned in ascending id order.
std::vector<int> select_waoii(const IndexSnapshot& snapshot, double lambda, int m);

struct FairSelection {
  std::vector<int> decision;  // ascending ids
  std::vector<int> base;      // the selection fairness deviated from
  bool overflow = false;      // more fairness violators than slots
};

// Fairness-constrained selection. With no violators this is exactly
// select_waoii. Otherwise the unconstrained top-m is taken (the penalty
// filter does not apply to replacement slots) and its lowest-index members
// are replaced by the violators, highest index first. When the violators
// alone exceed m, the m highest-index violators are served.
FairSelection select_fwaoii(const IndexSnapshot& snapshot, double lambda, int m);

struct LossBound {
  double actual = 0.0;
  double bound = 0.0;
};

// Per-step optimality loss of a fairness-constrained decision against the
// unconstrained one, with the replacement-gap bound it must respect.
LossBound fairness_loss_bound(const IndexSnapshot& snapshot,
                              std::span<const int> decision_star,
                              std::span<const int> decision_fair);

}  // namespace wurpoll
