#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wurpoll/estimation.hpp"
#include "wurpoll/steplog.hpp"

namespace wurpoll {

// Distance-based age of incorrect information: elapsed time since the last
// update scaled by the magnitude of the last received rate of change.
double aoii(const SinkRecord& record, long t);

// One-step evolution: a successful poll resets to zero, anything else grows
// to (t+1-u)*|x2(u)|. success without polled is a contract violation.
double aoii_next(const SinkRecord& record, long t, bool polled, bool success);

// Instantaneous scheduling cost: sum of per-node AoII plus lambda per poll.
// The reward used for learning comparisons is its negation.
double step_cost(std::span<const double> aoii_values,
                 std::span<const std::uint8_t> actions, double lambda);

double rmse(std::span<const double> truth, std::span<const double> estimate);

// Battery model. Energies are millijoules; omega_tx and omega_wake are the
// per-step transmission-attempt and wake-up frequencies used when the model
// is evaluated directly (measured runs supply per-node frequencies instead).
struct EnergyModel {
  double e_tx = 50.0;
  double e_sense = 10.0;
  double e_wake = 10.0;
  double e_sleep = 1.0;
  double e_max = 162'000'000.0;  // 162 kJ
  double omega_tx = 0.0;
  double omega_wake = 0.0;

  void validate() const;
};

// Expected steps until the battery is exhausted.
double lifetime_steps(const EnergyModel& model);

// Average over nodes with measured per-node frequencies. Retry attempts all
// cost transmission energy, so omega_tx may exceed the wake-up frequency.
double lifetime_steps(const EnergyModel& model, std::span<const double> omega_tx,
                      std::span<const double> omega_wake);

double lifetime_years(double steps, double step_seconds);

// Percentage of polls landing in each category; sums to 100 when any poll
// was issued. Every node must be mapped.
std::vector<double> polling_distribution(std::span<const StepLog> logs,
                                         std::span<const int> category_of,
                                         int categories);
std::vector<double> polling_distribution(std::span<const long> polls_per_node,
                                         std::span<const int> category_of,
                                         int categories);

// Per-policy aggregate of one run, serialized to summary.json.
struct RunSummary {
  std::string policy;
  std::string config_hash;
  long horizon = 0;
  int node_count = 0;
  int m = 0;
  std::uint64_t seed = 0;

  std::vector<long> polls_per_node;
  std::vector<long> attempts_per_node;
  long total_polls = 0;
  long total_packets = 0;
  long successful_polls = 0;

  double mean_aoii = 0.0;
  double mean_reward = 0.0;
  std::vector<double> rmse_per_node;
  double rmse_overall = 0.0;

  double lifetime_in_steps = 0.0;
  double lifetime_in_years = 0.0;

  std::vector<double> polls_per_category_pct;
  long fairness_overflow_events = 0;
  long aoii_clamp_events = 0;
  double lambda_final = 0.0;
};

}  // namespace wurpoll
