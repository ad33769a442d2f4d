#include "wurpoll/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace wurpoll {

double aoii(const SinkRecord& record, long t) {
  if (t < record.u) throw std::invalid_argument("aoii: t precedes the last update");
  return static_cast<double>(t - record.u) * std::abs(record.last.x2);
}

double aoii_next(const SinkRecord& record, long t, bool polled, bool success) {
  if (success && !polled) throw std::logic_error("aoii_next: success implies polled");
  if (polled && success) return 0.0;
  return static_cast<double>(t + 1 - record.u) * std::abs(record.last.x2);
}

double step_cost(std::span<const double> aoii_values,
                 std::span<const std::uint8_t> actions, double lambda) {
  if (aoii_values.size() != actions.size())
    throw std::invalid_argument("step_cost: mismatched lengths");
  double cost = 0.0;
  for (std::size_t i = 0; i < aoii_values.size(); ++i)
    cost += aoii_values[i] + (actions[i] ? lambda : 0.0);
  return cost;
}

double rmse(std::span<const double> truth, std::span<const double> estimate) {
  if (truth.empty()) throw std::invalid_argument("rmse: empty series");
  if (truth.size() != estimate.size())
    throw std::invalid_argument("rmse: mismatched lengths");
  double acc = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double d = truth[i] - estimate[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(truth.size()));
}

void EnergyModel::validate() const {
  if (e_tx < 0 || e_sense < 0 || e_wake < 0 || e_sleep < 0)
    throw std::invalid_argument("energy values must be >= 0");
  if (!(e_max > 0)) throw std::invalid_argument("battery capacity must be > 0");
  if (omega_tx < 0 || omega_tx > 1 || omega_wake < 0 || omega_wake > 1)
    throw std::invalid_argument("energy frequencies must lie in [0,1]");
  if (omega_tx > omega_wake)
    throw std::invalid_argument("transmission frequency cannot exceed wake-up frequency");
}

namespace {

double per_node_lifetime(const EnergyModel& m, double wt, double ww) {
  const double denom = wt * m.e_tx + ww * (m.e_sense + m.e_wake) + (1.0 - ww) * m.e_sleep;
  if (!(denom > 0.0)) throw std::invalid_argument("lifetime: non-positive energy rate");
  return m.e_max / denom;
}

}  // namespace

double lifetime_steps(const EnergyModel& model) {
  model.validate();
  return per_node_lifetime(model, model.omega_tx, model.omega_wake);
}

double lifetime_steps(const EnergyModel& model, std::span<const double> omega_tx,
                      std::span<const double> omega_wake) {
  if (omega_tx.empty() || omega_tx.size() != omega_wake.size())
    throw std::invalid_argument("lifetime: bad frequency lists");
  double acc = 0.0;
  for (std::size_t i = 0; i < omega_tx.size(); ++i)
    acc += per_node_lifetime(model, omega_tx[i], omega_wake[i]);
  return acc / static_cast<double>(omega_tx.size());
}

double lifetime_years(double steps, double step_seconds) {
  return steps * step_seconds / (365.25 * 24.0 * 3600.0);
}

std::vector<double> polling_distribution(std::span<const long> polls_per_node,
                                         std::span<const int> category_of,
                                         int categories) {
  if (polls_per_node.size() != category_of.size())
    throw std::invalid_argument("polling_distribution: map does not cover every node");
  std::vector<long> counts(categories, 0);
  long total = 0;
  for (std::size_t i = 0; i < polls_per_node.size(); ++i) {
    const int cat = category_of[i];
    if (cat < 0 || cat >= categories)
      throw std::invalid_argument("polling_distribution: unmapped node");
    counts[cat] += polls_per_node[i];
    total += polls_per_node[i];
  }
  std::vector<double> pct(categories, 0.0);
  if (total == 0) return pct;
  for (int k = 0; k < categories; ++k)
    pct[k] = 100.0 * static_cast<double>(counts[k]) / static_cast<double>(total);
  return pct;
}

std::vector<double> polling_distribution(std::span<const StepLog> logs,
                                         std::span<const int> category_of,
                                         int categories) {
  std::vector<long> polls(category_of.size(), 0);
  for (const auto& row : logs) {
    if (!row.action) continue;
    if (row.node < 0 || row.node >= static_cast<int>(polls.size()))
      throw std::invalid_argument("polling_distribution: unmapped node");
    ++polls[row.node];
  }
  return polling_distribution(std::span<const long>(polls), category_of, categories);
}

}  // namespace wurpoll
