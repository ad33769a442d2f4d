#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace wurpoll {

// One homogeneous group of sensors: sinusoid around a mean plus Gaussian noise.
struct CategorySpec {
  double mean_value = 20.0;
  double amplitude = 5.0;
  double period = 500.0;   // steps per oscillation
  double noise_sigma = 0.1;
  int node_count = 1;

  void validate() const;
};

// Synthetic world description. If reversal_time is set, the first two
// categories exchange (amplitude, period, sigma) from that step onward.
struct ScenarioSpec {
  std::vector<CategorySpec> categories;
  std::optional<long> reversal_time;
  long horizon = 10000;

  int node_count() const;
  int category_of(int node) const;
  std::vector<int> category_map() const;
  void validate() const;
};

// Built-in worlds. nodes_per_category scales the population while keeping the
// per-category dynamics; the defaults are 2x5, 3x10 and 2x5 nodes.
ScenarioSpec scenario_one(int nodes_per_category = 5);
ScenarioSpec scenario_two(int nodes_per_category = 10);
ScenarioSpec scenario_three(int nodes_per_category = 5);

enum class TraceValueKind { temperature, humidity, light, voltage };

// Binding of a delimited trace file (comma or whitespace separated) to the
// simulator grid. Column indices are zero-based; the defaults match the
// Intel-lab layout: date time epoch moteid temperature humidity light voltage.
struct TraceSpec {
  std::string path;
  int node_column = 3;
  int time_column = 2;
  int value_column = 4;
  double resample_interval = 1.0;  // raw-timestamp units per simulator step
  TraceValueKind kind = TraceValueKind::temperature;

  void validate() const;
};

int default_value_column(TraceValueKind kind);

struct TraceLoadReport {
  std::vector<int> node_ids;           // original ids, ascending
  long skipped_rows = 0;               // malformed rows
  long filled_gaps = 0;                // grid cells carried forward/back
  std::vector<int> excluded_node_ids;  // seen but with no valid sample
};

// Dense per-node, per-step ground truth. Read-only after construction.
class GroundTruth {
 public:
  GroundTruth(int nodes, long steps)
      : nodes_(nodes), steps_(steps),
        data_(static_cast<std::size_t>(nodes) * static_cast<std::size_t>(steps)) {}

  double value(int node, long t) const {
    return data_[static_cast<std::size_t>(node) * steps_ + t];
  }
  double& at(int node, long t) {
    return data_[static_cast<std::size_t>(node) * steps_ + t];
  }

  int node_count() const { return nodes_; }
  long step_count() const { return steps_; }

 private:
  int nodes_;
  long steps_;
  std::vector<double> data_;
};

// Pure function of (spec, seed): identical inputs give bit-identical output.
GroundTruth generate_synthetic(const ScenarioSpec& spec, std::uint64_t seed);

// Resamples raw readings onto a uniform step grid, forward-filling between
// samples (head cells take the first sample). Malformed rows are skipped and
// counted; a file with no usable row is an error.
GroundTruth load_trace(const TraceSpec& spec, TraceLoadReport* report = nullptr);

}  // namespace wurpoll
