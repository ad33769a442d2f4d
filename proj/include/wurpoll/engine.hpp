#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wurpoll/channel.hpp"
#include "wurpoll/metrics.hpp"
#include "wurpoll/policies.hpp"
#include "wurpoll/steplog.hpp"
#include "wurpoll/world.hpp"

namespace wurpoll {

struct ChannelConfig {
  double pdr = 0.9;                  // uniform true delivery probability
  std::vector<double> per_node_pdr;  // overrides the uniform value when set
  int retry_limit = 3;
  double wakeup_reliability = 1.0;

  LinkModel link_for(int nodes) const;
};

// Full description of one run. Exactly one of scenario/trace supplies the
// world; every knob is serializable so a config hash pins the run.
struct SimConfig {
  int m = 1;
  long horizon = 10000;
  long dt = 1;
  std::uint64_t seed = 1;
  double step_seconds = 30.0;
  double cost_lambda = 0.5;  // activation penalty inside the scored cost
  bool index_dump = false;

  std::optional<ScenarioSpec> scenario;
  std::optional<TraceSpec> trace;

  double beta1 = 0.5;
  double beta2 = 0.2;
  double beta3 = 0.1;
  int pdr_window = 20;

  PolicyConfig policy;
  ChannelConfig channel;
  EnergyModel energy;

  // Throws with every violation listed, so a bad config fails before step 0.
  void validate() const;
};

struct RunResult {
  std::vector<StepLog> logs;
  std::vector<UpdateLogRow> updates;
  std::vector<IndexLogRow> index_rows;
  std::vector<FairnessAudit> fairness_audits;
  RunSummary summary;
};

// One reproducible run: identical config (seed included) gives bit-identical
// logs. The config hash is computed by the config layer and may be passed in
// for provenance stamping.
RunResult run(const SimConfig& cfg, const std::string& config_hash = "");

// Same, against an externally built world (shared across policies in suites
// and used by tests to probe the information barrier).
RunResult run(const SimConfig& cfg, const GroundTruth& world,
              const std::vector<int>& category_map, int categories,
              const std::string& config_hash = "");

// Mean of per-seed summaries, aggregated in seed order.
RunSummary aggregate_summaries(const std::vector<RunSummary>& summaries);

struct ReplicationResult {
  std::vector<RunSummary> per_seed;
  RunSummary aggregate;
};

ReplicationResult run_replications(const SimConfig& cfg,
                                   const std::vector<std::uint64_t>& seeds,
                                   const std::string& config_hash = "");

}  // namespace wurpoll
