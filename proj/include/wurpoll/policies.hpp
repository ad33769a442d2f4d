#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wurpoll/estimation.hpp"
#include "wurpoll/rng.hpp"
#include "wurpoll/whittle.hpp"

namespace wurpoll {

// Everything a policy is allowed to see: the sink-side records, the step and
// the channel budget. Ground truth never crosses this boundary.
struct SinkView {
  std::span<const SinkRecord> records;
  long t = 0;
  int m = 1;
};

// Post-transmission feedback for learning policies.
struct StepFeedback {
  long t = 0;
  std::span<const std::uint8_t> actions;
  std::span<const std::uint8_t> successes;
  std::span<const double> aoii_before;
  std::span<const double> aoii_next;
};

class Policy {
 public:
  virtual ~Policy() = default;

  // At most view.m distinct node ids, ascending. Deterministic given the
  // policy's internal state and the view.
  virtual std::vector<int> decide(const SinkView& view) = 0;
  virtual void observe(const StepFeedback&) {}
  virtual std::string_view name() const = 0;

  // Extras surfaced for logging; meaningful only for index policies.
  virtual double penalty() const { return 0.0; }
  virtual const IndexSnapshot* last_snapshot() const { return nullptr; }
};

class RoundRobinPolicy final : public Policy {
 public:
  explicit RoundRobinPolicy(int nodes) : nodes_(nodes) {}
  std::vector<int> decide(const SinkView& view) override;
  std::string_view name() const override { return "rr"; }

 private:
  int nodes_;
};

// Greedy on time since the last successful update, blind to the dynamics.
class AoiGreedyPolicy final : public Policy {
 public:
  std::vector<int> decide(const SinkView& view) override;
  std::string_view name() const override { return "aoi"; }
};

// Covariance-trace ranking under a constant-velocity model. A node is polled
// only while its predicted uncertainty exceeds the idle threshold, so nodes
// with fresh updates stay quiet.
class KalmanTracePolicy final : public Policy {
 public:
  KalmanTracePolicy(int nodes, double q, double r, double trace_threshold,
                    long dt = 1);

  std::vector<int> decide(const SinkView& view) override;
  void observe(const StepFeedback& fb) override;
  std::string_view name() const override { return "kf"; }

  double trace(int node) const;

 private:
  struct Cov {
    double p11, p12, p22;
  };
  void propagate(Cov& p) const;
  void measurement_update(Cov& p) const;

  std::vector<Cov> cov_;
  double q_;
  double r_;
  double threshold_;
  double dt_;
  long last_decide_t_ = -1;
};

struct FairnessAudit {
  long t = 0;
  double loss = 0.0;
  double bound = 0.0;
  bool overflow = false;
};

// Whittle-index policy over the sink records, with the online penalty update
// and optionally the fairness window. Nodes the sink has never heard from are
// polled first; a pure index rule would starve them forever.
class WhittleAoiiPolicy : public Policy {
 public:
  WhittleAoiiPolicy(WhittleConfig cfg, bool fairness);

  std::vector<int> decide(const SinkView& view) override;
  std::string_view name() const override { return fairness_ ? "fwaoii" : "waoii"; }

  double penalty() const override { return lambda_; }
  const IndexSnapshot* last_snapshot() const override { return &snapshot_; }

  std::span<const FairnessAudit> audits() const { return audits_; }
  long overflow_events() const { return overflow_events_; }
  void reset_penalty(double lambda) { lambda_ = lambda; }

 private:
  WhittleConfig cfg_;
  bool fairness_;
  double lambda_;
  IndexSnapshot snapshot_;
  std::vector<FairnessAudit> audits_;
  long overflow_events_ = 0;
};

struct WiqlConfig {
  int bins = 20;
  double aoii_cap = 50.0;
  double alpha_power = 0.6;       // alpha = 1 / (1 + visits)^power
  double eps0 = 0.99;
  double eps_decay = 0.999;
  double eps_floor = 0.01;
  double lambda = 0.5;            // activation penalty inside the reward
  double gamma = 0.99;            // unused in the average-reward mode
  bool discounted = false;

  void validate() const;
};

// Simplified tabular index learner: each arm keeps a Q-table over discretized
// AoII and learns under the average-reward criterion from r = -(AoII + lambda*a).
// Selection is epsilon-greedy on the activation advantage Q(s,1) - Q(s,0).
class WiqlPolicy final : public Policy {
 public:
  WiqlPolicy(int nodes, WiqlConfig cfg, Rng rng);

  std::vector<int> decide(const SinkView& view) override;
  void observe(const StepFeedback& fb) override;
  std::string_view name() const override { return "wiql"; }

  int bin_of(double aoii_value) const;
  double q_value(int node, int bin, int action) const;
  long clamp_events() const { return clamp_events_; }

 private:
  WiqlConfig cfg_;
  int nodes_;
  Rng rng_;
  std::vector<double> q_;       // [node][bin][action]
  std::vector<long> visits_;    // same shape
  double avg_reward_ = 0.0;
  long reward_count_ = 0;
  mutable long clamp_events_ = 0;
  long step_ = 0;

  std::size_t idx(int node, int bin, int action) const {
    return (static_cast<std::size_t>(node) * cfg_.bins + bin) * 2 + action;
  }
};

struct PolicyConfig {
  std::string name = "waoii";  // rr | aoi | kf | waoii | fwaoii | wiql
  WhittleConfig whittle;
  double kf_q = 0.01;
  double kf_r = 0.25;
  // predicted variance after ~30 idle steps at the default noise scales
  double kf_trace_threshold = 170.0;
  WiqlConfig wiql;

  void validate() const;
};

std::unique_ptr<Policy> make_policy(const PolicyConfig& cfg, int nodes,
                                    std::uint64_t seed);

}  // namespace wurpoll
