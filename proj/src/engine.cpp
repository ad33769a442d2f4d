#include "wurpoll/engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wurpoll {

LinkModel ChannelConfig::link_for(int nodes) const {
  LinkModel link;
  if (!per_node_pdr.empty()) {
    if (static_cast<int>(per_node_pdr.size()) != nodes)
      throw std::invalid_argument("per-node pdr list does not match node count");
    link.pdr = per_node_pdr;
  } else {
    link.pdr.assign(nodes, pdr);
  }
  link.retry_limit = retry_limit;
  link.wakeup_reliability = wakeup_reliability;
  link.validate();
  return link;
}

void SimConfig::validate() const {
  std::vector<std::string> problems;
  auto check = [&](bool ok, const char* msg) {
    if (!ok) problems.emplace_back(msg);
  };

  check(horizon >= 1, "horizon must be >= 1");
  check(dt >= 1, "dt must be >= 1");
  check(m >= 1, "m must be >= 1");
  check(step_seconds > 0, "step_seconds must be > 0");
  check(cost_lambda >= 0, "cost_lambda must be >= 0");
  check(beta1 > 0 && beta1 < 1, "beta1 must lie in (0,1)");
  check(beta2 > 0 && beta2 < 1, "beta2 must lie in (0,1)");
  check(beta3 >= 0 && beta3 <= 1, "beta3 must lie in [0,1]");
  check(pdr_window >= 1, "pdr_window must be >= 1");
  check(scenario.has_value() != trace.has_value(),
        "exactly one of scenario/trace must be set");

  int nodes = 0;
  if (scenario) {
    try {
      ScenarioSpec s = *scenario;
      s.horizon = horizon;
      s.validate();
      nodes = s.node_count();
    } catch (const std::exception& e) {
      problems.emplace_back(e.what());
    }
  }
  if (trace) {
    try {
      trace->validate();
    } catch (const std::exception& e) {
      problems.emplace_back(e.what());
    }
  }
  if (nodes > 0) check(m <= nodes, "m must not exceed the node count");

  try {
    policy.validate();
  } catch (const std::exception& e) {
    problems.emplace_back(e.what());
  }
  try {
    EnergyModel em = energy;
    em.validate();
  } catch (const std::exception& e) {
    problems.emplace_back(e.what());
  }
  check(channel.pdr >= 0 && channel.pdr <= 1, "channel pdr must lie in [0,1]");
  check(channel.retry_limit >= 0, "retry_limit must be >= 0");
  check(channel.wakeup_reliability >= 0 && channel.wakeup_reliability <= 1,
        "wakeup_reliability must lie in [0,1]");

  if (!problems.empty()) {
    std::ostringstream out;
    out << "invalid config:";
    for (const auto& p : problems) out << "\n  - " << p;
    throw std::invalid_argument(out.str());
  }
}

namespace {

void check_decision(const std::vector<int>& decision, int nodes, int m) {
  if (static_cast<int>(decision.size()) > m)
    throw std::logic_error("policy returned more than m nodes");
  for (std::size_t k = 0; k < decision.size(); ++k) {
    if (decision[k] < 0 || decision[k] >= nodes)
      throw std::logic_error("policy returned an invalid node id");
    if (k > 0 && decision[k] == decision[k - 1])
      throw std::logic_error("policy returned a duplicate node id");
  }
}

}  // namespace

RunResult run(const SimConfig& cfg, const GroundTruth& world,
              const std::vector<int>& category_map, int categories,
              const std::string& config_hash) {
  cfg.validate();
  const int n = world.node_count();
  const long horizon = std::min(cfg.horizon, world.step_count());
  if (cfg.m > n) throw std::invalid_argument("m exceeds the world's node count");
  if (static_cast<int>(category_map.size()) != n)
    throw std::invalid_argument("category map does not cover the world");

  const LinkModel link = cfg.channel.link_for(n);
  auto policy = make_policy(cfg.policy, n, cfg.seed);

  std::vector<NodeEncoder> encoders(n, NodeEncoder(cfg.beta1, cfg.beta2, cfg.dt));
  std::vector<SinkRecord> records(n);
  for (auto& rec : records) rec.beta3 = cfg.beta3;
  std::vector<PdrWindow> windows(n, PdrWindow(cfg.pdr_window));
  std::vector<Rng> channel_rng;
  channel_rng.reserve(n);
  for (int i = 0; i < n; ++i)
    channel_rng.push_back(Rng::for_stream(cfg.seed, /*stream=*/2, i));

  RunResult result;
  result.logs.reserve(static_cast<std::size_t>(n) * horizon);

  std::vector<StateVector> vectors(n);
  std::vector<double> aoii_before(n), aoii_after(n), estimates(n);
  std::vector<std::uint8_t> actions(n), successes(n);
  std::vector<long> polls(n, 0), attempts(n, 0), wakeups(n, 0), succ(n, 0);

  double reward_acc = 0.0;
  double aoii_acc = 0.0;

  for (long t = 0; t < horizon; ++t) {
    // sense + encode on every node, polled or not
    for (int i = 0; i < n; ++i) vectors[i] = encoders[i].encode(world.value(i, t), t);

    // pre-decision belief, shared footing for every policy
    for (int i = 0; i < n; ++i) {
      aoii_before[i] = aoii(records[i], t);
      estimates[i] = extrapolate(records[i], t).x1;
    }

    // polling starts one interval in so the first delivered vector already
    // carries a rate; a t=0 vector is a bare sample with x2 pinned at zero
    const SinkView view{records, t, cfg.m};
    const std::vector<int> decision =
        t >= 1 ? policy->decide(view) : std::vector<int>{};
    check_decision(decision, n, cfg.m);

    std::fill(actions.begin(), actions.end(), 0);
    std::fill(successes.begin(), successes.end(), 0);
    for (int id : decision) actions[id] = 1;

    std::vector<PollOutcome> outcomes(decision.size());
    for (std::size_t k = 0; k < decision.size(); ++k)
      outcomes[k] = poll(link, decision[k], channel_rng[decision[k]]);

    // next-step ages from the pre-update records
    for (int i = 0; i < n; ++i)
      aoii_after[i] = aoii_next(records[i], t, actions[i] != 0, false);

    for (std::size_t k = 0; k < decision.size(); ++k) {
      const int id = decision[k];
      const PollOutcome& oc = outcomes[k];
      if (oc.woke) ++wakeups[id];
      attempts[id] += oc.attempts;
      ++polls[id];
      if (oc.success) {
        successes[id] = 1;
        aoii_after[id] = 0.0;
        ++succ[id];
        apply_update(records[id], vectors[id], t);
        result.updates.push_back({id, t, vectors[id].x1, vectors[id].x2});
      }
      windows[id].push(oc.success);
      update_pdr(records[id], windows[id].ratio());
      records[id].last_poll_time = t;
    }

    policy->observe({t, actions, successes, aoii_before, aoii_after});

    std::vector<int> attempt_count(n, 0);
    for (std::size_t k = 0; k < decision.size(); ++k)
      attempt_count[decision[k]] = outcomes[k].attempts;

    const double lambda = policy->penalty();
    const IndexSnapshot* snap = policy->last_snapshot();
    if (snap && snap->size() != n) snap = nullptr;  // no decision this step
    for (int i = 0; i < n; ++i) {
      StepLog row;
      row.t = t;
      row.node = i;
      row.action = actions[i];
      row.success = successes[i];
      row.attempts = attempt_count[i];
      row.aoii = aoii_before[i];
      row.truth = world.value(i, t);
      row.estimate = estimates[i];
      row.index_w = snap ? snap->nodes[i].w : 0.0;
      row.lambda = lambda;
      result.logs.push_back(row);
      if (cfg.index_dump && snap)
        result.index_rows.push_back({t, i, snap->nodes[i].w, snap->nodes[i].c,
                                     static_cast<std::uint8_t>(snap->nodes[i].fairness_due)});
    }

    double cost = 0.0;
    for (int i = 0; i < n; ++i) cost += aoii_before[i];
    cost += cfg.cost_lambda * static_cast<double>(decision.size());
    reward_acc += -cost;
    for (int i = 0; i < n; ++i) aoii_acc += aoii_before[i];
  }

  // summary
  RunSummary& s = result.summary;
  s.policy = std::string(policy->name());
  s.config_hash = config_hash;
  s.horizon = horizon;
  s.node_count = n;
  s.m = cfg.m;
  s.seed = cfg.seed;
  s.polls_per_node = polls;
  s.attempts_per_node = attempts;
  for (int i = 0; i < n; ++i) {
    s.total_polls += polls[i];
    s.total_packets += attempts[i];
    s.successful_polls += succ[i];
  }
  s.mean_aoii = aoii_acc / static_cast<double>(n) / static_cast<double>(horizon);
  s.mean_reward = reward_acc / static_cast<double>(horizon);

  s.rmse_per_node.resize(n);
  {
    std::vector<double> sq(n, 0.0);
    for (const auto& row : result.logs) {
      const double d = row.truth - row.estimate;
      sq[row.node] += d * d;
    }
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      s.rmse_per_node[i] = std::sqrt(sq[i] / static_cast<double>(horizon));
      total += sq[i];
    }
    s.rmse_overall =
        std::sqrt(total / static_cast<double>(n) / static_cast<double>(horizon));
  }

  {
    std::vector<double> wt(n), ww(n);
    for (int i = 0; i < n; ++i) {
      wt[i] = static_cast<double>(attempts[i]) / static_cast<double>(horizon);
      ww[i] = static_cast<double>(wakeups[i]) / static_cast<double>(horizon);
    }
    s.lifetime_in_steps = lifetime_steps(cfg.energy, wt, ww);
    s.lifetime_in_years = lifetime_years(s.lifetime_in_steps, cfg.step_seconds);
  }

  s.polls_per_category_pct =
      polling_distribution(std::span<const long>(polls), category_map, categories);
  s.lambda_final = policy->penalty();

  if (auto* wp = dynamic_cast<WhittleAoiiPolicy*>(policy.get())) {
    s.fairness_overflow_events = wp->overflow_events();
    result.fairness_audits.assign(wp->audits().begin(), wp->audits().end());
  }
  if (auto* ql = dynamic_cast<WiqlPolicy*>(policy.get()))
    s.aoii_clamp_events = ql->clamp_events();

  return result;
}

RunResult run(const SimConfig& cfg, const std::string& config_hash) {
  cfg.validate();
  if (cfg.scenario) {
    ScenarioSpec spec = *cfg.scenario;
    spec.horizon = cfg.horizon;
    const GroundTruth world = generate_synthetic(spec, cfg.seed);
    return run(cfg, world, spec.category_map(),
               static_cast<int>(spec.categories.size()), config_hash);
  }
  TraceLoadReport report;
  const GroundTruth world = load_trace(*cfg.trace, &report);
  const std::vector<int> category_map(world.node_count(), 0);
  return run(cfg, world, category_map, 1, config_hash);
}

RunSummary aggregate_summaries(const std::vector<RunSummary>& summaries) {
  if (summaries.empty()) throw std::invalid_argument("nothing to aggregate");
  RunSummary agg = summaries.front();
  const double k = static_cast<double>(summaries.size());

  auto mean_of = [&](auto getter) {
    double acc = 0.0;
    for (const auto& s : summaries) acc += getter(s);
    return acc / k;
  };

  agg.policy = summaries.front().policy;
  agg.seed = 0;
  agg.mean_aoii = mean_of([](const RunSummary& s) { return s.mean_aoii; });
  agg.mean_reward = mean_of([](const RunSummary& s) { return s.mean_reward; });
  agg.rmse_overall = mean_of([](const RunSummary& s) { return s.rmse_overall; });
  agg.lifetime_in_steps = mean_of([](const RunSummary& s) { return s.lifetime_in_steps; });
  agg.lifetime_in_years = mean_of([](const RunSummary& s) { return s.lifetime_in_years; });
  agg.lambda_final = mean_of([](const RunSummary& s) { return s.lambda_final; });

  auto sum_long = [&](auto getter) {
    long acc = 0;
    for (const auto& s : summaries) acc += getter(s);
    return acc;
  };
  agg.total_polls = sum_long([](const RunSummary& s) { return s.total_polls; });
  agg.total_packets = sum_long([](const RunSummary& s) { return s.total_packets; });
  agg.successful_polls = sum_long([](const RunSummary& s) { return s.successful_polls; });
  agg.fairness_overflow_events =
      sum_long([](const RunSummary& s) { return s.fairness_overflow_events; });
  agg.aoii_clamp_events = sum_long([](const RunSummary& s) { return s.aoii_clamp_events; });

  const int n = agg.node_count;
  agg.polls_per_node.assign(n, 0);
  agg.attempts_per_node.assign(n, 0);
  agg.rmse_per_node.assign(n, 0.0);
  for (const auto& s : summaries)
    for (int i = 0; i < n; ++i) {
      agg.polls_per_node[i] += s.polls_per_node[i];
      agg.attempts_per_node[i] += s.attempts_per_node[i];
      agg.rmse_per_node[i] += s.rmse_per_node[i] / k;
    }

  const std::size_t cats = agg.polls_per_category_pct.size();
  agg.polls_per_category_pct.assign(cats, 0.0);
  for (const auto& s : summaries)
    for (std::size_t c = 0; c < cats; ++c)
      agg.polls_per_category_pct[c] += s.polls_per_category_pct[c] / k;

  return agg;
}

ReplicationResult run_replications(const SimConfig& cfg,
                                   const std::vector<std::uint64_t>& seeds,
                                   const std::string& config_hash) {
  if (seeds.empty()) throw std::invalid_argument("run_replications needs seeds");
  ReplicationResult out;
  for (std::uint64_t seed : seeds) {
    SimConfig c = cfg;
    c.seed = seed;
    try {
      out.per_seed.push_back(run(c, config_hash).summary);
    } catch (const std::exception& e) {
      throw std::runtime_error("replication with seed " + std::to_string(seed) +
                               " failed: " + e.what());
    }
  }
  out.aggregate = aggregate_summaries(out.per_seed);
  return out;
}

}  // namespace wurpoll
